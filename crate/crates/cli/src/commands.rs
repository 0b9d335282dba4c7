use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::json;

use twins_core::bounds::{self, BoundName, BoundValue, Crossover};
use twins_core::constructions::{
    boost, boost_pipeline, interlace, provider_profile, segment_concat_r, BaseSolver, ConstructionReport,
};
use twins_core::enumerator::{self, Checkpoint, EnumOptions};
use twins_core::models::{run_config, sample_binomial, ExperimentConfig, RandomStream};
use twins_core::solver::longest_twins_oracle_with_budget;
use twins_core::{verify_twins, Alphabet, Error, SolverKind, TwinWitness, Word};

use crate::{
    svg, BoundsArgs, ConstructArgs, EnumerateArgs, Exit, Method, Mode, SimulateArgs, SolveArgs, VerifyArgs, WordInput,
};

pub struct Context {
    pub seed: u64,
    pub workers: usize,
    pub out_dir: Option<PathBuf>,
    pub json: bool,
}

type Outcome = Result<(), Exit>;

impl Context {
    fn save(&self, name: &str, content: &str) -> Outcome {
        if let Some(dir) = &self.out_dir {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(name), content)?;
        }
        Ok(())
    }
}

fn read_word(input: &WordInput) -> Result<Word, Exit> {
    let text = match (&input.word, &input.file) {
        (Some(w), _) => w.clone(),
        (None, Some(path)) => fs::read_to_string(path)?,
        (None, None) => return Err(Exit::usage("give --word or --file")),
    };
    let word = match input.k {
        Some(k) => Word::parse_with(&text, Alphabet::new(k)?)?,
        None => Word::parse(&text)?,
    };
    Ok(word)
}

fn read_witness(path: &Path) -> Result<TwinWitness, Exit> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn pretty<T: Serialize>(v: &T) -> Result<String, Exit> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn mode_kind(mode: Mode) -> SolverKind {
    match mode {
        Mode::Oracle => SolverKind::Oracle,
        Mode::Fast => SolverKind::Fast,
        Mode::Quick => SolverKind::Quick,
    }
}

pub fn solve(ctx: &Context, a: SolveArgs) -> Outcome {
    let word = read_word(&a.input)?;
    let res = match a.mode {
        Mode::Oracle => longest_twins_oracle_with_budget(&word, a.r, a.budget)?,
        mode => mode_kind(mode).solve(&word, a.r)?,
    };
    let report = json!({
        "word": word.to_string(),
        "r": a.r,
        "mode": mode_kind(a.mode),
        "length": res.length,
        "witness": res.witness,
        "nodesExplored": res.nodes_explored,
    });
    let text = pretty(&report)?;
    ctx.save("solve.json", &text)?;
    if ctx.json {
        print!("{text}");
    } else {
        println!("length,{}", res.length);
        println!("witness,{}", serde_json::to_string(&res.witness)?);
    }
    Ok(())
}

pub fn enumerate(ctx: &Context, a: EnumerateArgs) -> Outcome {
    let opts = EnumOptions {
        symmetry_reduction: !a.no_symmetry,
        workers: ctx.workers,
        word_budget: if a.extended {
            enumerator::EXTENDED_WORD_BUDGET
        } else {
            enumerator::DEFAULT_WORD_BUDGET
        },
    };
    let resume = match &a.checkpoint {
        Some(path) if path.exists() => Some(serde_json::from_str::<Checkpoint>(&fs::read_to_string(path)?)?),
        _ => None,
    };
    let cp_path = a.checkpoint.clone();
    let table = enumerator::lambda_table_resumable(a.k, a.s, &opts, resume, |cp| {
        if let Some(path) = &cp_path {
            let tmp = path.with_extension("tmp");
            let text = serde_json::to_string(cp).map_err(|e| Error::Domain(e.to_string()))?;
            fs::write(&tmp, text)
                .and_then(|_| fs::rename(&tmp, path))
                .map_err(|e| Error::Domain(format!("writing checkpoint: {e}")))?;
        }
        Ok(())
    })
    .map_err(|e| match e {
        Error::BudgetExceeded { .. } => Exit {
            code: 3,
            message: format!("{e}; pass --extended to enumerate {}^{} words", a.k, a.s),
        },
        other => other.into(),
    })?;
    let rho = enumerator::rho(&table);
    let csv = table.to_csv();
    let summary = json!({
        "k": table.k,
        "s": table.s,
        "method": table.method,
        "lambda": table.lambda,
        "rho": {
            "unreduced": rho.unreduced(),
            "reduced": rho.value.to_string(),
            "decimal": rho.decimal6(),
        },
    });
    let json_text = pretty(&summary)?;
    ctx.save(&format!("lambda_k{}_s{}.csv", a.k, a.s), &csv)?;
    ctx.save(&format!("lambda_k{}_s{}.json", a.k, a.s), &json_text)?;
    if ctx.json {
        print!("{json_text}");
    } else {
        print!("{csv}");
        println!("rho = {} = {} ~ {}", rho.unreduced(), rho.value, rho.decimal6());
    }
    Ok(())
}

pub fn simulate(ctx: &Context, a: SimulateArgs) -> Outcome {
    let text = fs::read_to_string(&a.config)?;
    let config: ExperimentConfig = serde_json::from_str(&text)?;
    let summary = run_config(&config, ctx.workers)?;
    let json_text = pretty(&summary)?;
    let csv = summary.histogram_csv();
    let plot = svg::histogram(&summary);
    ctx.save("summary.json", &json_text)?;
    ctx.save("histogram.csv", &csv)?;
    ctx.save("histogram.svg", &plot)?;
    if let Some(path) = &a.svg {
        fs::write(path, &plot)?;
    }
    if ctx.json {
        print!("{json_text}");
    } else {
        println!("statistic,trials,mean,std_dev,min,max");
        println!(
            "{},{},{},{},{},{}",
            summary.statistic, summary.trials, summary.mean, summary.std_dev, summary.min, summary.max
        );
        print!("{csv}");
    }
    Ok(())
}

pub fn construct(ctx: &Context, a: ConstructArgs) -> Outcome {
    let word = match a.random {
        Some(n) => {
            let k = a.input.k.ok_or_else(|| Exit::usage("--random needs --k"))?;
            sample_binomial(n, k, &mut RandomStream::new(ctx.seed, 0).rng())?
        }
        None => read_word(&a.input)?,
    };
    let solver = mode_kind(a.mode);
    let report = match a.method {
        Method::Segment => {
            let s = a.s.ok_or_else(|| Exit::usage("segment needs --s"))?;
            let plan = segment_concat_r(&word, s, a.r, solver)?;
            ConstructionReport {
                method: "segment".into(),
                parameters: json!({"s": s, "r": a.r, "segments": plan.segment_count}),
                length: plan.length(),
                witness: plan.witness,
                covered: None,
            }
        }
        Method::Interlace => {
            let m = a.m.ok_or_else(|| Exit::usage("interlace needs --m"))?;
            let out = interlace(&word, a.r, m)?;
            ConstructionReport {
                method: "interlace".into(),
                parameters: json!({"r": a.r, "m": m, "mu": out.mu, "segmentLength": out.segment_length}),
                length: out.witness.len(),
                witness: out.witness,
                covered: Some(out.covered),
            }
        }
        Method::Boost => {
            let path = a.witness.as_ref().ok_or_else(|| Exit::usage("boost needs --witness"))?;
            let base = read_witness(path)?;
            let profile = provider_profile(&word, &base)?;
            let out = boost(&word, &base)?;
            ConstructionReport {
                method: "boost".into(),
                parameters: json!({"baseLength": base.len(), "gain": profile.gain(), "providers": profile.providers}),
                length: out.len(),
                witness: out,
                covered: None,
            }
        }
        Method::Pipeline => {
            let base = match a.base.as_str() {
                "segment" => BaseSolver::SegmentConcat {
                    s: a.s.ok_or_else(|| Exit::usage("segment base needs --s"))?,
                    solver,
                },
                "segment-count" => BaseSolver::SegmentCount {
                    count: a.m.unwrap_or(10),
                    solver,
                },
                "interlace" => BaseSolver::Interlace {
                    m: a.m.ok_or_else(|| Exit::usage("interlace base needs --m"))?,
                },
                other => return Err(Exit::usage(format!("unknown pipeline base `{other}`"))),
            };
            let out = boost_pipeline(&word, a.k_start, a.r, base)?;
            ConstructionReport {
                method: "pipeline".into(),
                parameters: json!({"kStart": a.k_start, "r": a.r, "base": base, "baseLength": out.base_length, "steps": out.steps}),
                length: out.witness.len(),
                witness: out.witness,
                covered: None,
            }
        }
    };
    let text = pretty(&report)?;
    ctx.save("construction.json", &text)?;
    if ctx.json {
        print!("{text}");
    } else {
        println!("method,length,covered");
        let covered = report.covered.map(|c| c.to_string()).unwrap_or_default();
        println!("{},{},{}", report.method, report.length, covered);
    }
    Ok(())
}

pub fn bounds(ctx: &Context, a: BoundsArgs) -> Outcome {
    let mut rows: Vec<BoundValue> = Vec::new();
    if let Some(table) = a.table {
        match table {
            1 => {
                for k in bounds::TABLE1_K {
                    rows.push(bounds::bound_coefficient_at(BoundName::Bz2, k, None)?);
                    rows.push(bounds::bound_coefficient_at(BoundName::Thm12, k, None)?);
                }
            }
            2 => {
                for (r, k) in bounds::TABLE2_RK {
                    let k: BigUint = k.parse().expect("table columns are integers");
                    rows.push(bounds::bound_coefficient(BoundName::Bzr, &k, Some(r))?);
                    rows.push(bounds::bound_coefficient(BoundName::Pi, &k, Some(r))?);
                }
            }
            other => return Err(Exit::usage(format!("no table {other}; choose 1 or 2"))),
        }
    } else if let Some(name) = &a.name {
        let name: BoundName = name.parse().map_err(|e: Error| Exit::usage(e.to_string()))?;
        if let Some(other) = &a.crossover {
            let other: BoundName = other.parse().map_err(|e: Error| Exit::usage(e.to_string()))?;
            let result = bounds::crossover_k(name, other, a.r, a.limit)?;
            let text = match result {
                Crossover::At(k) => format!("{name},{other},{k}"),
                Crossover::LimitReached(k) => format!("{name},{other},>={k}"),
                Crossover::Never => format!("{name},{other},none"),
            };
            ctx.save("crossover.csv", &format!("a,b,k\n{text}\n"))?;
            if ctx.json {
                print!("{}", pretty(&json!({"a": name, "b": other, "crossover": result}))?);
            } else {
                println!("a,b,k\n{text}");
            }
            return Ok(());
        }
        let k = a.k.as_deref().ok_or_else(|| Exit::usage("--name needs --k"))?;
        let k: BigUint = k.parse().map_err(|_| Exit::usage(format!("bad --k `{k}`")))?;
        rows.push(bounds::bound_coefficient(name, &k, a.r)?);
    } else {
        return Err(Exit::usage("give --table or --name"));
    }
    let mut csv = String::from("name,r,k,coefficient,rendered\n");
    for v in &rows {
        let r = v.r.map(|r| r.to_string()).unwrap_or_default();
        csv.push_str(&format!("{},{},{},{},{}\n", v.name, r, v.k, v.digits, v.rendered));
    }
    let json_text = pretty(&rows)?;
    ctx.save("bounds.csv", &csv)?;
    ctx.save("bounds.json", &json_text)?;
    if ctx.json {
        print!("{json_text}");
    } else {
        print!("{csv}");
    }
    Ok(())
}

pub fn verify(ctx: &Context, a: VerifyArgs) -> Outcome {
    let word = read_word(&a.input)?;
    let witness = read_witness(&a.witness)?;
    let v = verify_twins(&word, &witness);
    let text = pretty(&v)?;
    if ctx.json {
        print!("{text}");
    } else {
        match v.reason {
            None => println!("valid,{}", v.length),
            Some(reason) => println!("invalid,{}", reason.code()),
        }
    }
    if v.valid {
        Ok(())
    } else {
        Err(Exit {
            code: 1,
            message: String::new(),
        })
    }
}
