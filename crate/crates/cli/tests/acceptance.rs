//! Acceptance suite: one check per criterion, one PASS/FAIL line each.
//! Runs without the libtest harness so the lines always reach stdout.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use num_bigint::BigInt;
use rand::Rng;

use twins_core::bounds::binom_ratio;
use twins_core::constructions::{
    boost, boost_pipeline, interlace, iterated_coefficient, segment_concat_r, BaseSolver, BoostVariant,
};
use twins_core::enumerator::{rho, LambdaTable, Method};
use twins_core::models::{
    arrangements, chi_square, fixed_counts_distribution, insert_letter_phase2, run_experiment, sample_binomial,
    sample_fixed_counts, total_variation, two_phase_distribution, ModelSpec, RandomStream, Statistic, THRESHOLDS,
};
use twins_core::solver::{longest_twins_fast, longest_twins_oracle, longest_twins_quick};
use twins_core::{verify_twins, Alphabet, LetterCounts, Rational, SolverKind, Word};

const BIN: &str = env!("CARGO_BIN_EXE_twins");
const SEED: u64 = 2024;

/// Reference λ_t columns, for s = 6..=14 and t = 1..=⌊s/2⌋.
const LAMBDA_COLUMNS: [(usize, &[u64]); 9] = [
    (6, &[42, 594, 93]),
    (7, &[6, 1086, 1095]),
    (8, &[0, 822, 5118, 621]),
    (9, &[0, 288, 11010, 8385]),
    (10, &[0, 42, 10806, 43776, 4425]),
    (11, &[0, 0, 5292, 106032, 65823]),
    (12, &[0, 0, 1350, 123750, 373638, 32703]),
    (13, &[0, 0, 162, 75810, 992244, 526107]),
    (14, &[0, 0, 0, 24894, 1312530, 3196644, 248901]),
];

/// Reference 3-decimal values: (name, r, k, value).
const TABLE1: [(&str, &str, &str); 16] = [
    ("bz2", "3", "0.333"),
    ("thm12", "3", "1.230"),
    ("bz2", "4", "0.367"),
    ("thm12", "4", "1.312"),
    ("bz2", "5", "0.395"),
    ("thm12", "5", "1.367"),
    ("bz2", "10", "0.498"),
    ("thm12", "10", "1.491"),
    ("bz2", "50", "0.851"),
    ("thm12", "50", "1.608"),
    ("bz2", "100", "1.073"),
    ("thm12", "100", "1.624"),
    ("bz2", "200", "1.352"),
    ("thm12", "200", "1.632"),
    ("bz2", "400", "1.703"),
    ("thm12", "400", "1.636"),
];

const TABLE2: [(&str, &str, &str, &str); 14] = [
    ("bzr", "3", "4", "0.196"),
    ("pi", "3", "4", "1.016"),
    ("bzr", "3", "10", "0.214"),
    ("pi", "3", "10", "1.036"),
    ("bzr", "3", "100", "1.036"),
    ("pi", "3", "100", "1.041"),
    ("bzr", "3", "1000", "0.340"),
    ("pi", "3", "1000", "1.041"),
    ("bzr", "3", "10000000000", "1.703"),
    ("pi", "3", "10000000000", "1.041"),
    ("bzr", "4", "10000000000", "0.261"),
    ("pi", "4", "10000000000", "1.003"),
    ("bzr", "4", "10000000000000000000000000000000000000000", "1.878"),
    ("pi", "4", "10000000000000000000000000000000000000000", "1.003"),
];

/// Reference entries known to disagree with the formula: (name, r, k).
const TABLE_ALLOW: [(&str, &str, &str); 1] = [("bzr", "3", "100")];

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn twins(dir: &Path, args: &[&str], workers: Option<usize>) -> Run {
    let mut c = Command::new(BIN);
    c.args(args).current_dir(dir).env_remove("TWINS_THREADS");
    if let Some(w) = workers {
        c.arg("--workers").arg(w.to_string());
    }
    let o = c.output().expect("binary runs");
    Run {
        code: o.status.code().unwrap_or(-1),
        stdout: String::from_utf8(o.stdout).expect("utf-8 output"),
        stderr: String::from_utf8_lossy(&o.stderr).into_owned(),
    }
}

type Outcome = Result<String, String>;
type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn expected_column(s: usize) -> Vec<u64> {
    let (_, col) = LAMBDA_COLUMNS.iter().find(|(len, _)| *len == s).expect("reference column");
    let mut full = vec![0];
    full.extend_from_slice(col);
    full
}

/// Parses `enumerate` CSV output into (λ by t, rho line).
fn parse_enumeration(text: &str) -> Result<(Vec<u64>, String), String> {
    let mut lines = text.lines();
    ensure(lines.next() == Some("k,s,t,lambda"), || "missing CSV header".into())?;
    let mut lambda = Vec::new();
    let mut rho_line = String::new();
    for line in lines {
        if line.starts_with("rho") {
            rho_line = line.to_string();
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let t: usize = fields[2].parse().map_err(|_| format!("bad row {line}"))?;
        ensure(t == lambda.len(), || format!("rows out of order at {line}"))?;
        lambda.push(fields[3].parse().map_err(|_| format!("bad row {line}"))?);
    }
    Ok((lambda, rho_line))
}

fn check_columns(dir: &Path, sizes: &[usize], extended: bool) -> Outcome {
    let mut notes = Vec::new();
    for &s in sizes {
        let s_arg = s.to_string();
        let mut args = vec!["enumerate", "--k", "3", "--s", &s_arg];
        if extended {
            args.extend(["--extended", "--checkpoint", "cp.json"]);
        }
        let started = Instant::now();
        let run = twins(dir, &args, None);
        ensure(run.code == 0, || {
            format!("s={s}: exit {}: {}", run.code, run.stderr.trim())
        })?;
        let (lambda, _) = parse_enumeration(&run.stdout)?;
        let want = expected_column(s);
        ensure(lambda == want, || format!("s={s}: got {lambda:?}, expected {want:?}"))?;
        let total: u64 = lambda.iter().sum();
        ensure(total == 3u64.pow(s as u32), || format!("s={s}: counts sum to {total}"))?;
        notes.push(format!("s={s} {:.1}s", started.elapsed().as_secs_f64()));
        let _ = fs::remove_file(dir.join("cp.json"));
    }
    Ok(notes.join(", "))
}

fn criterion1(dir: &Path) -> Outcome {
    let started = Instant::now();
    let notes = check_columns(dir, &[6, 7, 8, 9, 10], false)?;
    let secs = started.elapsed().as_secs_f64();
    ensure(secs <= 600.0, || format!("took {secs:.0}s"))?;
    Ok(notes)
}

fn criterion2(dir: &Path) -> Outcome {
    let gated = twins(dir, &["enumerate", "--k", "3", "--s", "14"], None);
    ensure(gated.code == 3, || {
        format!("s=14 without --extended exited {}", gated.code)
    })?;
    ensure(gated.stderr.contains("--extended"), || {
        format!("unhelpful message: {}", gated.stderr.trim())
    })?;
    let notes = check_columns(dir, &[11, 12, 13, 14], true)?;
    let run = twins(dir, &["enumerate", "--k", "3", "--s", "14", "--extended"], None);
    let (_, rho_line) = parse_enumeration(&run.stdout)?;
    ensure(rho_line.starts_with("rho = 27584397/66961566 ="), || {
        format!("got `{rho_line}`")
    })?;
    Ok(format!("{notes}; {rho_line}"))
}

fn criterion3() -> Outcome {
    let mut shown = Vec::new();
    for &(s, _) in &LAMBDA_COLUMNS {
        let lambda = expected_column(s);
        // Σ t·λ_t / (s·3^s), assembled by hand
        let num: u64 = lambda.iter().enumerate().map(|(t, &l)| t as u64 * l).sum();
        let den = s as u64 * 3u64.pow(s as u32);
        let want = Rational::new(BigInt::from(num), BigInt::from(den));
        let table = LambdaTable {
            k: 3,
            s,
            lambda,
            method: Method::Full,
        };
        let got = rho(&table);
        ensure(got.value == want, || format!("s={s}: {} != {want}", got.value))?;
        ensure(got.unreduced() == format!("{num}/{den}"), || {
            format!("s={s}: {}", got.unreduced())
        })?;
        if s == 6 {
            ensure(got.unreduced() == "1509/4374", || "s=6 is not 1509/4374".into())?;
        }
        shown.push(format!("s={s} {}", got.unreduced()));
    }
    Ok(shown.join(", "))
}

fn criterion4(workers: usize) -> Outcome {
    let stat = Statistic::SegmentConcatRatio {
        s: 14,
        r: 2,
        solver: SolverKind::Fast,
    };
    let model = ModelSpec::Binomial { n: 1400, k: 3 };
    let summary = run_experiment(&model, &stat, 100, RandomStream::new(SEED, 0), workers).map_err(|e| e.to_string())?;
    let rho14 = 27584397.0 / 66961566.0;
    let m = summary.mean;
    ensure(m >= 0.41, || format!("mean {m:.5} < 0.41"))?;
    ensure((m - 0.4119).abs() <= 0.01, || {
        format!("mean {m:.5} not within 0.01 of 0.4119")
    })?;
    ensure((m - rho14).abs() <= 0.01, || {
        format!("mean {m:.5} not within 0.01 of rho_14")
    })?;
    Ok(format!("mean {m:.5}, sd {:.5}, rho_14 {rho14:.5}", summary.std_dev))
}

fn criterion5(workers: usize) -> Outcome {
    let half = Rational::new(1.into(), 2.into());
    let exact: Rational = iterated_coefficient(half.clone(), 2, 10, 2, BoostVariant::Exact);
    ensure(exact == Rational::new(15.into(), 11.into()), || {
        format!("exact coefficient {exact}")
    })?;
    let weak: Rational = iterated_coefficient(half, 2, 10, 2, BoostVariant::Weak);
    // (1/2)·10·Π_{j=2}^{9} (1 + 1/(j+1)^2)·j/(j+1) = 5·(2/10)·Π (1 + 1/(j+1)^2)
    let mut hand = Rational::from_integer(1.into());
    for j in 3i64..=10 {
        hand *= Rational::new(BigInt::from(j * j + 1), BigInt::from(j * j));
    }
    ensure(weak == hand, || format!("weak coefficient {weak} != {hand}"))?;
    let weak3 = format!("{:.3}", twins_core::scalar::to_f64(&weak));
    ensure(weak3 == "1.337", || format!("weak coefficient renders as {weak3}"))?;

    let stat = Statistic::BoostPipelineRatio {
        k_start: 2,
        r: 2,
        base: BaseSolver::SegmentCount {
            count: 10,
            solver: SolverKind::Quick,
        },
    };
    let model = ModelSpec::Binomial { n: 3000, k: 3 };
    let summary = run_experiment(&model, &stat, 50, RandomStream::new(SEED, 1), workers).map_err(|e| e.to_string())?;
    let m = summary.mean;
    ensure(m >= 0.37, || format!("pipeline mean {m:.5} < 0.37"))?;
    Ok(format!(
        "pipeline mean {m:.5} (min {:.4}); 15/11 exact; weak {weak3}",
        summary.min
    ))
}

fn criterion6(dir: &Path) -> Outcome {
    let mut allowed = Vec::new();
    let mut mismatched = Vec::new();
    for (table, printed) in [("1", to_rows1()), ("2", to_rows2())] {
        let run = twins(dir, &["bounds", "--table", table], None);
        ensure(run.code == 0, || format!("table {table}: exit {}", run.code))?;
        let mut lines = run.stdout.lines();
        ensure(lines.next() == Some("name,r,k,coefficient,rendered"), || {
            "missing header".into()
        })?;
        let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
        ensure(rows.len() == printed.len(), || {
            format!("table {table}: {} rows", rows.len())
        })?;
        for (row, (name, r, k, value)) in rows.iter().zip(&printed) {
            ensure(&row[0] == name && &row[1] == r && &row[2] == k, || {
                format!("row order: {row:?}")
            })?;
            if &row[4] == value {
                continue;
            }
            let note = format!("{name}(r={r},k={k}) formula {} vs reference {value}", row[4]);
            if TABLE_ALLOW.iter().any(|(n, rr, kk)| n == name && rr == r && kk == k) {
                allowed.push(note);
            } else {
                mismatched.push(note);
            }
        }
    }
    let run = twins(dir, &["bounds", "--name", "thm12", "--crossover", "bz2"], None);
    if run.stdout != "a,b,k\nthm12,bz2,354\n" {
        mismatched.push(format!("crossover: {}", run.stdout.trim()));
    }
    ensure(mismatched.is_empty(), || {
        format!("not allow-listed: {}", mismatched.join("; "))
    })?;
    Ok(format!("crossover 354; allow-listed: {}", allowed.join("; ")))
}

fn to_rows1() -> Vec<(String, String, String, String)> {
    TABLE1
        .iter()
        .map(|(n, k, v)| (n.to_string(), String::new(), k.to_string(), v.to_string()))
        .collect()
}

fn to_rows2() -> Vec<(String, String, String, String)> {
    TABLE2
        .iter()
        .map(|(n, r, k, v)| (n.to_string(), r.to_string(), k.to_string(), v.to_string()))
        .collect()
}

fn criterion7() -> Outcome {
    let a3 = Alphabet::new(3).unwrap();
    let mut mismatches = Vec::new();
    for index in 0..3u64.pow(8) {
        let w = Word::from_index(a3, 8, index);
        let fast = longest_twins_fast(&w, 2).unwrap();
        let oracle = longest_twins_oracle(&w, 2).unwrap();
        if fast.length != oracle.length {
            mismatches.push(format!("{w} r=2: {} vs {}", fast.length, oracle.length));
        }
    }
    let stream = RandomStream::new(SEED, 7);
    let mut witness_diffs = 0;
    for i in 0..10_000u64 {
        let mut rng = stream.child(i).rng();
        let n = rng.gen_range(1..=14);
        let r = if i % 2 == 0 { 2 } else { 3 };
        let w = sample_binomial(n, 3, &mut rng).unwrap();
        let fast = longest_twins_fast(&w, r).unwrap();
        let oracle = longest_twins_oracle(&w, r).unwrap();
        if fast.length != oracle.length {
            mismatches.push(format!("{w} r={r}: {} vs {}", fast.length, oracle.length));
        }
        if fast.witness != oracle.witness {
            witness_diffs += 1;
        }
    }
    ensure(mismatches.is_empty(), || {
        format!(
            "{} mismatches, first {:?}",
            mismatches.len(),
            &mismatches[..mismatches.len().min(3)]
        )
    })?;
    Ok(format!(
        "6561 exhaustive + 10000 random, 0 mismatches ({witness_diffs} tie-broken witnesses differ)"
    ))
}

/// New-letter copies directly after the `ell`-th element of each twin.
fn min_balls(extended: &Word, base: &twins_core::TwinWitness, new_letter: u8) -> usize {
    let kept: Vec<usize> = (0..extended.len())
        .filter(|&q| extended.letters()[q] != new_letter)
        .collect();
    (0..base.len())
        .map(|ell| {
            base.index_sets
                .iter()
                .map(|set| {
                    let q = kept[set[ell] - 1];
                    extended.letters()[q + 1..]
                        .iter()
                        .take_while(|&&l| l == new_letter)
                        .count()
                })
                .min()
                .unwrap_or(0)
        })
        .sum()
}

fn criterion8() -> Outcome {
    let stream = RandomStream::new(SEED, 8);
    let mut counts = [0usize; 4];
    for i in 0..10_000u64 {
        let mut rng = stream.child(i).rng();
        let kind = (i % 4) as usize;
        let fail = |msg: String| Err(format!("run {i} ({kind}): {msg}"));
        match kind {
            0 => {
                let k = rng.gen_range(2..=4);
                let n = rng.gen_range(0..=60);
                let s = rng.gen_range(2..=10);
                let w = sample_binomial(n, k, &mut rng).unwrap();
                let solver = if i % 8 == 0 {
                    SolverKind::Fast
                } else {
                    SolverKind::Quick
                };
                let plan = segment_concat_r(&w, s, 2, solver).unwrap();
                let v = verify_twins(&w, &plan.witness);
                let mut sum = 0;
                for seg in w.letters().chunks_exact(s) {
                    let seg = Word::new(w.alphabet(), seg.to_vec()).unwrap();
                    sum += longest_twins_oracle(&seg, 2).unwrap().length;
                }
                if !v.valid || plan.length() != sum || v.length != sum {
                    return fail(format!("{w} s={s}: length {} vs {sum}, {:?}", plan.length(), v.reason));
                }
            }
            1 => {
                let k = rng.gen_range(2..=3);
                let r = rng.gen_range(k..=4);
                let m = rng.gen_range(r..=8);
                let n = rng.gen_range(m..=100);
                let w = sample_binomial(n, k, &mut rng).unwrap();
                let out = interlace(&w, r, m).unwrap();
                let len = n / m;
                let mu = (0..m)
                    .flat_map(|j| {
                        let seg = &w.letters()[j * len..(j + 1) * len];
                        (0..k as u8).map(move |x| seg.iter().filter(|&&l| l == x).count())
                    })
                    .min()
                    .unwrap_or(0);
                let v = verify_twins(&w, &out.witness);
                let bound = (m - r + 1) * k * mu;
                if out.mu != mu || out.covered < bound || (mu > 0 && (!v.valid || out.covered != r * v.length)) {
                    return fail(format!("{w} r={r} m={m}: covered {} bound {bound}", out.covered));
                }
            }
            2 => {
                let k = rng.gen_range(2..=3);
                let r = rng.gen_range(2..=3);
                let n = rng.gen_range(2..=40);
                let w = sample_binomial(n, k + 1, &mut rng).unwrap();
                let (restricted, _) = w.restrict_below(k).unwrap();
                let base = longest_twins_quick(&restricted, r).unwrap().witness;
                let out = boost(&w, &base).unwrap();
                let v = verify_twins(&w, &out);
                let want = base.len() + min_balls(&w, &base, k as u8);
                if !base.is_empty() && (!v.valid || out.len() != want) {
                    return fail(format!("{w}: boosted {} vs {want}", out.len()));
                }
            }
            _ => {
                let k = rng.gen_range(3..=4);
                let r = rng.gen_range(2..=3);
                let n = rng.gen_range(0..=60);
                let w = sample_binomial(n, k, &mut rng).unwrap();
                let base = if i % 8 == 3 {
                    BaseSolver::Interlace {
                        m: rng.gen_range(r..=6),
                    }
                } else {
                    BaseSolver::SegmentConcat {
                        s: rng.gen_range(2..=8),
                        solver: SolverKind::Quick,
                    }
                };
                let out = boost_pipeline(&w, 2, r, base).unwrap();
                let mut len = out.base_length;
                for step in &out.steps {
                    len += step.gain;
                    if step.length != len {
                        return fail(format!("{w}: step {} length {} vs {len}", step.letter, step.length));
                    }
                }
                let v = verify_twins(&w, &out.witness);
                if out.witness.len() != len || (len > 0 && !v.valid) {
                    return fail(format!("{w}: pipeline {} vs {len}, {:?}", out.witness.len(), v.reason));
                }
            }
        }
        counts[kind] += 1;
    }
    Ok(format!(
        "segment {}, interlace {}, boost {}, pipeline {}: all valid, identities exact",
        counts[0], counts[1], counts[2], counts[3]
    ))
}

fn criterion9() -> Outcome {
    // every (base counts, m) with total length ≤ 6
    let mut cases = 0;
    for k in 1..=3usize {
        let mut base = vec![0usize; k];
        loop {
            let used: usize = base.iter().sum();
            for m in 0..=6usize.saturating_sub(used) {
                if used + m == 0 || used > 6 {
                    continue;
                }
                let counts = LetterCounts::new(base.clone()).unwrap();
                let mut full = base.clone();
                full.push(m);
                let direct = fixed_counts_distribution(&LetterCounts::new(full).unwrap());
                let staged = two_phase_distribution(&counts, m).map_err(|e| e.to_string())?;
                let tv = total_variation(&direct, &staged);
                ensure(tv == Rational::from_integer(0.into()), || {
                    format!("{base:?} + {m}: distance {tv}")
                })?;
                cases += 1;
            }
            // next base vector in the box [0, 6]^k
            let mut i = 0;
            while i < k && base[i] == 6 {
                base[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
            base[i] += 1;
        }
    }

    // length 12: (4, 4) then four new letters, binned by arrangement rank
    let target = LetterCounts::new(vec![4, 4, 4]).unwrap();
    let all = arrangements(&target);
    let rank: HashMap<Vec<u8>, usize> = all.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
    let bins = 1000;
    let mut probs = vec![0.0; bins];
    for i in 0..all.len() {
        probs[i % bins] += 1.0 / all.len() as f64;
    }
    let base_counts = LetterCounts::new(vec![4, 4]).unwrap();
    let stream = RandomStream::new(SEED, 9);
    let mut staged = vec![0u64; bins];
    let mut direct = vec![0u64; bins];
    for i in 0..100_000u64 {
        let mut rng = stream.child(i).rng();
        let base = sample_fixed_counts(&base_counts, &mut rng);
        let w = insert_letter_phase2(&base, 4, &mut rng).unwrap();
        staged[rank[w.letters()] % bins] += 1;
        let d = sample_fixed_counts(&target, &mut rng);
        direct[rank[d.letters()] % bins] += 1;
    }
    let a = chi_square(&staged, &probs).map_err(|e| e.to_string())?;
    let b = chi_square(&direct, &probs).map_err(|e| e.to_string())?;
    let alpha = THRESHOLDS.chi_square_significance;
    ensure(a.p_value >= alpha, || {
        format!("two-phase chi-square p = {:.5}", a.p_value)
    })?;
    ensure(b.p_value >= alpha, || format!("direct chi-square p = {:.5}", b.p_value))?;
    Ok(format!(
        "{cases} exact cases at distance 0; length 12 over {} arrangements: p = {:.4} (two-phase), {:.4} (direct)",
        all.len(),
        a.p_value,
        b.p_value
    ))
}

fn criterion10() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for n in [1_000u64, 10_000, 100_000] {
        let root = (n as f64).sqrt();
        for (p, q) in [(1u64, 5u64), (1, 2), (4, 5)] {
            let m = n * p / q;
            for ell in [1, (root / 10.0).floor() as u64, (root / 3.0).floor() as u64] {
                let b = binom_ratio(n, m, ell).map_err(|e| e.to_string())?;
                let allowed = 2.0 * (ell * ell) as f64 / n as f64;
                checked += 1;
                if b.rel_error > allowed {
                    failures.push(format!("N={n} M/N={p}/{q} l={ell}: {:.4} > {allowed:.4}", b.rel_error));
                }
            }
        }
    }
    ensure(failures.is_empty(), || {
        format!("{} of {checked} grid points: {}", failures.len(), failures.join("; "))
    })?;
    Ok(format!("{checked} grid points"))
}

fn criterion11(dir: &Path) -> Outcome {
    fs::write(dir.join("w.json"), r#"{"r":2,"indexSets":[[1,2,3],[4,5,6]]}"#).unwrap();
    fs::write(
        dir.join("sim.json"),
        r#"{"model":{"kind":"binomial","n":700,"k":3},
            "statistic":{"kind":"segment-concat-ratio","s":14,"r":2,"solver":"fast"},
            "trials":24,"seed":3,"buckets":8}"#,
    )
    .unwrap();
    fs::write(
        dir.join("pipe.json"),
        r#"{"model":{"kind":"binomial","n":600,"k":3},
            "statistic":{"kind":"boost-pipeline-ratio","kStart":2,"r":2,
                         "base":{"kind":"segment-count","count":6,"solver":"quick"}},
            "trials":16,"seed":4}"#,
    )
    .unwrap();
    let word = "abcacbbacbcabbacbacbacabcbbbcacab";
    let commands: Vec<Vec<&str>> = vec![
        vec!["solve", "--word", word],
        vec!["solve", "--word", word, "--mode", "quick", "--r", "3"],
        vec!["solve", "--word", "abcabcab", "--mode", "oracle"],
        vec!["enumerate", "--k", "3", "--s", "10"],
        vec!["enumerate", "--k", "2", "--s", "14", "--no-symmetry"],
        vec!["simulate", "sim.json"],
        vec!["simulate", "pipe.json"],
        vec!["construct", "segment", "--random", "400", "--k", "3", "--s", "14"],
        vec![
            "construct",
            "interlace",
            "--random",
            "400",
            "--k",
            "3",
            "--r",
            "3",
            "--m",
            "9",
        ],
        vec!["construct", "pipeline", "--random", "400", "--k", "4", "--m", "5"],
        vec!["bounds", "--table", "2"],
        vec!["bounds", "--name", "pi", "--r", "3", "--k", "12345"],
        vec!["verify", "--word", "abcabc", "--witness", "w.json"],
    ];
    for args in &commands {
        for json in [false, true] {
            let mut reference: Option<(String, BTreeMap<String, Vec<u8>>)> = None;
            for workers in [1, 2, 8] {
                let out = format!("out{workers}");
                let mut full = vec!["--seed", "99", "--out-dir", &out];
                if json {
                    full.extend(["--format", "json"]);
                }
                full.extend(args.iter().copied());
                let run = twins(dir, &full, Some(workers));
                ensure(run.code == 0, || format!("{args:?} exited {}", run.code))?;
                let files = read_dir(&dir.join(&out));
                let _ = fs::remove_dir_all(dir.join(&out));
                match &reference {
                    None => reference = Some((run.stdout, files)),
                    Some((stdout, ref_files)) => {
                        ensure(&run.stdout == stdout, || {
                            format!("{args:?}: stdout differs at {workers} workers")
                        })?;
                        ensure(&files == ref_files, || {
                            format!("{args:?}: files differ at {workers} workers")
                        })?;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{} commands x 2 formats byte-identical for 1, 2, 8 workers",
        commands.len()
    ))
}

fn read_dir(path: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(path)
        .map(|entries| {
            entries
                .map(|e| {
                    let e = e.unwrap();
                    (
                        e.file_name().to_string_lossy().into_owned(),
                        fs::read(e.path()).unwrap(),
                    )
                })
                .collect()
        })
        .unwrap_or_default()
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temporary directory");
    let d = dir.path();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let criteria: Vec<(&str, Check)> = vec![
        ("1 lambda counts, s = 6..10", Box::new(|| criterion1(d))),
        ("2 lambda counts, s = 11..14, and rho_14", Box::new(|| criterion2(d))),
        ("3 rho arithmetic", Box::new(criterion3)),
        ("4 segment Monte Carlo, s = 14", Box::new(move || criterion4(workers))),
        (
            "5 boosting pipeline and coefficients",
            Box::new(move || criterion5(workers)),
        ),
        ("6 bound tables and crossover", Box::new(|| criterion6(d))),
        ("7 fast solver equals oracle", Box::new(criterion7)),
        ("8 construction validity", Box::new(criterion8)),
        ("9 model equivalence", Box::new(criterion9)),
        ("10 binomial ratio estimate", Box::new(criterion10)),
        ("11 determinism across workers", Box::new(|| criterion11(d))),
    ];
    // optional criterion numbers on the command line select a subset
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria: Vec<_> = criteria
        .into_iter()
        .filter(|(name, _)| only.is_empty() || only.iter().any(|n| name.split(' ').next() == Some(n)))
        .collect();
    let mut failed = 0;
    for (name, check) in &criteria {
        let started = Instant::now();
        let outcome = check();
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(note) => println!("PASS criterion {name} [{secs:.1}s]: {note}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} [{secs:.1}s]: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
