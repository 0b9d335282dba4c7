//! Random words and Monte Carlo experiments.
//!
//! Randomness comes from ChaCha8 streams: a [`RandomStream`] is a seed and a
//! stream index, and trial `i` of an experiment draws from its own derived
//! stream, so results do not depend on how trials are scheduled.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::constructions::{boost_pipeline, interlace, segment_concat_r, BaseSolver};
use crate::error::{Error, Result};
use crate::scalar::Rational;
use crate::solver::{max_twins_length, SolverKind};
use crate::word::{Alphabet, Letter, LetterCounts, Word};

/// Thresholds shared by every statistical check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    /// reject a goodness-of-fit test when its p-value falls below this
    pub chi_square_significance: f64,
    /// largest tolerated failure fraction in the concentration check
    pub concentration_failure: f64,
    /// half-width of the band around an exact frequency
    pub frequency_band: f64,
}

pub const THRESHOLDS: Thresholds = Thresholds {
    chi_square_significance: 0.001,
    concentration_failure: 0.01,
    frequency_band: 0.01,
};

/// A ChaCha8 stream identified by `(seed, stream_index)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RandomStream {
    pub seed: u64,
    pub stream_index: u64,
}

impl RandomStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        Self { seed, stream_index }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_index);
        rng
    }

    /// Independent stream number `i` below this one.
    pub fn child(&self, i: u64) -> RandomStream {
        RandomStream {
            seed: splitmix64(self.seed ^ splitmix64(self.stream_index)),
            stream_index: i,
        }
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `n` independent uniform letters over `0..k`.
pub fn sample_binomial<R: Rng>(n: usize, k: usize, rng: &mut R) -> Result<Word> {
    let alphabet = Alphabet::new(k)?;
    let letters = (0..n).map(|_| rng.gen_range(0..k) as Letter).collect();
    Word::new(alphabet, letters)
}

/// A uniformly random arrangement of the multiset given by `counts`.
pub fn sample_fixed_counts<R: Rng>(counts: &LetterCounts, rng: &mut R) -> Word {
    let mut letters = expand(counts);
    letters.shuffle(rng);
    Word::new(counts.alphabet(), letters).expect("letters come from the alphabet")
}

fn expand(counts: &LetterCounts) -> Vec<Letter> {
    counts
        .counts()
        .iter()
        .enumerate()
        .flat_map(|(l, &c)| std::iter::repeat_n(l as Letter, c))
        .collect()
}

/// Inserts `m` copies of a new letter (index `k`) into the `n + 1` gaps of
/// `base`, uniformly over all `C(n+m, m)` placements.
pub fn insert_letter_phase2<R: Rng>(base: &Word, m: usize, rng: &mut R) -> Result<Word> {
    let total = base.len() + m;
    let mut chosen = vec![false; total];
    for i in rand::seq::index::sample(rng, total, m) {
        chosen[i] = true;
    }
    place_new_letter(base, &chosen)
}

/// Puts the new letter wherever `chosen` is set and the letters of `base`,
/// in order, everywhere else.
pub fn place_new_letter(base: &Word, chosen: &[bool]) -> Result<Word> {
    let k = base.alphabet().size();
    let alphabet = Alphabet::new(k + 1)?;
    let mut rest = base.letters().iter();
    let letters: Vec<Letter> = chosen
        .iter()
        .map(|&c| if c { Some(k as Letter) } else { rest.next().copied() })
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Domain("placement has more base slots than letters".into()))?;
    if rest.next().is_some() {
        return Err(Error::Domain("placement has fewer base slots than letters".into()));
    }
    Word::new(alphabet, letters)
}

/// A random-word distribution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ModelSpec {
    Binomial { n: usize, k: usize },
    FixedCounts { counts: LetterCounts },
}

impl ModelSpec {
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Result<Word> {
        match self {
            ModelSpec::Binomial { n, k } => sample_binomial(*n, *k, rng),
            ModelSpec::FixedCounts { counts } => Ok(sample_fixed_counts(counts, rng)),
        }
    }
}

/// Quantity measured on each sampled word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", rename_all_fields = "camelCase", tag = "kind")]
pub enum Statistic {
    /// segment construction length over `n`
    SegmentConcatRatio { s: usize, r: usize, solver: SolverKind },
    /// iterated boosting length over `n`
    BoostPipelineRatio { k_start: usize, r: usize, base: BaseSolver },
    /// interlacing coverage over `n`
    InterlaceCoverage { r: usize, m: usize },
    /// longest r-twins length over `n`
    TwinRatio { r: usize },
}

impl Statistic {
    pub fn name(&self) -> &'static str {
        match self {
            Statistic::SegmentConcatRatio { .. } => "segment-concat-ratio",
            Statistic::BoostPipelineRatio { .. } => "boost-pipeline-ratio",
            Statistic::InterlaceCoverage { .. } => "interlace-coverage",
            Statistic::TwinRatio { .. } => "twin-ratio",
        }
    }

    pub fn measure(&self, word: &Word) -> Result<f64> {
        let n = word.len().max(1) as f64;
        let value = match *self {
            Statistic::SegmentConcatRatio { s, r, solver } => segment_concat_r(word, s, r, solver)?.length(),
            Statistic::BoostPipelineRatio { k_start, r, base } => boost_pipeline(word, k_start, r, base)?.witness.len(),
            Statistic::InterlaceCoverage { r, m } => interlace(word, r, m)?.covered,
            Statistic::TwinRatio { r } => max_twins_length(word, r)?,
        };
        Ok(value as f64 / n)
    }
}

/// Description of an experiment as read from a config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub statistic: Statistic,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub stream_index: u64,
    /// histogram bucket count
    #[serde(default = "default_buckets")]
    pub buckets: usize,
}

fn default_buckets() -> usize {
    20
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bucket {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentSummary {
    pub trials: usize,
    pub statistic: String,
    pub mean: f64,
    pub std_dev: f64,
    pub min: f64,
    pub max: f64,
    pub histogram: Vec<Bucket>,
    pub values: Vec<f64>,
}

impl ExperimentSummary {
    /// Summarises values listed in trial order.
    pub fn from_values(statistic: &str, values: Vec<f64>, buckets: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("an experiment needs at least one trial".into()));
        }
        let trials = values.len();
        let mean = values.iter().sum::<f64>() / trials as f64;
        let var = if trials > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (trials - 1) as f64
        } else {
            0.0
        };
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let histogram = histogram(&values, min, max, buckets.max(1));
        Ok(Self {
            trials,
            statistic: statistic.to_string(),
            mean,
            std_dev: var.sqrt(),
            min,
            max,
            histogram,
            values,
        })
    }

    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("lower,upper,count\n");
        for b in &self.histogram {
            out.push_str(&format!("{},{},{}\n", b.lower, b.upper, b.count));
        }
        out
    }
}

fn histogram(values: &[f64], min: f64, max: f64, buckets: usize) -> Vec<Bucket> {
    if min == max {
        return vec![Bucket {
            lower: min,
            upper: max,
            count: values.len(),
        }];
    }
    let width = (max - min) / buckets as f64;
    let mut out: Vec<Bucket> = (0..buckets)
        .map(|i| Bucket {
            lower: min + i as f64 * width,
            upper: if i + 1 == buckets {
                max
            } else {
                min + (i + 1) as f64 * width
            },
            count: 0,
        })
        .collect();
    for &v in values {
        let i = (((v - min) / width) as usize).min(buckets - 1);
        out[i].count += 1;
    }
    out
}

/// Runs `trials` independent trials; trial `i` uses `stream.child(i)`.
pub fn run_experiment(
    model: &ModelSpec,
    statistic: &Statistic,
    trials: usize,
    stream: RandomStream,
    workers: usize,
) -> Result<ExperimentSummary> {
    run_experiment_with_buckets(model, statistic, trials, stream, workers, default_buckets())
}

pub fn run_experiment_with_buckets(
    model: &ModelSpec,
    statistic: &Statistic,
    trials: usize,
    stream: RandomStream,
    workers: usize,
    buckets: usize,
) -> Result<ExperimentSummary> {
    if trials == 0 {
        return Err(Error::Domain("an experiment needs at least one trial".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
    let values = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream.child(i as u64).rng();
                model
                    .sample(&mut rng)
                    .and_then(|w| statistic.measure(&w))
                    .map_err(|e| Error::Trial {
                        trial: i,
                        source: Box::new(e),
                    })
            })
            .collect::<Result<Vec<f64>>>()
    })?;
    ExperimentSummary::from_values(statistic.name(), values, buckets)
}

pub fn run_config(config: &ExperimentConfig, workers: usize) -> Result<ExperimentSummary> {
    run_experiment_with_buckets(
        &config.model,
        &config.statistic,
        config.trials,
        RandomStream::new(config.seed, config.stream_index),
        workers,
        config.buckets,
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConcentrationReport {
    pub epsilon: f64,
    /// `(1 - ε) N / k`
    pub threshold: f64,
    pub trials: usize,
    pub failures: usize,
    pub failure_fraction: f64,
}

/// Samples binomial words and counts those in which some letter occurs in
/// some segment fewer than `(1 - ε) N / k` times, `N = n/m`,
/// `ε = k n^(-1/3) sqrt(2 ln n)`.
pub fn concentration_check(
    k: usize,
    n: usize,
    m: usize,
    stream: RandomStream,
    trials: usize,
) -> Result<ConcentrationReport> {
    if m == 0 || !n.is_multiple_of(m) {
        return Err(Error::Domain(format!("segment count {m} must divide n = {n}")));
    }
    if trials == 0 {
        return Err(Error::Domain("the check needs at least one trial".into()));
    }
    let nf = n as f64;
    let epsilon = if n > 1 {
        k as f64 * nf.powf(-1.0 / 3.0) * (2.0 * nf.ln()).sqrt()
    } else {
        0.0
    };
    let seg = n / m;
    let threshold = (1.0 - epsilon) * seg as f64 / k as f64;
    let mut failures = 0;
    for i in 0..trials {
        let w = sample_binomial(n, k, &mut stream.child(i as u64).rng())?;
        let short = w.letters().chunks(seg).any(|chunk| {
            let mut counts = vec![0usize; k];
            chunk.iter().for_each(|&l| counts[l as usize] += 1);
            counts.iter().any(|&c| (c as f64) < threshold)
        });
        failures += short as usize;
    }
    Ok(ConcentrationReport {
        epsilon,
        threshold,
        trials,
        failures,
        failure_fraction: failures as f64 / trials as f64,
    })
}

/// Pearson statistic, degrees of freedom and upper-tail p-value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

impl ChiSquare {
    pub fn passes(&self) -> bool {
        self.p_value >= THRESHOLDS.chi_square_significance
    }
}

/// Goodness of fit of `observed` counts against cell probabilities `probs`.
pub fn chi_square(observed: &[u64], probs: &[f64]) -> Result<ChiSquare> {
    if observed.len() != probs.len() || observed.len() < 2 {
        return Err(Error::Domain(
            "chi-square needs matching tables with at least two cells".into(),
        ));
    }
    let total: u64 = observed.iter().sum();
    let statistic = observed
        .iter()
        .zip(probs)
        .map(|(&o, &p)| {
            let e = p * total as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum::<f64>();
    let dof = observed.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(ChiSquare {
        statistic,
        dof,
        p_value: dist.sf(statistic),
    })
}

/// Exact distribution of a uniform arrangement of `counts`.
pub fn fixed_counts_distribution(counts: &LetterCounts) -> BTreeMap<Vec<Letter>, Rational> {
    let words = arrangements(counts);
    let p = Rational::new(BigInt::one(), BigInt::from(words.len()));
    words.into_iter().map(|w| (w, p.clone())).collect()
}

/// Exact distribution of two-phase generation: a uniform arrangement of
/// `counts`, then `m` new letters placed by [`place_new_letter`] at a
/// uniformly chosen set of `m` of the `n + m` final positions.
pub fn two_phase_distribution(counts: &LetterCounts, m: usize) -> Result<BTreeMap<Vec<Letter>, Rational>> {
    let bases = arrangements(counts);
    let total = counts.total() + m;
    let placements = subsets(total, m);
    let p = Rational::new(BigInt::one(), BigInt::from(bases.len() * placements.len()));
    let mut out: BTreeMap<Vec<Letter>, Rational> = BTreeMap::new();
    for b in &bases {
        let base = Word::new(counts.alphabet(), b.clone())?;
        for chosen in &placements {
            let w = place_new_letter(&base, chosen)?;
            *out.entry(w.letters().to_vec()).or_insert_with(Rational::zero) += &p;
        }
    }
    Ok(out)
}

/// `½ Σ |p(x) - q(x)|` over the union of supports.
pub fn total_variation(p: &BTreeMap<Vec<Letter>, Rational>, q: &BTreeMap<Vec<Letter>, Rational>) -> Rational {
    let zero = Rational::zero();
    let keys: std::collections::BTreeSet<&Vec<Letter>> = p.keys().chain(q.keys()).collect();
    let sum = keys.into_iter().fold(Rational::zero(), |acc, key| {
        let d = p.get(key).unwrap_or(&zero) - q.get(key).unwrap_or(&zero);
        acc + if d < zero { -d } else { d }
    });
    sum / Rational::from_integer(BigInt::from(2))
}

/// All distinct arrangements of the multiset, in lexicographic order.
pub fn arrangements(counts: &LetterCounts) -> Vec<Vec<Letter>> {
    fn rec(left: &mut Vec<usize>, cur: &mut Vec<Letter>, out: &mut Vec<Vec<Letter>>) {
        if left.iter().all(|&c| c == 0) {
            out.push(cur.clone());
            return;
        }
        for l in 0..left.len() {
            if left[l] > 0 {
                left[l] -= 1;
                cur.push(l as Letter);
                rec(left, cur, out);
                cur.pop();
                left[l] += 1;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut counts.counts().to_vec(), &mut Vec::new(), &mut out);
    out
}

fn subsets(n: usize, m: usize) -> Vec<Vec<bool>> {
    let mut out = Vec::new();
    crate::solver::oracle::for_each_combination(n, m, &mut |idx| {
        let mut mask = vec![false; n];
        idx.iter().for_each(|&i| mask[i] = true);
        out.push(mask);
        Ok(())
    })
    .expect("collecting subsets cannot fail");
    out
}
