//! Exhaustive distribution of longest-twin lengths over all `k^s` words.
//!
//! Words are visited as base-`k` numerals `0..k^s` in chunks of contiguous
//! indices; chunk tables are summed, so the result does not depend on the
//! number of workers or on the order in which chunks finish.
//!
//! With symmetry reduction only the smallest word of each orbit under
//! letter relabeling and reversal is solved, weighted by the orbit size.

use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{from_u64, Rational, Scalar};
use crate::solver::max_twins_length;
use crate::word::{Alphabet, Letter, Word};

/// Words per default run: every ternary word of length 10.
pub const DEFAULT_WORD_BUDGET: u64 = 59_049;
/// Words per extended run: every ternary word of length 16.
pub const EXTENDED_WORD_BUDGET: u64 = 43_046_721;

const CHUNK: u64 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Full,
    SymmetryReduced,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaTable {
    pub k: usize,
    pub s: usize,
    /// `lambda[t]` for `t = 0..=s/2`, including `t = 0`
    pub lambda: Vec<u64>,
    pub method: Method,
}

impl LambdaTable {
    pub fn get(&self, t: usize) -> u64 {
        self.lambda.get(t).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.lambda.iter().sum()
    }

    /// `Σ_t t·λ_t`.
    pub fn weighted_sum(&self) -> u128 {
        self.lambda
            .iter()
            .enumerate()
            .map(|(t, &l)| t as u128 * l as u128)
            .sum()
    }

    /// CSV with header `k,s,t,lambda`, one row per `t` including `t = 0`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,s,t,lambda\n");
        for (t, l) in self.lambda.iter().enumerate() {
            let _ = writeln!(out, "{},{},{},{}", self.k, self.s, t, l);
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct EnumOptions {
    pub symmetry_reduction: bool,
    pub workers: usize,
    /// largest `k^s` accepted
    pub word_budget: u64,
}

impl Default for EnumOptions {
    fn default() -> Self {
        Self {
            symmetry_reduction: true,
            workers: 1,
            word_budget: DEFAULT_WORD_BUDGET,
        }
    }
}

/// Progress of an interrupted enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub k: usize,
    pub s: usize,
    #[serde(rename = "nextWordIndex")]
    pub next_word_index: u64,
    pub partial: Vec<u64>,
    pub method: Method,
}

pub fn lambda_table(k: usize, s: usize, opts: &EnumOptions) -> Result<LambdaTable> {
    lambda_table_resumable(k, s, opts, None, |_| Ok(()))
}

/// Like [`lambda_table`], starting from `resume` and reporting a checkpoint
/// after every batch of chunks.
pub fn lambda_table_resumable<F>(
    k: usize,
    s: usize,
    opts: &EnumOptions,
    resume: Option<Checkpoint>,
    mut on_checkpoint: F,
) -> Result<LambdaTable>
where
    F: FnMut(&Checkpoint) -> Result<()>,
{
    let alphabet = Alphabet::new(k)?;
    if s == 0 {
        return Err(Error::Domain("word length must be at least 1".into()));
    }
    let total = word_count(k, s)
        .filter(|&n| n <= opts.word_budget)
        .ok_or(Error::BudgetExceeded {
            what: "enumerated words",
            budget: opts.word_budget,
        })?;
    let method = if opts.symmetry_reduction {
        Method::SymmetryReduced
    } else {
        Method::Full
    };
    let mut state = match resume {
        Some(cp) => {
            if cp.k != k
                || cp.s != s
                || cp.method != method
                || cp.partial.len() != s / 2 + 1
                || cp.next_word_index > total
            {
                return Err(Error::Domain("checkpoint does not match this enumeration".into()));
            }
            cp
        }
        None => Checkpoint {
            k,
            s,
            next_word_index: 0,
            partial: vec![0; s / 2 + 1],
            method,
        },
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
    let batch = CHUNK * 8 * opts.workers.max(1) as u64;
    while state.next_word_index < total {
        let start = state.next_word_index;
        let end = (start + batch).min(total);
        let chunks: Vec<(u64, u64)> = (start..end)
            .step_by(CHUNK as usize)
            .map(|a| (a, (a + CHUNK).min(end)))
            .collect();
        let tables: Vec<Vec<u64>> = pool.install(|| {
            chunks
                .par_iter()
                .map(|&(a, b)| count_range(alphabet, s, a, b, opts.symmetry_reduction))
                .collect()
        });
        for t in tables {
            for (acc, v) in state.partial.iter_mut().zip(t) {
                *acc += v;
            }
        }
        state.next_word_index = end;
        on_checkpoint(&state)?;
    }
    Ok(LambdaTable {
        k,
        s,
        lambda: state.partial,
        method,
    })
}

fn word_count(k: usize, s: usize) -> Option<u64> {
    (k as u64).checked_pow(s as u32)
}

fn count_range(alphabet: Alphabet, s: usize, start: u64, end: u64, reduce: bool) -> Vec<u64> {
    let mut table = vec![0u64; s / 2 + 1];
    for index in start..end {
        let w = Word::from_index(alphabet, s, index);
        let weight = if reduce {
            match orbit_weight(&w) {
                Some(size) => size,
                None => continue,
            }
        } else {
            1
        };
        let t = max_twins_length(&w, 2).expect("r = 2 is valid");
        table[t] += weight;
    }
    table
}

/// Relabels letters in order of first occurrence (`0, 1, 2, ...`), the
/// lexicographically smallest relabeling.
pub fn first_occurrence_form(letters: &[Letter]) -> Vec<Letter> {
    let mut map = [Letter::MAX; 256];
    let mut next = 0;
    letters
        .iter()
        .map(|&l| {
            if map[l as usize] == Letter::MAX {
                map[l as usize] = next;
                next += 1;
            }
            map[l as usize]
        })
        .collect()
}

/// Whether `word` is the smallest word of its orbit.
pub fn is_canonical(word: &Word) -> bool {
    orbit_weight(word).is_some()
}

/// Orbit size if `word` is its orbit's representative.
fn orbit_weight(word: &Word) -> Option<u64> {
    let w = word.letters();
    let norm = first_occurrence_form(w);
    if norm != w {
        return None;
    }
    let rev: Vec<Letter> = w.iter().rev().copied().collect();
    let rev_norm = first_occurrence_form(&rev);
    if rev_norm.as_slice() < w {
        return None;
    }
    Some(orbit_size(word.alphabet().size(), w, rev_norm.as_slice() == w))
}

fn orbit_size(k: usize, letters: &[Letter], reversal_is_relabeling: bool) -> u64 {
    let mut used = [false; 256];
    letters.iter().for_each(|&l| used[l as usize] = true);
    let j = used.iter().filter(|&&u| u).count() as u64;
    let injections: u64 = (0..j).map(|i| k as u64 - i).product();
    if reversal_is_relabeling {
        injections
    } else {
        2 * injections
    }
}

/// Size of the orbit of `word` under letter relabelings and reversal.
pub fn canonical_orbit_size(word: &Word) -> u64 {
    let norm = first_occurrence_form(word.letters());
    let rev: Vec<Letter> = word.letters().iter().rev().copied().collect();
    orbit_size(
        word.alphabet().size(),
        word.letters(),
        first_occurrence_form(&rev) == norm,
    )
}

/// `ρ_s = Σ t λ_t / (s k^s)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RhoValue {
    pub s: usize,
    /// `Σ t λ_t`
    pub numerator: u128,
    /// `s k^s`
    pub denominator: u128,
    #[serde(serialize_with = "ser_rational")]
    pub value: Rational,
    pub decimal: f64,
}

fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(q)
}

impl RhoValue {
    /// `numerator/denominator` with the denominator `s k^s`.
    pub fn unreduced(&self) -> String {
        format!("{}/{}", self.numerator, self.denominator)
    }

    pub fn decimal6(&self) -> String {
        crate::bounds::render_fixed(&self.value, 6)
    }
}

pub fn rho(table: &LambdaTable) -> RhoValue {
    let numerator = table.weighted_sum();
    let denominator = table.s as u128 * (table.k as u128).pow(table.s as u32);
    let value = Rational::new(BigInt::from(numerator), BigInt::from(denominator));
    RhoValue {
        s: table.s,
        numerator,
        denominator,
        decimal: rho_in::<f64>(table),
        value,
    }
}

/// `ρ_s` in any scalar type.
pub fn rho_in<S: Scalar>(table: &LambdaTable) -> S {
    let denom = from_u64::<S>(table.s as u64) * crate::scalar::powi(from_u64::<S>(table.k as u64), table.s as u32);
    table.lambda.iter().enumerate().fold(S::zero(), |acc, (t, &l)| {
        acc + from_u64::<S>(t as u64) * from_u64::<S>(l)
    }) / denom
}
