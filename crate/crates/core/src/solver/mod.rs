//! Exact longest r-twins.
//!
//! Two independent routes: [`oracle`] enumerates position subsets and
//! balanced partitions exactly like a textbook brute force, and [`fast`]
//! scans the word once per candidate length with a memoized,
//! bound-pruned assignment search. Both return the same tie-broken witness.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::witness::TwinWitness;
use crate::word::Word;

pub mod fast;
pub(crate) mod oracle;

pub use fast::{has_twins_of_length, longest_twins_fast, longest_twins_quick, max_twins_length};
pub use oracle::{longest_twins_oracle, longest_twins_oracle_with_budget};

/// Default number of partition checks the oracle may spend.
pub const DEFAULT_ORACLE_BUDGET: u64 = 1_000_000_000;

/// Longest r-twins of a word, with a witness achieving it.
///
/// The witness is canonical: index sets ordered by first position, and among
/// all maximum-length witnesses the lexicographically smallest concatenation.
/// [`SolverKind::Quick`] drops the second half of that rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub length: usize,
    pub witness: TwinWitness,
    #[serde(rename = "nodesExplored")]
    pub nodes_explored: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Oracle,
    Fast,
    /// fast search keeping the first optimal witness it finds
    Quick,
}

impl SolverKind {
    pub fn solve(self, word: &Word, r: usize) -> Result<SolveResult> {
        match self {
            SolverKind::Oracle => longest_twins_oracle(word, r),
            SolverKind::Fast => longest_twins_fast(word, r),
            SolverKind::Quick => longest_twins_quick(word, r),
        }
    }
}

impl std::str::FromStr for SolverKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" | "exact" => Ok(SolverKind::Oracle),
            "fast" => Ok(SolverKind::Fast),
            "quick" => Ok(SolverKind::Quick),
            other => Err(Error::Parse(format!("unknown solver `{other}`"))),
        }
    }
}

pub(crate) fn check_r(r: usize) -> Result<()> {
    if !(2..=16).contains(&r) {
        return Err(Error::Domain(format!("r must lie in 2..=16, got {r}")));
    }
    Ok(())
}
