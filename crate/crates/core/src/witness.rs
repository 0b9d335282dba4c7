//! Twin witnesses and their definitional check.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::word::Word;

/// Why a witness was rejected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    /// Out-of-range, non-increasing positions, or fewer than two index sets.
    BadIndices,
    /// Two index sets share a position.
    Overlap,
    /// The induced subwords differ (this includes sets of different lengths).
    UnequalWords,
}

impl Reason {
    pub fn code(self) -> &'static str {
        match self {
            Reason::BadIndices => "bad-indices",
            Reason::Overlap => "overlap",
            Reason::UnequalWords => "unequal-words",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// `r` index sets (1-based, strictly increasing) claimed to induce equal,
/// pairwise disjoint subwords.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwinWitness {
    pub r: usize,
    #[serde(rename = "indexSets")]
    pub index_sets: Vec<Vec<usize>>,
}

impl TwinWitness {
    pub fn new(index_sets: Vec<Vec<usize>>) -> Self {
        Self {
            r: index_sets.len(),
            index_sets,
        }
    }

    /// `r` empty index sets: the trivial witness of length 0.
    pub fn empty(r: usize) -> Self {
        Self::new(vec![Vec::new(); r])
    }

    /// Builds a witness from 0-based position lists.
    pub fn from_zero_based(sets: Vec<Vec<usize>>) -> Self {
        Self::new(
            sets.into_iter()
                .map(|s| s.into_iter().map(|p| p + 1).collect())
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.index_sets.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Orders the index sets by their first position.
    pub fn canonical(mut self) -> Self {
        self.index_sets.sort();
        self
    }

    /// Shifts each 1-based position through `map` (a 0-based position table).
    pub fn remap(&self, map: &[usize]) -> Self {
        Self::new(
            self.index_sets
                .iter()
                .map(|s| s.iter().map(|&p| map[p - 1] + 1).collect())
                .collect(),
        )
    }
}

/// Outcome of [`verify_twins`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub valid: bool,
    pub length: usize,
    pub reason: Option<Reason>,
}

impl Verification {
    fn ok(length: usize) -> Self {
        Self {
            valid: true,
            length,
            reason: None,
        }
    }

    fn fail(reason: Reason) -> Self {
        Self {
            valid: false,
            length: 0,
            reason: Some(reason),
        }
    }
}

/// Checks every witness invariant against `word`.
pub fn verify_twins(word: &Word, witness: &TwinWitness) -> Verification {
    let n = word.len();
    if witness.r < 2 || witness.index_sets.len() != witness.r {
        return Verification::fail(Reason::BadIndices);
    }
    for set in &witness.index_sets {
        if crate::word::check_positions(set, n).is_err() {
            return Verification::fail(Reason::BadIndices);
        }
    }
    let mut used = vec![false; n + 1];
    for set in &witness.index_sets {
        for &p in set {
            if std::mem::replace(&mut used[p], true) {
                return Verification::fail(Reason::Overlap);
            }
        }
    }
    let letters = word.letters();
    let first = &witness.index_sets[0];
    for set in &witness.index_sets[1..] {
        if set.len() != first.len() || set.iter().zip(first).any(|(&a, &b)| letters[a - 1] != letters[b - 1]) {
            return Verification::fail(Reason::UnequalWords);
        }
    }
    Verification::ok(first.len())
}
