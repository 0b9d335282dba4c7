//! Brute-force reference solver.
//!
//! For `t = ⌊n/r⌋, ⌊n/r⌋-1, ..., 1` every `rt`-subset of positions is split
//! into every balanced partition of `r` classes and the classes' subwords are
//! compared. The class holding the smallest unassigned position is fixed,
//! which removes the `r!` relabelings of each partition. The first `t` with
//! a hit is the answer; that level is scanned completely so the
//! lexicographically smallest witness is returned.

use crate::error::{Error, Result};
use crate::witness::TwinWitness;
use crate::word::{Letter, Word};

use super::{check_r, SolveResult, DEFAULT_ORACLE_BUDGET};

pub fn longest_twins_oracle(word: &Word, r: usize) -> Result<SolveResult> {
    longest_twins_oracle_with_budget(word, r, DEFAULT_ORACLE_BUDGET)
}

pub fn longest_twins_oracle_with_budget(word: &Word, r: usize, budget: u64) -> Result<SolveResult> {
    check_r(r)?;
    let n = word.len();
    let mut search = Search {
        letters: word.letters(),
        t: 0,
        budget,
        checks: 0,
        classes: Vec::with_capacity(r),
        best: None,
    };
    for t in (1..=n / r).rev() {
        search.t = t;
        for_each_combination(n, r * t, &mut |subset| search.partitions(subset))?;
        if let Some(best) = search.best.take() {
            return Ok(SolveResult {
                length: t,
                witness: TwinWitness::from_zero_based(best),
                nodes_explored: search.checks,
            });
        }
    }
    Ok(SolveResult {
        length: 0,
        witness: TwinWitness::empty(r),
        nodes_explored: search.checks,
    })
}

struct Search<'a> {
    letters: &'a [Letter],
    t: usize,
    budget: u64,
    checks: u64,
    classes: Vec<Vec<usize>>,
    best: Option<Vec<Vec<usize>>>,
}

impl Search<'_> {
    /// Enumerates balanced partitions of `rest` into the remaining classes.
    fn partitions(&mut self, rest: &[usize]) -> Result<()> {
        if rest.is_empty() {
            if self.best.as_ref().is_none_or(|b| self.classes < *b) {
                self.best = Some(self.classes.clone());
            }
            return Ok(());
        }
        let head = rest[0];
        let tail = &rest[1..];
        let t = self.t;
        for_each_combination(tail.len(), t - 1, &mut |pick| {
            self.checks += 1;
            if self.checks > self.budget {
                return Err(Error::BudgetExceeded {
                    what: "oracle partition checks",
                    budget: self.budget,
                });
            }
            let mut class = Vec::with_capacity(t);
            class.push(head);
            class.extend(pick.iter().map(|&j| tail[j]));
            if let Some(first) = self.classes.first() {
                if first
                    .iter()
                    .zip(&class)
                    .any(|(&a, &b)| self.letters[a] != self.letters[b])
                {
                    return Ok(());
                }
            }
            let mut remaining = Vec::with_capacity(tail.len() + 1 - t);
            let mut chosen = pick.iter().peekable();
            for (j, &p) in tail.iter().enumerate() {
                if chosen.peek() == Some(&&j) {
                    chosen.next();
                } else {
                    remaining.push(p);
                }
            }
            self.classes.push(class);
            let out = self.partitions(&remaining);
            self.classes.pop();
            out
        })
    }
}

/// Calls `f` with each `k`-subset of `0..n` (sorted, lexicographic order).
pub(crate) fn for_each_combination<F>(n: usize, k: usize, f: &mut F) -> Result<()>
where
    F: FnMut(&[usize]) -> Result<()>,
{
    if k > n {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx)?;
        // rightmost slot that can still advance
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return Ok(());
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::verify_twins;

    fn solve(s: &str, r: usize) -> SolveResult {
        longest_twins_oracle(&Word::parse(s).unwrap(), r).unwrap()
    }

    #[test]
    fn combinations_are_lexicographic_and_complete() {
        let mut seen = Vec::new();
        for_each_combination(5, 3, &mut |c| {
            seen.push(c.to_vec());
            Ok(())
        })
        .unwrap();
        assert_eq!(seen.len(), 10);
        assert_eq!(seen[0], vec![0, 1, 2]);
        assert_eq!(seen[9], vec![2, 3, 4]);
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
        let mut empty = 0;
        for_each_combination(3, 0, &mut |c| {
            assert!(c.is_empty());
            empty += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(empty, 1);
    }

    #[test]
    fn small_examples() {
        assert_eq!(solve("aaaa", 2).length, 2);
        let abc = solve("abc", 2);
        assert_eq!(abc.length, 0);
        assert_eq!(abc.witness, TwinWitness::empty(2));
        let aabb = solve("aabb", 2);
        assert_eq!(aabb.length, 2);
        assert_eq!(aabb.witness.index_sets, vec![vec![1, 3], vec![2, 4]]);
    }

    #[test]
    fn witness_is_lexicographically_smallest() {
        // "abab": {1,2},{3,4} is the smallest of the two length-2 witnesses.
        let res = solve("abab", 2);
        assert_eq!(res.witness.index_sets, vec![vec![1, 2], vec![3, 4]]);
        let res = solve("aaaaaa", 3);
        assert_eq!(res.witness.index_sets, vec![vec![1, 2], vec![3, 4], vec![5, 6]]);
    }

    #[test]
    fn budget_is_enforced() {
        let w = Word::parse("abcabcabcabc").unwrap();
        let err = longest_twins_oracle_with_budget(&w, 2, 10).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn witnesses_verify() {
        for s in ["abcabc", "abacabad", "aabbccab", "cbacba"] {
            for r in 2..=3 {
                let w = Word::parse(s).unwrap();
                let res = longest_twins_oracle(&w, r).unwrap();
                let v = verify_twins(&w, &res.witness);
                assert!(v.valid, "{s} r={r}");
                assert_eq!(v.length, res.length);
            }
        }
    }
}
