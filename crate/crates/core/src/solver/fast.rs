//! Memoized branch-and-bound search for longest r-twins.
//!
//! Positions are scanned left to right and each one is either skipped or
//! appended to one of the `r` classes. Since the classes must spell the same
//! word `u`, a prefix of the scan is summarised by how far each class has
//! progressed along `u` and by the part of `u` that the leading class has
//! committed to but the slowest class has not reached yet (the *pending*
//! letters). Classes are interchangeable, so the length search keeps the
//! progress offsets sorted and treats equal offsets as one move.
//!
//! A state can reach at most
//!   * `⌊(remaining + Σ offsets) / r⌋` further common letters, and
//!   * `D + Σ_x ⌊(count_x(rest) − need_x) / r⌋`, where `need_x` counts the
//!     copies of `x` the lagging classes still owe to the pending part,
//!     or fewer than `D = |pending|` when some letter runs short;
//!   * the slowest class must embed all pending letters into the rest of the
//!     word, so only the prefix of the pending part that embeds counts, and
//!     every later common letter must also occur after that embedding ends.
//!
//! Failed `(position, state)` pairs are remembered with the smallest demand
//! that failed; the table is shared by all target lengths of one word.
//!
//! The witness is recovered greedily: index sets are fixed one position at a
//! time, smallest first, each choice certified by a labelled feasibility
//! search, which yields the lexicographically smallest canonical witness.

use rustc_hash::{FxHashMap, FxHashSet};
use smallvec::SmallVec;

use crate::error::Result;
use crate::witness::TwinWitness;
use crate::word::{Letter, Word};

use super::{check_r, SolveResult};

type Offsets = SmallVec<[u16; 8]>;
type Pending = SmallVec<[Letter; 32]>;
type Key = SmallVec<[u8; 64]>;

/// Longest r-twins with the canonical (lexicographically smallest) witness.
pub fn longest_twins_fast(word: &Word, r: usize) -> Result<SolveResult> {
    check_r(r)?;
    let mut search = LengthSearch::new(word, r);
    let length = search.longest();
    let mut nodes = search.nodes;
    let witness = if length == 0 {
        TwinWitness::empty(r)
    } else {
        let (sets, extra) = lex_min_witness(word, r, length);
        nodes += extra;
        TwinWitness::from_zero_based(sets)
    };
    Ok(SolveResult {
        length,
        witness,
        nodes_explored: nodes,
    })
}

/// Longest r-twins with the first witness the length search meets.
///
/// Same length as [`longest_twins_fast`] and just as deterministic, but the
/// witness is not tie-broken; on long words that tie-break can cost far more
/// than the length itself.
pub fn longest_twins_quick(word: &Word, r: usize) -> Result<SolveResult> {
    check_r(r)?;
    let mut search = LengthSearch::new(word, r);
    search.trail = Some(Vec::new());
    let length = search.longest();
    let mut sets = vec![Vec::new(); r];
    if length > 0 {
        // the trail lists (position, slot) moves deepest first
        for &(i, j) in search.trail.iter().flatten().rev() {
            sets[j as usize].push(i as usize);
        }
        sets.iter_mut().for_each(|set| set.truncate(length));
    }
    let witness = if length == 0 {
        TwinWitness::empty(r)
    } else {
        TwinWitness::from_zero_based(sets).canonical()
    };
    Ok(SolveResult {
        length,
        witness,
        nodes_explored: search.nodes,
    })
}

/// Length of the longest r-twins, without a witness.
pub fn max_twins_length(word: &Word, r: usize) -> Result<usize> {
    check_r(r)?;
    Ok(LengthSearch::new(word, r).longest())
}

/// Whether `word` contains r-twins of length `t` (equivalently, at least `t`).
pub fn has_twins_of_length(word: &Word, t: usize, r: usize) -> bool {
    if r < 2 {
        return false;
    }
    if t == 0 {
        return true;
    }
    if r * t > word.len() {
        return false;
    }
    let mut search = LengthSearch::new(word, r);
    search.reaches(t)
}

/// Per-word lookup tables shared by both searches.
struct Tables {
    n: usize,
    k: usize,
    /// `suffix[i*k + x]`: occurrences of `x` in `letters[i..]`
    suffix: Vec<u32>,
    /// `next[i*k + x]`: first position `>= i` holding `x`, or `n`
    next: Vec<u32>,
}

impl Tables {
    fn new(letters: &[Letter], k: usize) -> Self {
        let n = letters.len();
        let mut suffix = vec![0u32; (n + 1) * k];
        let mut next = vec![n as u32; (n + 1) * k];
        for i in (0..n).rev() {
            let (head, tail) = suffix.split_at_mut((i + 1) * k);
            head[i * k..].copy_from_slice(&tail[..k]);
            head[i * k + letters[i] as usize] += 1;
            let (head, tail) = next.split_at_mut((i + 1) * k);
            head[i * k..].copy_from_slice(&tail[..k]);
            head[i * k + letters[i] as usize] = i as u32;
        }
        Self { n, k, suffix, next }
    }

    fn counts(&self, i: usize) -> &[u32] {
        &self.suffix[i * self.k..(i + 1) * self.k]
    }

    /// Upper bound on the number of further common letters every class can
    /// reach, measured from the slowest class. `offs` is sorted with
    /// `offs[0] == 0` and `pending` holds the letters between the slowest and
    /// the fastest class.
    fn reach_bound(&self, i: usize, r: usize, offs: &[u16], pending: &[Letter], need: &mut [u32]) -> usize {
        let sum: usize = offs.iter().map(|&o| o as usize).sum();
        let by_sum = (self.n - i + sum) / r;
        let counts = self.counts(i);
        need.iter_mut().for_each(|c| *c = 0);
        let mut behind = 0;
        let mut at = i;
        for (p, &x) in pending.iter().enumerate() {
            while behind < r && offs[behind] as usize <= p {
                behind += 1;
            }
            let xi = x as usize;
            need[xi] += behind as u32;
            if need[xi] > counts[xi] || at >= self.n {
                return by_sum.min(p);
            }
            at = self.next[at * self.k + xi] as usize;
            if at == self.n {
                return by_sum.min(p);
            }
            at += 1;
        }
        let tail = self.counts(at);
        let extra: usize = counts
            .iter()
            .zip(need.iter())
            .zip(tail)
            .map(|((&c, &d), &after)| (((c - d) as usize) / r).min(after as usize))
            .sum();
        by_sum.min(pending.len() + extra)
    }
}

#[derive(Clone)]
struct SymState {
    /// sorted, `offs[0] == 0`, `offs[r-1] == pending.len()`
    offs: Offsets,
    pending: Pending,
}

struct LengthSearch<'a> {
    letters: &'a [Letter],
    r: usize,
    tables: Tables,
    memo: FxHashMap<Key, u16>,
    need: Vec<u32>,
    nodes: u64,
    /// when set, collects the moves of the successful path
    trail: Option<Vec<(u16, u8)>>,
}

impl<'a> LengthSearch<'a> {
    fn new(word: &'a Word, r: usize) -> Self {
        let k = word.alphabet().size();
        Self {
            letters: word.letters(),
            r,
            tables: Tables::new(word.letters(), k),
            memo: FxHashMap::default(),
            need: vec![0; k],
            nodes: 0,
            trail: None,
        }
    }

    fn root(&self) -> SymState {
        SymState {
            offs: smallvec::smallvec![0; self.r],
            pending: Pending::new(),
        }
    }

    fn longest(&mut self) -> usize {
        let root = self.root();
        let top = self.upper_bound(0, &root);
        (1..=top)
            .rev()
            .find(|&t| {
                if let Some(trail) = &mut self.trail {
                    trail.clear();
                }
                self.decide(0, &root, t)
            })
            .unwrap_or(0)
    }

    fn reaches(&mut self, t: usize) -> bool {
        let root = self.root();
        self.decide(0, &root, t)
    }

    fn upper_bound(&mut self, i: usize, st: &SymState) -> usize {
        self.tables
            .reach_bound(i, self.r, &st.offs, &st.pending, &mut self.need)
    }

    fn key(i: usize, st: &SymState) -> Key {
        let mut key = Key::new();
        key.extend_from_slice(&(i as u16).to_le_bytes());
        for &o in &st.offs[1..] {
            key.extend_from_slice(&o.to_le_bytes());
        }
        key.extend_from_slice(&st.pending);
        key
    }

    /// Can `demand` more common letters be completed from state `st` at position `i`?
    fn decide(&mut self, i: usize, st: &SymState, demand: usize) -> bool {
        if demand == 0 {
            return true;
        }
        if i == self.letters.len() {
            return false;
        }
        self.nodes += 1;
        if self.upper_bound(i, st) < demand {
            return false;
        }
        let key = Self::key(i, st);
        if let Some(&failed) = self.memo.get(&key) {
            if failed as usize <= demand {
                return false;
            }
        }
        let x = self.letters[i];
        let r = self.r;
        let top = st.pending.len();
        for j in 0..r {
            // one move per group of equal offsets: advance its last member
            if j + 1 < r && st.offs[j] == st.offs[j + 1] {
                continue;
            }
            let d = st.offs[j] as usize;
            let mut next = st.clone();
            if d < top {
                if st.pending[d] != x {
                    continue;
                }
            } else {
                next.pending.push(x);
            }
            next.offs[j] += 1;
            let gained = if next.offs[0] > 0 {
                next.offs.iter_mut().for_each(|o| *o -= 1);
                next.pending.remove(0);
                1
            } else {
                0
            };
            if self.decide(i + 1, &next, demand - gained) {
                // offsets stay sorted under every move, so slot `j` is one class throughout
                if let Some(trail) = &mut self.trail {
                    trail.push((i as u16, j as u8));
                }
                return true;
            }
        }
        if self.decide(i + 1, st, demand) {
            return true;
        }
        let slot = self.memo.entry(key).or_insert(u16::MAX);
        *slot = (*slot).min(demand as u16);
        false
    }
}

/// Labelled search: class `c` may take position `i` only if bit `c` of
/// `masks[i]` is set; bit `r` allows skipping. Every class must reach
/// exactly `target`, and class `c > 0` may start only after class `c-1`.
struct Feasibility<'a> {
    letters: &'a [Letter],
    r: usize,
    target: usize,
    tables: &'a Tables,
    masks: Vec<u32>,
    failed: FxHashSet<Key>,
    need: Vec<u32>,
    nodes: u64,
}

#[derive(Clone)]
struct LabelState {
    prog: Offsets,
    low: usize,
    /// `u[low..max prog]`
    pending: Pending,
}

impl Feasibility<'_> {
    fn prunable(&mut self, i: usize, st: &LabelState) -> bool {
        let mut offs: Offsets = st.prog.iter().map(|&p| p - st.low as u16).collect();
        offs.sort_unstable();
        let reach = self.tables.reach_bound(i, self.r, &offs, &st.pending, &mut self.need);
        st.low + reach < self.target
    }

    fn key(i: usize, st: &LabelState) -> Key {
        let mut key = Key::new();
        key.extend_from_slice(&(i as u16).to_le_bytes());
        for &p in &st.prog {
            key.extend_from_slice(&p.to_le_bytes());
        }
        key.extend_from_slice(&st.pending);
        key
    }

    fn feasible(&mut self, i: usize, st: &LabelState) -> bool {
        let n = self.letters.len();
        if i == n {
            return st.prog.iter().all(|&p| p as usize == self.target);
        }
        self.nodes += 1;
        if self.prunable(i, st) {
            return false;
        }
        let key = Self::key(i, st);
        if self.failed.contains(&key) {
            return false;
        }
        let x = self.letters[i];
        let mask = self.masks[i];
        for c in 0..self.r {
            if mask & (1 << c) == 0 {
                continue;
            }
            if let Some(next) = take(st, c, x, self.target) {
                if self.feasible(i + 1, &next) {
                    return true;
                }
            }
        }
        if mask & (1 << self.r) != 0 && self.feasible(i + 1, st) {
            return true;
        }
        self.failed.insert(key);
        false
    }
}

/// State after class `c` takes a position holding `x`, if that is allowed.
fn take(st: &LabelState, c: usize, x: Letter, target: usize) -> Option<LabelState> {
    let p = st.prog[c] as usize;
    if p == target || (p == 0 && c > 0 && st.prog[c - 1] == 0) {
        return None;
    }
    let top = st.low + st.pending.len();
    let mut next = st.clone();
    if p < top {
        if st.pending[p - st.low] != x {
            return None;
        }
    } else {
        next.pending.push(x);
    }
    next.prog[c] += 1;
    let low = next.prog.iter().copied().min().unwrap_or(0) as usize;
    if low > next.low {
        next.pending.remove(0);
        next.low = low;
    }
    Some(next)
}

/// Lexicographically smallest canonical witness of length `t` (which must exist).
///
/// Sets are fixed one at a time. While set `c` is being fixed, the states
/// reachable just after its newest position form a frontier; a candidate
/// position is accepted when some frontier state, pushed through it, can be
/// completed. Past the newest position every check sees the same options
/// (later ones only lose some), so failures are remembered for the whole set.
fn lex_min_witness(word: &Word, r: usize, t: usize) -> (Vec<Vec<usize>>, u64) {
    let letters = word.letters();
    let n = letters.len();
    let k = word.alphabet().size();
    let tables = Tables::new(letters, k);
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut sets: Vec<Vec<usize>> = Vec::with_capacity(r);
    let mut nodes = 0;
    let root = LabelState {
        prog: smallvec::smallvec![0; r],
        low: 0,
        pending: Pending::new(),
    };
    for c in 0..r {
        if c == r - 1 {
            let last = last_set(letters, &owner, &sets, t);
            sets.push(last);
            break;
        }
        let skip = 1u32 << r;
        let later: u32 = ((1u32 << r) - 1) & !((1u32 << (c + 1)) - 1);
        let masks = owner
            .iter()
            .map(|o| match o {
                Some(d) => 1 << d,
                None => skip | later | (1 << c),
            })
            .collect();
        let mut f = Feasibility {
            letters,
            r,
            target: t,
            tables: &tables,
            masks,
            failed: FxHashSet::default(),
            need: vec![0; k],
            nodes: 0,
        };
        // states before position `pos` with every prefix position taken by `c`
        let mut frontier = vec![root.clone()];
        let mut pos = 0;
        let mut prefix: Vec<usize> = Vec::with_capacity(t);
        for ell in 0..t {
            let lo = match (ell, c) {
                (0, 0) => 0,
                (0, _) => sets[c - 1][0] + 1,
                _ => prefix[ell - 1] + 1,
            };
            let mut chosen = None;
            for p in pos..n {
                let candidate = p >= lo && owner[p].is_none() && (c == 0 || letters[p] == letters[sets[0][ell]]);
                if candidate {
                    let after = f.push_through(p, &frontier, 1 << c);
                    if after.iter().any(|st| f.feasible(p + 1, st)) {
                        chosen = Some((p, after));
                        break;
                    }
                }
                let mask = match owner[p] {
                    Some(d) => 1 << d,
                    None => skip | later,
                };
                frontier = f.push_through(p, &frontier, mask);
            }
            let (p, after) = chosen.expect("a certified length has a completion");
            prefix.push(p);
            frontier = after;
            pos = p + 1;
        }
        nodes += f.nodes;
        for &p in &prefix {
            owner[p] = Some(c);
        }
        sets.push(prefix);
    }
    (sets, nodes)
}

/// Once the other sets are fixed the common word is known, and its leftmost
/// embedding into the free positions is the smallest last set.
fn last_set(letters: &[Letter], owner: &[Option<usize>], sets: &[Vec<usize>], t: usize) -> Vec<usize> {
    let word: Vec<Letter> = sets[0].iter().map(|&p| letters[p]).collect();
    let start = sets.last().map_or(0, |s| s[0] + 1);
    let mut out = Vec::with_capacity(t);
    for p in start..letters.len() {
        if out.len() == t {
            break;
        }
        if owner[p].is_none() && letters[p] == word[out.len()] {
            out.push(p);
        }
    }
    debug_assert_eq!(out.len(), t, "a certified length has a completion");
    out
}

impl Feasibility<'_> {
    /// Successors at `i + 1` of the states in `states` (all at `i`) under
    /// `mask`, without duplicates or states that cannot finish.
    fn push_through(&mut self, i: usize, states: &[LabelState], mask: u32) -> Vec<LabelState> {
        let x = self.letters[i];
        let mut seen: FxHashSet<Key> = FxHashSet::default();
        let mut out = Vec::new();
        for st in states {
            let mut moves: Vec<LabelState> = (0..self.r)
                .filter(|&c| mask & (1 << c) != 0)
                .filter_map(|c| take(st, c, x, self.target))
                .collect();
            if mask & (1 << self.r) != 0 {
                moves.push(st.clone());
            }
            for next in moves {
                self.nodes += 1;
                if i + 1 < self.letters.len() && self.prunable(i + 1, &next) {
                    continue;
                }
                let key = Self::key(i + 1, &next);
                if !self.failed.contains(&key) && seen.insert(key) {
                    out.push(next);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::witness::verify_twins;

    fn len(s: &str, r: usize) -> usize {
        max_twins_length(&Word::parse(s).unwrap(), r).unwrap()
    }

    #[test]
    fn trivial_lengths() {
        assert_eq!(len("aaaa", 2), 2);
        assert_eq!(len("abc", 2), 0);
        assert_eq!(len("aabb", 2), 2);
        assert_eq!(len("aaaaaaaaaaaaaa", 2), 7);
        assert_eq!(len("", 2), 0);
        assert_eq!(len("aaaaaaa", 3), 2);
    }

    #[test]
    fn decision_examples() {
        let w = Word::parse("aaaa").unwrap();
        assert!(has_twins_of_length(&w, 2, 2));
        assert!(!has_twins_of_length(&w, 3, 2));
        assert!(has_twins_of_length(&w, 0, 2));
        let w = Word::parse("abcabc").unwrap();
        assert!(has_twins_of_length(&w, 3, 2));
        assert!(!has_twins_of_length(&w, 2, 3));
    }

    #[test]
    fn interleaved_twins_are_not_squares() {
        let res = longest_twins_fast(&Word::parse("aabb").unwrap(), 2).unwrap();
        assert_eq!(res.length, 2);
        assert_eq!(res.witness.index_sets, vec![vec![1, 3], vec![2, 4]]);
    }

    #[test]
    fn boosting_example_has_three_twins_of_length_five() {
        let w = fixtures::example_word();
        let res = longest_twins_fast(&w, 3).unwrap();
        assert!(res.length >= 5);
        let v = verify_twins(&w, &res.witness);
        assert!(v.valid);
        assert_eq!(v.length, res.length);
    }

    #[test]
    fn lookup_tables() {
        let t = Tables::new(&[0, 1, 0], 2);
        assert_eq!(t.suffix, vec![2, 1, 1, 1, 1, 0, 0, 0]);
        assert_eq!(t.next, vec![0, 1, 2, 1, 2, 3, 3, 3]);
    }

    #[test]
    fn reach_bound_respects_order() {
        // pending "ba" cannot be embedded in "ab"
        let t = Tables::new(&[0, 1], 2);
        let mut need = vec![0; 2];
        assert_eq!(t.reach_bound(0, 2, &[0, 2], &[1, 0], &mut need), 1);
        assert_eq!(t.reach_bound(0, 2, &[0, 2], &[0, 1], &mut need), 2);
    }
}
