//! Explicit twin constructions: solving fixed-length segments independently,
//! round-robin interlacing of per-segment letter quotas, and extending
//! twins by a newly inserted letter ("boosting"), alone or iterated.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{from_u64, powi, Scalar};
use crate::solver::{SolveResult, SolverKind};
use crate::witness::{verify_twins, TwinWitness};
use crate::word::{Letter, Word};

/// Per-segment solutions of a word cut into pieces of equal length.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SegmentPlan {
    pub segment_length: usize,
    pub segment_count: usize,
    pub per_segment: Vec<SolveResult>,
    /// union of the per-segment witnesses, in word positions
    pub witness: TwinWitness,
}

impl SegmentPlan {
    pub fn length(&self) -> usize {
        self.witness.len()
    }
}

/// Twins (`r = 2`) from segments of length `s`; the last `n mod s` letters are ignored.
pub fn segment_concat(word: &Word, s: usize, solver: SolverKind) -> Result<SegmentPlan> {
    segment_concat_r(word, s, 2, solver)
}

/// r-twins assembled from independently solved segments of length `s`.
pub fn segment_concat_r(word: &Word, s: usize, r: usize, solver: SolverKind) -> Result<SegmentPlan> {
    if s < 2 {
        return Err(Error::Domain(format!("segment length must be at least 2, got {s}")));
    }
    let segments: Vec<Word> = word.segments(s).collect();
    let per_segment = segments
        .par_iter()
        .map(|seg| solver.solve(seg, r))
        .collect::<Result<Vec<_>>>()?;
    let mut sets = vec![Vec::new(); r];
    for (j, res) in per_segment.iter().enumerate() {
        if res.length == 0 {
            continue;
        }
        for (set, part) in sets.iter_mut().zip(&res.witness.index_sets) {
            set.extend(part.iter().map(|&p| p + j * s));
        }
    }
    Ok(SegmentPlan {
        segment_length: s,
        segment_count: segments.len(),
        per_segment,
        witness: TwinWitness::new(sets).canonical(),
    })
}

/// Result of [`interlace`].
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Interlacing {
    pub witness: TwinWitness,
    /// positions used by all twins together
    pub covered: usize,
    /// smallest count of any letter in any segment
    pub mu: usize,
    pub segment_length: usize,
}

/// r-twins by interlacing: the word is cut into `m` segments of length
/// `⌊n/m⌋`; twin `i` takes `μ` copies of letter `c` from segment `j`
/// whenever `c = (j - i) mod r < k`, and all twins are cut to the common
/// number of blocks.
pub fn interlace(word: &Word, r: usize, m: usize) -> Result<Interlacing> {
    let k = word.alphabet().size();
    if k < 2 || r < k {
        return Err(Error::Domain(format!(
            "interlacing needs r >= k >= 2, got r={r}, k={k}"
        )));
    }
    if m < r {
        return Err(Error::Domain(format!(
            "interlacing needs at least r={r} segments, got {m}"
        )));
    }
    let len = word.len() / m;
    let empty = Interlacing {
        witness: TwinWitness::empty(r),
        covered: 0,
        mu: 0,
        segment_length: len,
    };
    if len == 0 {
        return Ok(empty);
    }
    let segments: Vec<&[Letter]> = word.letters().chunks_exact(len).take(m).collect();
    let mu = segments
        .iter()
        .flat_map(|seg| {
            let mut counts = vec![0usize; k];
            seg.iter().for_each(|&l| counts[l as usize] += 1);
            counts
        })
        .min()
        .unwrap_or(0);
    if mu == 0 {
        return Ok(empty);
    }
    // twin r-1 starts last and therefore has the fewest blocks
    let tail = m - r + 1;
    let blocks = tail / r * k + (tail % r).min(k);
    let mut sets = Vec::with_capacity(r);
    for i in 0..r {
        let mut set = Vec::with_capacity(blocks * mu);
        for j in (i..m).filter(|j| (j - i) % r < k).take(blocks) {
            let letter = ((j - i) % r) as Letter;
            let base = j * len;
            set.extend(
                segments[j]
                    .iter()
                    .enumerate()
                    .filter(|&(_, &l)| l == letter)
                    .take(mu)
                    .map(|(q, _)| base + q + 1),
            );
        }
        sets.push(set);
    }
    Ok(Interlacing {
        witness: TwinWitness::new(sets),
        covered: r * blocks * mu,
        mu,
        segment_length: len,
    })
}

/// The `r` bins right after the `ℓ`-th element of each twin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Provider {
    /// bin `b_p` is the gap right after position `p` of the restricted word
    pub bins: Vec<usize>,
    pub ball_counts: Vec<usize>,
    /// smallest ball count
    pub s: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProviderProfile {
    pub providers: Vec<Provider>,
}

impl ProviderProfile {
    /// `Σ_ℓ s_ℓ`, the number of letters boosting adds to each twin.
    pub fn gain(&self) -> usize {
        self.providers.iter().map(|p| p.s).sum()
    }
}

/// Maps a witness of `extended` minus its highest letter back into `extended`.
struct Lift<'a> {
    letters: &'a [Letter],
    new_letter: Letter,
    /// 0-based positions in `extended` of the kept letters
    positions: Vec<usize>,
}

impl<'a> Lift<'a> {
    fn new(extended: &'a Word, base: &TwinWitness) -> Result<Self> {
        let k1 = extended.alphabet().size();
        if k1 < 2 {
            return Err(Error::Domain("the extended word needs at least two letters".into()));
        }
        let (restricted, positions) = extended.restrict_below(k1 - 1)?;
        let v = verify_twins(&restricted, base);
        if !v.valid {
            return Err(Error::InvalidWitness(
                v.reason.expect("invalid witnesses carry a reason"),
            ));
        }
        Ok(Self {
            letters: extended.letters(),
            new_letter: (k1 - 1) as Letter,
            positions,
        })
    }

    /// Number of new letters directly after 1-based restricted position `p`.
    fn balls_after(&self, p: usize) -> usize {
        let q = self.positions[p - 1];
        self.letters[q + 1..]
            .iter()
            .take_while(|&&l| l == self.new_letter)
            .count()
    }
}

/// Bins and ball counts seen by `base` (a witness on `extended` with its
/// highest letter deleted).
pub fn provider_profile(extended: &Word, base: &TwinWitness) -> Result<ProviderProfile> {
    let lift = Lift::new(extended, base)?;
    Ok(profile_of(&lift, base))
}

fn profile_of(lift: &Lift, base: &TwinWitness) -> ProviderProfile {
    let providers = (0..base.len())
        .map(|ell| {
            let bins: Vec<usize> = base.index_sets.iter().map(|set| set[ell]).collect();
            let ball_counts: Vec<usize> = bins.iter().map(|&p| lift.balls_after(p)).collect();
            let s = ball_counts.iter().copied().min().unwrap_or(0);
            Provider { bins, ball_counts, s }
        })
        .collect();
    ProviderProfile { providers }
}

/// Twins on `extended` of length `|base| + Σ_ℓ s_ℓ`: after the `ℓ`-th element
/// of every twin, the first `s_ℓ` copies of the new letter are appended.
pub fn boost(extended: &Word, base: &TwinWitness) -> Result<TwinWitness> {
    let lift = Lift::new(extended, base)?;
    let profile = profile_of(&lift, base);
    Ok(boost_with(&lift, base, &profile))
}

fn boost_with(lift: &Lift, base: &TwinWitness, profile: &ProviderProfile) -> TwinWitness {
    let sets = base
        .index_sets
        .iter()
        .map(|set| {
            let mut out = Vec::with_capacity(set.len() + profile.gain());
            for (&p, provider) in set.iter().zip(&profile.providers) {
                let q = lift.positions[p - 1] + 1;
                out.push(q);
                out.extend(q + 1..=q + provider.s);
            }
            out
        })
        .collect();
    TwinWitness {
        r: base.r,
        index_sets: sets,
    }
}

/// How the pipeline builds its starting twins on the restricted word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum BaseSolver {
    /// segments of a fixed length
    SegmentConcat { s: usize, solver: SolverKind },
    /// `count` segments of length `⌊n'/count⌋`, where `n'` is the restricted length
    SegmentCount { count: usize, solver: SolverKind },
    /// interlacing over `m` segments
    Interlace { m: usize },
}

impl BaseSolver {
    pub fn build(self, word: &Word, r: usize) -> Result<TwinWitness> {
        match self {
            BaseSolver::SegmentConcat { s, solver } => Ok(segment_concat_r(word, s, r, solver)?.witness),
            BaseSolver::SegmentCount { count, solver } => {
                let s = word.len() / count.max(1);
                if s < 2 {
                    return Ok(TwinWitness::empty(r));
                }
                Ok(segment_concat_r(word, s, r, solver)?.witness)
            }
            BaseSolver::Interlace { m } => Ok(interlace(word, r, m)?.witness),
        }
    }
}

/// One round of the pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoostStep {
    pub letter: usize,
    pub gain: usize,
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PipelineResult {
    pub base_length: usize,
    pub steps: Vec<BoostStep>,
    pub witness: TwinWitness,
}

/// Deletes every letter `>= k_start`, builds twins with `base`, then
/// re-inserts letters `k_start, k_start+1, ...` one at a time, boosting
/// after each insertion.
pub fn boost_pipeline(word: &Word, k_start: usize, r: usize, base: BaseSolver) -> Result<PipelineResult> {
    let k = word.alphabet().size();
    if k_start < 2 || k_start > k {
        return Err(Error::Domain(format!(
            "start alphabet must lie in 2..={k}, got {k_start}"
        )));
    }
    if r < 2 {
        return Err(Error::Domain(format!("r must be at least 2, got {r}")));
    }
    let (restricted, _) = word.restrict_below(k_start)?;
    let mut witness = base.build(&restricted, r)?;
    let base_length = witness.len();
    let mut steps = Vec::with_capacity(k - k_start);
    for letter in k_start..k {
        let (extended, _) = word.restrict_below(letter + 1)?;
        let lift = Lift::new(&extended, &witness)?;
        let profile = profile_of(&lift, &witness);
        witness = boost_with(&lift, &witness, &profile);
        steps.push(BoostStep {
            letter,
            gain: profile.gain(),
            length: witness.len(),
        });
    }
    Ok(PipelineResult {
        base_length,
        steps,
        witness,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoostVariant {
    Exact,
    Weak,
}

/// Expected multiplier of the twin ratio `t/n` when letter `k+1` joins a
/// `k`-letter alphabet: `(1 + 1/((k+1)^r - 1)) k/(k+1)`, or with
/// `1/(k+1)^r` in the weak variant.
pub fn theoretical_boost_factor<S: Scalar>(k: u64, r: u32, variant: BoostVariant) -> S {
    let p = powi(from_u64::<S>(k + 1), r);
    let extra = match variant {
        BoostVariant::Exact => S::one() / (p - S::one()),
        BoostVariant::Weak => S::one() / p,
    };
    (S::one() + extra) * from_u64::<S>(k) / from_u64::<S>(k + 1)
}

/// Coefficient of `n/k_end` after boosting from ratio `start` at `k_start`.
pub fn iterated_coefficient<S: Scalar>(start: S, k_start: u64, k_end: u64, r: u32, variant: BoostVariant) -> S {
    let ratio = (k_start..k_end).fold(start, |acc, j| acc * theoretical_boost_factor::<S>(j, r, variant));
    ratio * from_u64::<S>(k_end)
}

/// Serializable summary of one construction run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstructionReport {
    pub method: String,
    pub parameters: serde_json::Value,
    pub length: usize,
    pub witness: TwinWitness,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub covered: Option<usize>,
}
