use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::enumerate::{check_budget, LevelTable, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::linalg::norm2;
use crate::potentials::{log_svf_from_profile, PotentialSpec};
use crate::tuple::MatrixTuple;
use crate::word::{random_words, shortlex, shortlex_count, Word};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PressureOptions {
    /// Maximum number of words enumerated at one level.
    pub budget: u64,
    /// Every word up to this length is tried as a periodic orbit.
    pub periodic_len: usize,
    /// Extra random periodic words, of lengths beyond `periodic_len`.
    pub random_samples: usize,
    pub seed: u64,
}

impl Default for PressureOptions {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, periodic_len: 6, random_samples: 64, seed: 0 }
    }
}

/// Certified enclosure `lower ≤ P(Φ) ≤ upper` at one depth.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PressureBracket {
    pub potential: PotentialSpec,
    pub depth: usize,
    pub upper: f64,
    pub lower: f64,
    /// Best periodic-orbit bound `max_w (1/|w|) ln Φ̃(w)`.
    pub periodic_lower: f64,
    /// Periodic word attaining `periodic_lower`.
    pub lower_witness: Word,
    /// Co-singular-value bound `(1/n) ln Σ Ψ(w)` at the same depth.
    pub co_lower: f64,
}

impl PressureBracket {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Periodic words with the eigenvalue-modulus profiles of their products.
/// Each contributes the lower bound `(1/|w|) ln Φ̃(w)`, where `Φ̃` is the
/// potential evaluated on eigenvalue moduli instead of singular values.
#[derive(Debug, Clone)]
pub struct PeriodicCandidates {
    words: Vec<Word>,
    profiles: Vec<Vec<f64>>,
}

impl PeriodicCandidates {
    pub fn build(t: &MatrixTuple, opts: &PressureOptions) -> Result<Self> {
        if opts.periodic_len == 0 {
            return Err(Error::input("periodic_len", "must be at least 1"));
        }
        check_budget(shortlex_count(t.len(), opts.periodic_len), opts.budget)?;
        let mut words: Vec<Word> = shortlex(t.len(), opts.periodic_len).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        words.extend(random_words(
            &mut rng,
            t.len(),
            opts.random_samples,
            opts.periodic_len + 1,
            2 * opts.periodic_len,
        ));
        let profiles = words
            .par_iter()
            .map(|w| t.word_log_moduli(w))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { words, profiles })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Best lower bound and the word attaining it (first in candidate order on ties).
    pub fn best(&self, spec: &PotentialSpec) -> (f64, Word) {
        self.best_by(|p, w| spec.log_from_profile(p, w))
    }

    fn best_by(&self, f: impl Fn(&[f64], &Word) -> f64 + Sync) -> (f64, Word) {
        let vals: Vec<f64> = self
            .words
            .par_iter()
            .zip(&self.profiles)
            .map(|(w, p)| f(p, w) / w.len() as f64)
            .collect();
        let mut best = 0;
        for (i, v) in vals.iter().enumerate() {
            if *v > vals[best] {
                best = i;
            }
        }
        (vals[best], self.words[best].clone())
    }
}

/// Brackets `P(Φ) = inf_n (1/n) ln Σ_{|w|=n} Φ(w)` at depth `n`.
pub fn pressure_bracket(
    t: &MatrixTuple,
    spec: &PotentialSpec,
    n: usize,
    opts: &PressureOptions,
) -> Result<PressureBracket> {
    spec.check_tuple(t)?;
    let table = LevelTable::build(t, n, opts.budget)?;
    let upper = table.log_partition(spec) / n as f64;
    let co_lower = table.log_co_partition(spec) / n as f64;
    let (periodic_lower, lower_witness) = PeriodicCandidates::build(t, opts)?.best(spec);
    Ok(PressureBracket {
        potential: spec.clone(),
        depth: n,
        upper,
        lower: periodic_lower.max(co_lower).min(upper),
        periodic_lower,
        lower_witness,
        co_lower,
    })
}

/// `(1/n) ln Σ_{|w|=n} Φ(w)` for `n = 1..=max_depth`.
pub fn upper_pressure_sequence(
    t: &MatrixTuple,
    spec: &PotentialSpec,
    max_depth: usize,
    budget: u64,
) -> Result<Vec<f64>> {
    spec.check_tuple(t)?;
    (1..=max_depth)
        .map(|n| Ok(LevelTable::build(t, n, budget)?.log_partition(spec) / n as f64))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffinityInterval {
    pub s_lo: f64,
    pub s_hi: f64,
    pub width: f64,
    pub depth: usize,
}

/// Slack under which the pressure at `s = d` counts as zero.
const ZERO_AT_TOP: f64 = 1e-12;

pub(crate) fn check_contractions(t: &MatrixTuple) -> Result<()> {
    for (i, a) in t.iter().enumerate() {
        let nrm = norm2(a);
        if nrm >= 1.0 {
            return Err(Error::Precondition(format!(
                "map {} is not a strict contraction (‖A‖ = {nrm})",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Smallest `s` in `[0, d]` with `f(s) ≤ 0`, to within `resolution`, for a
/// decreasing `f`. Returns `(last s with f > 0, first s with f ≤ 0)`.
fn bisect_decreasing(f: impl Fn(f64) -> f64, d: f64, resolution: f64) -> (f64, f64) {
    if f(0.0) <= 0.0 {
        return (0.0, 0.0);
    }
    if f(d) >= -ZERO_AT_TOP {
        return (d, d);
    }
    let (mut lo, mut hi) = (0.0, d);
    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Encloses the zero of `s ↦ P(𝖠, φ^s)`: `s_hi` comes from the upper
/// pressure estimate at depth `n` and `s_lo` from the larger of the
/// periodic-orbit and co-singular-value lower bounds, each located by
/// bisection to `tol / 4`.
pub fn affinity_dimension(
    t: &MatrixTuple,
    n: usize,
    tol: f64,
    opts: &PressureOptions,
) -> Result<AffinityInterval> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::input("tol", "tolerance must be positive"));
    }
    check_contractions(t)?;
    let d = t.dim() as f64;
    let table = LevelTable::build(t, n, opts.budget)?;
    let candidates = PeriodicCandidates::build(t, opts)?;
    let upper = |s: f64| table.log_partition(&PotentialSpec::Svf { s }) / n as f64;
    let lower = |s: f64| {
        let co = table.log_co_partition(&PotentialSpec::Svf { s }) / n as f64;
        candidates.best_by(|p, _| log_svf_from_profile(p, s)).0.max(co)
    };
    let s_hi = bisect_decreasing(upper, d, tol / 4.0).1;
    let s_lo = bisect_decreasing(lower, d, tol / 4.0).0.min(s_hi);
    Ok(AffinityInterval { s_lo, s_hi, width: s_hi - s_lo, depth: n })
}
