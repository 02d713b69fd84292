use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::binomial;
use crate::potentials::{split_s, PotentialSpec};
use crate::structure::{
    irreducibility_report, proximality, strong_irreducibility_heuristic, IrreducibilityVerdict,
    ProximalityOptions, ProximalityVerdict, StrongIrreducibilityVerdict,
};
use crate::symbolic::{gibbs_approx, DEFAULT_BUDGET};
use crate::tuple::MatrixTuple;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationOptions {
    /// Level of the Gibbs approximation used for the exponent estimates.
    pub depth: usize,
    pub budget: u64,
    pub max_parts: usize,
    pub union_max_len: usize,
    pub proximality: ProximalityOptions,
}

impl Default for SeparationOptions {
    fn default() -> Self {
        Self {
            depth: 10,
            budget: DEFAULT_BUDGET,
            max_parts: 6,
            union_max_len: 4,
            proximality: ProximalityOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HypothesisStatus {
    Yes,
    Heuristic,
    No,
    /// Proximality search exhausted without a witness.
    NoUpTo,
    Unknown,
}

impl HypothesisStatus {
    fn rank(self) -> u8 {
        match self {
            HypothesisStatus::Yes => 3,
            HypothesisStatus::Heuristic => 2,
            HypothesisStatus::Unknown => 1,
            HypothesisStatus::No | HypothesisStatus::NoUpTo => 0,
        }
    }

    fn from_rank(r: u8) -> Self {
        match r {
            3 => HypothesisStatus::Yes,
            2 => HypothesisStatus::Heuristic,
            1 => HypothesisStatus::Unknown,
            _ => HypothesisStatus::No,
        }
    }

    fn and(self, other: Self) -> Self {
        if self.rank() <= other.rank() { self } else { other }
    }

    fn or(self, other: Self) -> Self {
        Self::from_rank(self.rank().max(other.rank()))
    }

    pub fn passes(self) -> bool {
        matches!(self, HypothesisStatus::Yes | HypothesisStatus::Heuristic)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SeparationCase {
    #[serde(rename = "i")]
    Upper,
    #[serde(rename = "ii")]
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Conclusion {
    #[serde(rename = "GAP_CONFIRMED")]
    GapConfirmed,
    #[serde(rename = "GAP_CONFIRMED(HEURISTIC)")]
    GapConfirmedHeuristic,
    #[serde(rename = "HYPOTHESES_FAIL")]
    HypothesesFail,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl Conclusion {
    pub fn is_confirmed(self) -> bool {
        matches!(self, Conclusion::GapConfirmed | Conclusion::GapConfirmedHeuristic)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationVerdict {
    pub case: SeparationCase,
    pub k: usize,
    /// One-based exponent indices `(a, b)`; the gap is `Λ_a − Λ_b`.
    pub gap_indices: (usize, usize),
    pub hypotheses: BTreeMap<String, HypothesisStatus>,
    /// Combined status of the hypothesis bundle.
    pub hypotheses_status: HypothesisStatus,
    pub gap_estimate: f64,
    /// `|gap_n − gap_{n−1}|` between consecutive Gibbs levels, used as the
    /// error scale of the estimate.
    pub stderr: f64,
    pub conclusion: Conclusion,
    /// Uniqueness of the equilibrium state is never checked numerically.
    pub uniqueness: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationReport {
    pub s: f64,
    pub d: usize,
    pub depth: usize,
    pub exponents: Vec<f64>,
    pub verdicts: Vec<SeparationVerdict>,
}

struct Checker<'a> {
    t: &'a MatrixTuple,
    opts: &'a SeparationOptions,
    irr: BTreeMap<usize, HypothesisStatus>,
    si: BTreeMap<usize, HypothesisStatus>,
    prox: BTreeMap<usize, HypothesisStatus>,
}

impl Checker<'_> {
    fn trivial(&self, l: usize) -> bool {
        binomial(self.t.dim(), l) == 1
    }

    fn irreducible(&mut self, l: usize) -> Result<HypothesisStatus> {
        if let Some(&s) = self.irr.get(&l) {
            return Ok(s);
        }
        let s = if self.trivial(l) {
            HypothesisStatus::Yes
        } else {
            match irreducibility_report(self.t, l)? {
                IrreducibilityVerdict::Yes => HypothesisStatus::Yes,
                IrreducibilityVerdict::No { .. } => HypothesisStatus::No,
                IrreducibilityVerdict::Unknown { .. } => HypothesisStatus::Unknown,
            }
        };
        self.irr.insert(l, s);
        Ok(s)
    }

    fn strongly_irreducible(&mut self, l: usize) -> Result<HypothesisStatus> {
        if let Some(&s) = self.si.get(&l) {
            return Ok(s);
        }
        let s = if self.trivial(l) {
            HypothesisStatus::Yes
        } else {
            match strong_irreducibility_heuristic(self.t, l, self.opts.max_parts, self.opts.union_max_len)? {
                StrongIrreducibilityVerdict::YesHeuristic { .. } => HypothesisStatus::Heuristic,
                StrongIrreducibilityVerdict::No { .. } => HypothesisStatus::No,
                StrongIrreducibilityVerdict::Unknown { .. } => HypothesisStatus::Unknown,
            }
        };
        self.si.insert(l, s);
        Ok(s)
    }

    fn proximal(&mut self, k: usize) -> Result<HypothesisStatus> {
        if let Some(&s) = self.prox.get(&k) {
            return Ok(s);
        }
        let s = match proximality(self.t, k, &self.opts.proximality)? {
            ProximalityVerdict::Yes { .. } => HypothesisStatus::Yes,
            ProximalityVerdict::NoUpTo { .. } => HypothesisStatus::NoUpTo,
        };
        self.prox.insert(k, s);
        Ok(s)
    }

    /// Evaluates the bundle: irreducibility at each of `levels`, proximality
    /// at `prox_k`, and `single` strongly irreducible or every level in `pair`.
    fn bundle(
        &mut self,
        levels: [usize; 3],
        prox_k: usize,
        single: usize,
        pair: &[usize],
    ) -> Result<(BTreeMap<String, HypothesisStatus>, HypothesisStatus)> {
        let mut map = BTreeMap::new();
        let mut all = HypothesisStatus::Yes;
        for l in levels {
            let s = self.irreducible(l)?;
            map.insert(format!("irreducible_{l}"), s);
            all = all.and(s);
        }
        let p = self.proximal(prox_k)?;
        map.insert(format!("proximal_{prox_k}"), p);
        all = all.and(p);

        let first = self.strongly_irreducible(single)?;
        map.insert(format!("strongly_irreducible_{single}"), first);
        let mut second = HypothesisStatus::Yes;
        for &l in pair {
            let s = self.strongly_irreducible(l)?;
            map.insert(format!("strongly_irreducible_{l}"), s);
            second = second.and(s);
        }
        let names: Vec<String> = pair.iter().map(|l| l.to_string()).collect();
        let alt = first.or(second);
        map.insert(format!("strong_alternative_{single}_or_{}", names.join("+")), alt);
        Ok((map, all.and(alt)))
    }
}

fn conclude(status: HypothesisStatus, gap: f64, stderr: f64) -> Conclusion {
    if !status.passes() {
        return if status == HypothesisStatus::Unknown {
            Conclusion::Inconclusive
        } else {
            Conclusion::HypothesesFail
        };
    }
    let noise = if stderr.is_finite() { stderr } else { f64::INFINITY };
    if gap > 0.0 && gap > 3.0 * noise {
        if status == HypothesisStatus::Heuristic {
            Conclusion::GapConfirmedHeuristic
        } else {
            Conclusion::GapConfirmed
        }
    } else {
        Conclusion::Inconclusive
    }
}

/// Checks the hypotheses of the Lyapunov-gap criterion for the `φ^s`
/// equilibrium state in each applicable case and estimates the gap under
/// the level-`depth` Gibbs approximation.
///
/// Case (i) takes `k = ⌈s⌉ − 1` and needs `k + 1 < d`; its gap is
/// `Λ_{k+1} − Λ_{k+2}`. Case (ii) takes `k = ⌊s⌋` and needs `k ≥ 1`; its gap
/// is `Λ_k − Λ_{k+1}`. For integer `s` the relaxed strong-irreducibility
/// alternatives are used.
pub fn check_separation(t: &MatrixTuple, s: f64, opts: &SeparationOptions) -> Result<SeparationReport> {
    let d = t.dim();
    if !(s > 0.0 && s < d as f64) {
        return Err(Error::input("s", format!("must lie in (0, {d}), got {s}")));
    }
    if opts.depth == 0 {
        return Err(Error::input("depth", "must be at least 1"));
    }
    let gibbs = gibbs_approx(t, &PotentialSpec::svf(s)?, opts.depth, opts.budget)?;
    let gap_of = |a: usize, b: usize| {
        let gap = gibbs.exponents[a - 1] - gibbs.exponents[b - 1];
        let stderr = match gibbs.previous_exponents.as_slice() {
            [] => f64::NAN,
            prev => (gap - (prev[a - 1] - prev[b - 1])).abs(),
        };
        (gap, stderr)
    };

    let (floor, frac) = split_s(s);
    let integer = frac == 0.0;
    let mut checker = Checker {
        t,
        opts,
        irr: BTreeMap::new(),
        si: BTreeMap::new(),
        prox: BTreeMap::new(),
    };
    let mut verdicts = Vec::new();

    let k = if integer { floor - 1 } else { floor };
    if k + 1 < d {
        let (single, pair): (usize, Vec<usize>) = if integer { (k, vec![k + 2]) } else { (k, vec![k + 1, k + 2]) };
        let (hypotheses, status) = checker.bundle([k, k + 1, k + 2], k + 1, single, &pair)?;
        let (gap, stderr) = gap_of(k + 1, k + 2);
        verdicts.push(SeparationVerdict {
            case: SeparationCase::Upper,
            k,
            gap_indices: (k + 1, k + 2),
            hypotheses,
            hypotheses_status: status,
            gap_estimate: gap,
            stderr,
            conclusion: conclude(status, gap, stderr),
            uniqueness: uniqueness_label(status),
        });
    }

    let k = floor;
    if k >= 1 {
        let (single, pair): (usize, Vec<usize>) = if integer { (k + 1, vec![k - 1]) } else { (k + 1, vec![k - 1, k]) };
        let (hypotheses, status) = checker.bundle([k - 1, k, k + 1], k, single, &pair)?;
        let (gap, stderr) = gap_of(k, k + 1);
        verdicts.push(SeparationVerdict {
            case: SeparationCase::Lower,
            k,
            gap_indices: (k, k + 1),
            hypotheses,
            hypotheses_status: status,
            gap_estimate: gap,
            stderr,
            conclusion: conclude(status, gap, stderr),
            uniqueness: uniqueness_label(status),
        });
    }

    Ok(SeparationReport { s, d, depth: opts.depth, exponents: gibbs.exponents, verdicts })
}

fn uniqueness_label(status: HypothesisStatus) -> &'static str {
    if status.passes() { "IMPLIED_BY_HYPOTHESES" } else { "NOT_ESTABLISHED" }
}
