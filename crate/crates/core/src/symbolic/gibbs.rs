use rayon::prelude::*;
use serde::Serialize;

use super::enumerate::{check_budget, log_sum_exp, word_count, LevelTable};
use crate::error::{Error, Result};
use crate::potentials::PotentialSpec;
use crate::tuple::MatrixTuple;

/// Normalised level-`n` weights `ν_n(w) ∝ Φ(w)` approximating the
/// equilibrium state of `Φ`, with the usual thermodynamic estimates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GibbsApprox {
    pub potential: PotentialSpec,
    pub depth: usize,
    /// `ln ν_n(w)` in lexicographic word order; log-sum-exp is 0.
    pub log_weights: Vec<f64>,
    /// `(1/n) ln Σ_{|w|=n} Φ(w)`.
    pub upper: f64,
    /// `H_n - H_{n-1}` in nats per symbol.
    pub entropy_estimate: f64,
    /// `Σ ν_n(w) (1/n) ln Φ(w)`.
    pub lyapunov_estimate: f64,
    /// `|entropy + lyapunov - upper|`.
    pub pressure_defect: f64,
    /// Total-variation distance between the level-`(n-1)` marginal of
    /// `ν_n` and `ν_{n-1}`.
    pub marginal_defect: f64,
    /// `Σ ν_n(w) (1/n) ln α_j(A_w)` for each `j`.
    pub exponents: Vec<f64>,
    /// `|exponents_n - exponents_{n-1}|` per index; NaN at depth 1.
    pub exponent_drift: Vec<f64>,
    /// The same averages under `ν_{n-1}`; empty at depth 1.
    pub previous_exponents: Vec<f64>,
}

impl GibbsApprox {
    /// `ν_n` as plain probabilities.
    pub fn weights(&self) -> Vec<f64> {
        self.log_weights.iter().map(|x| x.exp()).collect()
    }
}

struct Level {
    log_z: f64,
    log_phi: Vec<f64>,
    log_weights: Vec<f64>,
    entropy: f64,
    lyapunov: f64,
    exponents: Vec<f64>,
}

fn level(table: &LevelTable, spec: &PotentialSpec) -> Level {
    let log_phi = table.log_values(spec);
    let log_z = log_sum_exp(&log_phi);
    let log_weights: Vec<f64> = log_phi.par_iter().map(|x| x - log_z).collect();
    let n = table.depth() as f64;
    let d = table.dim();
    let mut entropy = 0.0;
    let mut lyapunov = 0.0;
    let mut exponents = vec![0.0; d];
    for (i, (&lw, &lp)) in log_weights.iter().zip(&log_phi).enumerate() {
        let w = lw.exp();
        if w > 0.0 {
            entropy -= w * lw;
        }
        lyapunov += w * lp / n;
        for (e, x) in exponents.iter_mut().zip(table.profile(i)) {
            *e += w * x / n;
        }
    }
    Level { log_z, log_phi, log_weights, entropy, lyapunov, exponents }
}

/// Marginal of level-`n` log weights onto prefixes of length `m`.
fn marginal(log_weights: &[f64], n_maps: usize, depth: usize, m: usize) -> Vec<f64> {
    let block = n_maps.pow((depth - m) as u32);
    log_weights.par_chunks(block).map(log_sum_exp).collect()
}

pub fn gibbs_approx(t: &MatrixTuple, spec: &PotentialSpec, n: usize, budget: u64) -> Result<GibbsApprox> {
    spec.check_tuple(t)?;
    let table = LevelTable::build(t, n, budget)?;
    let cur = level(&table, spec);
    let (prev_entropy, marginal_defect, exponent_drift, previous_exponents) = if n > 1 {
        let prev = level(&LevelTable::build(t, n - 1, budget)?, spec);
        let marg = marginal(&cur.log_weights, t.len(), n, n - 1);
        let tv = 0.5
            * marg
                .iter()
                .zip(&prev.log_weights)
                .map(|(a, b)| (a.exp() - b.exp()).abs())
                .sum::<f64>();
        let drift = cur.exponents.iter().zip(&prev.exponents).map(|(a, b)| (a - b).abs()).collect();
        (prev.entropy, tv, drift, prev.exponents)
    } else {
        (0.0, 0.0, vec![f64::NAN; t.dim()], Vec::new())
    };
    let upper = cur.log_z / n as f64;
    let entropy_estimate = cur.entropy - prev_entropy;
    Ok(GibbsApprox {
        potential: spec.clone(),
        depth: n,
        upper,
        entropy_estimate,
        lyapunov_estimate: cur.lyapunov,
        pressure_defect: (entropy_estimate + cur.lyapunov - upper).abs(),
        marginal_defect,
        exponents: cur.exponents,
        exponent_drift,
        previous_exponents,
        log_weights: cur.log_weights,
    })
}

/// Empirical Gibbs constants of the level-`n_max` approximation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GibbsConstantProfile {
    /// `P̂ = ln Z_{n_max} - ln Z_{n_max - 1}`.
    pub pressure_estimate: f64,
    /// `Ĉ(m) = max_{|w|=m} |ln ν([w]) - ln Φ(w) + m P̂|` for `m = 1..=n_max`.
    pub constants: Vec<f64>,
    /// Least-squares slope of `Ĉ(m)` over the upper half of the levels.
    pub slope: f64,
}

pub fn gibbs_constant_profile(
    t: &MatrixTuple,
    spec: &PotentialSpec,
    n_max: usize,
    budget: u64,
) -> Result<GibbsConstantProfile> {
    if n_max < 2 {
        return Err(Error::input("depth", "the constant profile needs depth at least 2"));
    }
    spec.check_tuple(t)?;
    check_budget(word_count(t.len(), n_max), budget)?;
    let levels: Vec<Level> = (1..=n_max)
        .map(|m| Ok(level(&LevelTable::build(t, m, budget)?, spec)))
        .collect::<Result<_>>()?;
    let top = &levels[n_max - 1];
    let p_hat = top.log_z - levels[n_max - 2].log_z;
    let constants: Vec<f64> = (1..=n_max)
        .map(|m| {
            let marg = marginal(&top.log_weights, t.len(), n_max, m);
            marg.iter()
                .zip(&levels[m - 1].log_phi)
                .map(|(lm, lp)| (lm - lp + m as f64 * p_hat).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    let start = n_max / 2;
    let xs: Vec<f64> = (start + 1..=n_max).map(|m| m as f64).collect();
    let ys = &constants[start..];
    let xm = xs.iter().sum::<f64>() / xs.len() as f64;
    let ym = ys.iter().sum::<f64>() / ys.len() as f64;
    let sxx: f64 = xs.iter().map(|x| (x - xm).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    Ok(GibbsConstantProfile {
        pressure_estimate: p_hat,
        constants,
        slope: if sxx > 0.0 { sxy / sxx } else { 0.0 },
    })
}
