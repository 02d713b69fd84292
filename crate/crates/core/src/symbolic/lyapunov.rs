use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::measure::BernoulliMeasure;
use crate::error::{Error, Result};
use crate::linalg::GradedProduct;
use crate::tuple::MatrixTuple;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumMethod {
    ExactDiagonal,
    MonteCarlo,
    GibbsLevel,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LyapunovSpectrum {
    /// `Λ_1 ≥ … ≥ Λ_d`.
    pub exponents: Vec<f64>,
    /// Standard error per exponent (zero for exact values, NaN for one replica).
    pub stderr: Vec<f64>,
    pub method: SpectrumMethod,
}

impl LyapunovSpectrum {
    /// `Λ_1 + … + Λ_k`.
    pub fn partial_sum(&self, k: usize) -> f64 {
        self.exponents[..k].iter().sum()
    }
}

fn is_diagonal(t: &MatrixTuple) -> bool {
    t.iter().all(|a| {
        (0..a.nrows()).all(|i| (0..a.ncols()).all(|j| i == j || a[(i, j)] == 0.0))
    })
}

fn check_run(t: &MatrixTuple, mu: &BernoulliMeasure, horizon: usize, reps: usize) -> Result<()> {
    mu.check_alphabet(t.len())?;
    if horizon == 0 {
        return Err(Error::input("depth", "horizon must be at least 1"));
    }
    if reps == 0 {
        return Err(Error::input("reps", "at least one replica is required"));
    }
    Ok(())
}

/// Lyapunov spectrum of `𝖠` under the Bernoulli measure `mu`. Uses the
/// exact coordinate averages when every generator is diagonal and a
/// Monte-Carlo estimate otherwise.
pub fn lyapunov_spectrum(
    t: &MatrixTuple,
    mu: &BernoulliMeasure,
    horizon: usize,
    reps: usize,
    seed: u64,
) -> Result<LyapunovSpectrum> {
    check_run(t, mu, horizon, reps)?;
    if is_diagonal(t) {
        return lyapunov_exact_diagonal(t, mu);
    }
    lyapunov_monte_carlo(t, mu, horizon, reps, seed)
}

/// `Λ` sorted from `Σ_i p_i ln|(A_i)_{jj}|`; errors unless all generators are diagonal.
pub fn lyapunov_exact_diagonal(t: &MatrixTuple, mu: &BernoulliMeasure) -> Result<LyapunovSpectrum> {
    mu.check_alphabet(t.len())?;
    if !is_diagonal(t) {
        return Err(Error::Precondition("exact formula needs diagonal generators".into()));
    }
    let p = mu.probabilities();
    let mut exponents: Vec<f64> = (0..t.dim())
        .map(|j| {
            t.iter()
                .zip(p)
                .filter(|(_, &pi)| pi > 0.0)
                .map(|(a, &pi)| pi * a[(j, j)].abs().ln())
                .sum()
        })
        .collect();
    exponents.sort_by(|a, b| b.total_cmp(a));
    Ok(LyapunovSpectrum {
        stderr: vec![0.0; exponents.len()],
        exponents,
        method: SpectrumMethod::ExactDiagonal,
    })
}

/// Averages `(1/n) ln α_j(A_{x_n} ⋯ A_{x_1})` over `reps` i.i.d. sequences.
/// Replica `r` draws from a ChaCha8 stream seeded with `seed ^ r`.
pub fn lyapunov_monte_carlo(
    t: &MatrixTuple,
    mu: &BernoulliMeasure,
    horizon: usize,
    reps: usize,
    seed: u64,
) -> Result<LyapunovSpectrum> {
    check_run(t, mu, horizon, reps)?;
    let dist = WeightedIndex::new(mu.probabilities())
        .map_err(|e| Error::input("weights", e.to_string()))?;
    let samples: Vec<Vec<f64>> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ r as u64);
            let mut g = GradedProduct::identity(t.dim());
            for _ in 0..horizon {
                g.left_mul(t.get(dist.sample(&mut rng)));
            }
            g.log_singular_values().logsv.iter().map(|x| x / horizon as f64).collect()
        })
        .collect();
    let d = t.dim();
    let m = reps as f64;
    let exponents: Vec<f64> = (0..d).map(|j| samples.iter().map(|s| s[j]).sum::<f64>() / m).collect();
    let stderr = (0..d)
        .map(|j| {
            if reps < 2 {
                return f64::NAN;
            }
            let var = samples.iter().map(|s| (s[j] - exponents[j]).powi(2)).sum::<f64>() / (m - 1.0);
            (var / m).sqrt()
        })
        .collect();
    Ok(LyapunovSpectrum { exponents, stderr, method: SpectrumMethod::MonteCarlo })
}
