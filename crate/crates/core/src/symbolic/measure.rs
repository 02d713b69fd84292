use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `Σ p_i = 1`.
pub const PROBABILITY_SUM_TOL: f64 = 1e-12;

/// Bernoulli (i.i.d.) measure on `Σ_N` with marginal `p`.
///
/// Zero entries are allowed so that degenerate measures concentrated on a
/// sub-alphabet can be expressed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BernoulliMeasure {
    p: Vec<f64>,
}

impl BernoulliMeasure {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::input("weights", "probability vector is empty"));
        }
        if let Some(i) = p.iter().position(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::input(
                format!("weights[{i}]"),
                format!("expected a probability, got {}", p[i]),
            ));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_SUM_TOL {
            return Err(Error::input("weights", format!("entries sum to {total}, not 1")));
        }
        Ok(Self { p })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("weights", "alphabet is empty"));
        }
        Ok(Self { p: vec![1.0 / n as f64; n] })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// Kolmogorov–Sinai entropy `-Σ p_i ln p_i`, with `0 ln 0 = 0`.
    pub fn entropy(&self) -> f64 {
        -self.p.iter().filter(|&&x| x > 0.0).map(|x| x * x.ln()).sum::<f64>()
    }

    pub(crate) fn check_alphabet(&self, n: usize) -> Result<()> {
        if self.p.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "measure has {} weights for {n} maps",
                self.p.len()
            )));
        }
        Ok(())
    }
}
