//! The singular value function, its exterior-power form, the duality
//! transform `A ↦ |det A|^{1/(d-s)} (A⁻¹)ᵀ`, and a small vocabulary of
//! submultiplicative potentials evaluated in log domain.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{exterior_power, log_abs_det, norm2, singular_values, Matrix};
use crate::tuple::MatrixTuple;
use crate::word::Word;

/// Splits `s` into `(⌊s⌋, s - ⌊s⌋)`.
pub(crate) fn split_s(s: f64) -> (usize, f64) {
    let k = s.floor();
    (k as usize, s - k)
}

/// `ln φ^s` from a decreasing profile of logs (`ln α_j`, or `ln λ_j` for
/// the spectral form). `s ≥ d` uses the `|det|^{s/d}` branch.
pub fn log_svf_from_profile(profile: &[f64], s: f64) -> f64 {
    let d = profile.len();
    if s == 0.0 {
        return 0.0;
    }
    if s >= d as f64 {
        return s / d as f64 * profile.iter().sum::<f64>();
    }
    let (k, frac) = split_s(s);
    let head: f64 = profile[..k].iter().sum();
    if frac > 0.0 {
        head + frac * profile[k]
    } else {
        head
    }
}

fn validate_s(s: f64) -> Result<()> {
    if !(s.is_finite() && s >= 0.0) {
        return Err(Error::input("s", format!("expected a finite s ≥ 0, got {s}")));
    }
    Ok(())
}

/// Singular value function `φ^s(A)`.
pub fn svf(a: &Matrix, s: f64) -> Result<f64> {
    validate_s(s)?;
    let sv = singular_values(a)?;
    let d = sv.len();
    if s >= d as f64 {
        let ld = log_abs_det(a);
        if !ld.is_finite() {
            return Err(Error::Degenerate("φ^s undefined: matrix is singular".into()));
        }
        return Ok((s / d as f64 * ld).exp());
    }
    let needed = s.ceil() as usize;
    if sv[..needed].iter().any(|&x| x == 0.0) {
        return Err(Error::Degenerate(format!(
            "φ^{s} undefined: singular value {needed} vanishes"
        )));
    }
    let logs: Vec<f64> = sv.iter().map(|x| x.ln()).collect();
    Ok(log_svf_from_profile(&logs, s).exp())
}

/// `φ^s(A) = ‖A^∧⌊s⌋‖^{1+⌊s⌋-s} ‖A^∧⌈s⌉‖^{s-⌊s⌋}`, computed from exterior
/// powers. Independent route to [`svf`] for `0 < s ≤ d`.
pub fn svf_via_exterior(a: &Matrix, s: f64) -> Result<f64> {
    let d = a.nrows();
    if !(s > 0.0 && s <= d as f64) {
        return Err(Error::input("s", format!("expected 0 < s ≤ {d}, got {s}")));
    }
    let norm_ext = |k: usize| -> Result<f64> {
        if k == 0 {
            Ok(1.0)
        } else {
            Ok(norm2(&exterior_power(a, k)?))
        }
    };
    let (k, frac) = split_s(s);
    let lo = norm_ext(k)?;
    let value = if frac > 0.0 {
        lo.powf(1.0 - frac) * norm_ext(k + 1)?.powf(frac)
    } else {
        lo
    };
    if value == 0.0 {
        return Err(Error::Degenerate(format!("φ^{s} undefined: exterior norm vanishes")));
    }
    Ok(value)
}

/// A submultiplicative potential `Φ : Σ_N^* → (0, ∞)` built from the
/// singular values of `A_w`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialSpec {
    /// `φ^s(A_w)`.
    Svf { s: f64 },
    /// `‖A_w^∧k‖^t`.
    NormPower { t: f64, k: usize },
    /// `∏ ‖A_w^∧k‖^{e}` over `(k, e)` pairs.
    WeightedProduct { factors: Vec<(usize, f64)> },
    /// Pointwise maximum of the member potentials.
    MaxOf { members: Vec<PotentialSpec> },
    /// `φ^s(A_w) · ∏_k weights[w_k]`.
    ScaledSvf { s: f64, weights: Vec<f64> },
}

impl PotentialSpec {
    pub fn svf(s: f64) -> Result<Self> {
        validate_s(s)?;
        Ok(PotentialSpec::Svf { s })
    }

    pub fn norm_power(t: f64, k: usize) -> Result<Self> {
        let p = PotentialSpec::NormPower { t, k };
        p.validate()?;
        Ok(p)
    }

    pub fn weighted_product(factors: Vec<(usize, f64)>) -> Result<Self> {
        let p = PotentialSpec::WeightedProduct { factors };
        p.validate()?;
        Ok(p)
    }

    pub fn max_of(members: Vec<PotentialSpec>) -> Result<Self> {
        let p = PotentialSpec::MaxOf { members };
        p.validate()?;
        Ok(p)
    }

    pub fn scaled_svf(s: f64, weights: Vec<f64>) -> Result<Self> {
        let p = PotentialSpec::ScaledSvf { s, weights };
        p.validate()?;
        Ok(p)
    }

    /// Checks parameter ranges independent of any tuple.
    pub fn validate(&self) -> Result<()> {
        match self {
            PotentialSpec::Svf { s } => validate_s(*s),
            PotentialSpec::NormPower { t, k } => {
                if !(t.is_finite() && *t > 0.0) {
                    return Err(Error::input("t", "exponent must be positive"));
                }
                if *k == 0 {
                    return Err(Error::input("k", "exterior degree must be at least 1"));
                }
                Ok(())
            }
            PotentialSpec::WeightedProduct { factors } => {
                if factors.is_empty() {
                    return Err(Error::input("factors", "at least one factor is required"));
                }
                for &(k, e) in factors {
                    if k == 0 {
                        return Err(Error::input("factors", "exterior degree must be at least 1"));
                    }
                    if !(e.is_finite() && e > 0.0) {
                        return Err(Error::input("factors", "exponents must be strictly positive"));
                    }
                }
                Ok(())
            }
            PotentialSpec::MaxOf { members } => {
                if members.is_empty() {
                    return Err(Error::input("members", "max-of list must be non-empty"));
                }
                members.iter().try_for_each(|m| m.validate())
            }
            PotentialSpec::ScaledSvf { s, weights } => {
                validate_s(*s)?;
                if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
                    return Err(Error::input("weights", "weights must be positive"));
                }
                Ok(())
            }
        }
    }

    /// Checks the spec against the shape of a tuple.
    pub fn check_tuple(&self, t: &MatrixTuple) -> Result<()> {
        self.validate()?;
        let d = t.dim();
        match self {
            PotentialSpec::Svf { .. } => Ok(()),
            PotentialSpec::NormPower { k, .. } => {
                if *k > d {
                    Err(Error::DimensionMismatch(format!("exterior degree {k} exceeds d = {d}")))
                } else {
                    Ok(())
                }
            }
            PotentialSpec::WeightedProduct { factors } => match factors.iter().find(|(k, _)| *k > d) {
                Some((k, _)) => Err(Error::DimensionMismatch(format!(
                    "exterior degree {k} exceeds d = {d}"
                ))),
                None => Ok(()),
            },
            PotentialSpec::MaxOf { members } => members.iter().try_for_each(|m| m.check_tuple(t)),
            PotentialSpec::ScaledSvf { weights, .. } => {
                if weights.len() != t.len() {
                    Err(Error::DimensionMismatch(format!(
                        "{} weights for {} maps",
                        weights.len(),
                        t.len()
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// `ln Φ(w)` given the decreasing log profile of `A_w`. Feeding log
    /// singular values gives the potential itself; feeding log eigenvalue
    /// moduli gives its spectral (periodic-orbit) form.
    pub fn log_from_profile(&self, profile: &[f64], w: &Word) -> f64 {
        let top = |k: usize| profile[..k].iter().sum::<f64>();
        match self {
            PotentialSpec::Svf { s } => log_svf_from_profile(profile, *s),
            PotentialSpec::NormPower { t, k } => t * top(*k),
            PotentialSpec::WeightedProduct { factors } => {
                factors.iter().map(|&(k, e)| e * top(k)).sum()
            }
            PotentialSpec::MaxOf { members } => members
                .iter()
                .map(|m| m.log_from_profile(profile, w))
                .fold(f64::NEG_INFINITY, f64::max),
            PotentialSpec::ScaledSvf { s, weights } => {
                log_svf_from_profile(profile, *s)
                    + w.symbols().iter().map(|&i| weights[i].ln()).sum::<f64>()
            }
        }
    }

    /// Whether evaluation needs the word itself and not just its profile.
    pub(crate) fn reads_symbols(&self) -> bool {
        match self {
            PotentialSpec::ScaledSvf { .. } => true,
            PotentialSpec::MaxOf { members } => members.iter().any(|m| m.reads_symbols()),
            _ => false,
        }
    }

    /// Short human-readable label, used in reports.
    pub fn label(&self) -> String {
        match self {
            PotentialSpec::Svf { s } => format!("svf(s={s})"),
            PotentialSpec::NormPower { t, k } => format!("norm_power(t={t},k={k})"),
            PotentialSpec::WeightedProduct { factors } => format!("weighted_product({factors:?})"),
            PotentialSpec::MaxOf { members } => {
                let inner: Vec<String> = members.iter().map(|m| m.label()).collect();
                format!("max_of[{}]", inner.join(","))
            }
            PotentialSpec::ScaledSvf { s, .. } => format!("scaled_svf(s={s})"),
        }
    }
}

/// `ln Φ(w)`, evaluated through the graded word product.
pub fn eval_potential(spec: &PotentialSpec, t: &MatrixTuple, w: &Word) -> Result<f64> {
    spec.check_tuple(t)?;
    let logsv = t.word_logsv(w)?.absolute();
    Ok(spec.log_from_profile(&logsv, w))
}

/// `ln` of the spectral form of `Φ` at `w`: the profile uses eigenvalue
/// moduli of `A_w`, so the result equals `lim (1/n) ln Φ(w^n)` per period.
pub fn eval_spectral_form(spec: &PotentialSpec, t: &MatrixTuple, w: &Word) -> Result<f64> {
    spec.check_tuple(t)?;
    let moduli = t.word_log_moduli(w)?;
    Ok(spec.log_from_profile(&moduli, w))
}

/// Output of [`dualize`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualityTransformResult {
    pub tuple: MatrixTuple,
    pub s_dual: f64,
}

/// `A_i' = |det A_i|^{1/(d-s)} (A_i⁻¹)ᵀ`, which satisfies
/// `φ^{d-s}(A'_w) = φ^s(A_w)` for every word.
pub fn dualize(t: &MatrixTuple, s: f64) -> Result<DualityTransformResult> {
    let d = t.dim() as f64;
    if !(s > 0.0 && s < d) {
        return Err(Error::input("s", format!("expected 0 < s < {d}, got {s}")));
    }
    let mats = t
        .iter()
        .map(|a| {
            let inv = a
                .clone()
                .try_inverse()
                .ok_or_else(|| Error::Degenerate("generator is not invertible".into()))?;
            let scale = (log_abs_det(a) / (d - s)).exp();
            Ok(inv.transpose() * scale)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DualityTransformResult {
        tuple: MatrixTuple::new(mats)?,
        s_dual: d - s,
    })
}
