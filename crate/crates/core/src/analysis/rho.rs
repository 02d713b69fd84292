use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::log_eigen_moduli_unchecked;
use crate::potentials::log_svf_from_profile;
use crate::tuple::MatrixTuple;
use crate::word::{random_words, shortlex, shortlex_count, Word};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RhoReport {
    pub max_rel_defect: f64,
    /// `(i, j)` with the largest `|ρ(A_i A_j) − ρ(A_i)ρ(A_j)| / ρ(A_i)ρ(A_j)`.
    pub worst: Option<(Word, Word)>,
    pub pairs_checked: usize,
}

/// Samples `pairs` word pairs with lengths in `1..=max_len` and measures how
/// far the spectral radius is from multiplicative on them.
pub fn rho_multiplicativity(t: &MatrixTuple, pairs: usize, max_len: usize, seed: u64) -> Result<RhoReport> {
    if max_len == 0 {
        return Err(Error::input("max_len", "must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let left = random_words(&mut rng, t.len(), pairs, 1, max_len);
    let right = random_words(&mut rng, t.len(), pairs, 1, max_len);
    let log_rho = |w: &Word| -> Result<f64> { Ok(t.word_log_moduli(w)?[0]) };
    let defects = left
        .par_iter()
        .zip(&right)
        .map(|(i, j)| {
            // A_i A_j = A_{ji}
            let joint = log_rho(&j.concat(i))?;
            Ok((joint - log_rho(i)? - log_rho(j)?).exp_m1().abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut report = RhoReport { max_rel_defect: 0.0, worst: None, pairs_checked: pairs };
    for (k, &x) in defects.iter().enumerate() {
        if report.worst.is_none() || x > report.max_rel_defect {
            report.max_rel_defect = x;
            report.worst = Some((left[k].clone(), right[k].clone()));
        }
    }
    Ok(report)
}

/// `ln(ρ(A^∧⌊s⌋)^{1+⌊s⌋−s} ρ(A^∧⌈s⌉)^{s−⌊s⌋})` for `A = A_w`.
pub fn log_rho_form(t: &MatrixTuple, w: &Word, s: f64) -> Result<f64> {
    Ok(log_svf_from_profile(&t.word_log_moduli(w)?, s))
}

fn check_s(t: &MatrixTuple, s: f64) -> Result<()> {
    let d = t.dim();
    if !(s > 0.0 && s < d as f64) {
        return Err(Error::input("s", format!("must lie in (0, {d}), got {s}")));
    }
    Ok(())
}

/// Rescales every generator so that its weighted spectral form equals one.
pub fn fw_normalize(t: &MatrixTuple, s: f64) -> Result<MatrixTuple> {
    check_s(t, s)?;
    let mats = t
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let l = log_svf_from_profile(&log_eigen_moduli_unchecked(a)?, s);
            if !l.is_finite() {
                return Err(Error::Degenerate(format!("spectral form of matrices[{i}] vanishes")));
            }
            Ok(a * (-l / s).exp())
        })
        .collect::<Result<Vec<_>>>()?;
    MatrixTuple::new(mats)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FwReport {
    /// Largest `|ln ρ-form(A_w)|` over the words checked.
    pub max_log_deviation: f64,
    pub witness: Option<Word>,
    pub words_checked: usize,
}

/// Normalizes `t` and evaluates the weighted spectral form on words of
/// length `≤ max_len`: all of them when there are at most `samples`,
/// otherwise `samples` random ones.
pub fn fw_constancy(t: &MatrixTuple, s: f64, max_len: usize, samples: usize, seed: u64) -> Result<FwReport> {
    let t = fw_normalize(t, s)?;
    let words: Vec<Word> = if shortlex_count(t.len(), max_len) <= samples as u128 {
        shortlex(t.len(), max_len).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_words(&mut rng, t.len(), samples, 1, max_len)
    };
    let devs = words
        .par_iter()
        .map(|w| Ok(log_rho_form(&t, w, s)?.abs()))
        .collect::<Result<Vec<f64>>>()?;
    let mut report = FwReport { max_log_deviation: 0.0, witness: None, words_checked: words.len() };
    for (w, &x) in words.iter().zip(&devs) {
        if report.witness.is_none() || x > report.max_log_deviation {
            report.max_log_deviation = x;
            report.witness = Some(w.clone());
        }
    }
    Ok(report)
}
