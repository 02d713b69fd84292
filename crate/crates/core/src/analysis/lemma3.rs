use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::potentials::{log_svf_from_profile, split_s};
use crate::tuple::MatrixTuple;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma3Report {
    pub max_residual: f64,
    pub worst_word: Option<Word>,
    /// How often each of the three potentials attained the maximum.
    pub dominant_counts: [usize; 3],
    pub words_checked: usize,
}

/// The three candidate log potentials at `w`, and `ln φ^s` of the block
/// diagonal product computed on the full matrices.
pub fn lemma3_terms(b: &[f64], c: &MatrixTuple, s: f64, w: &Word) -> Result<([f64; 3], f64)> {
    let full = block_tuple(b, c)?;
    terms(b, c, &full, s, w)
}

fn block_tuple(b: &[f64], c: &MatrixTuple) -> Result<MatrixTuple> {
    if b.len() != c.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} scalars for {} matrices",
            b.len(),
            c.len()
        )));
    }
    let m = c.dim();
    let mats = b
        .iter()
        .zip(c.iter())
        .map(|(&bi, ci)| {
            let mut a = Matrix::zeros(m + 1, m + 1);
            a[(0, 0)] = bi;
            a.view_mut((1, 1), (m, m)).copy_from(ci);
            a
        })
        .collect();
    MatrixTuple::new(mats)
}

fn terms(b: &[f64], c: &MatrixTuple, full: &MatrixTuple, s: f64, w: &Word) -> Result<([f64; 3], f64)> {
    let (fl, frac) = split_s(s);
    let log_b: f64 = w.symbols().iter().map(|&i| b[i].abs().ln()).sum();
    let prof = c.word_logsv(w)?.absolute();
    let phi1 = log_svf_from_profile(&prof, s);
    let phi2 = log_b + log_svf_from_profile(&prof, s - 1.0);
    let phi3 = frac * log_b + prof[..fl].iter().sum::<f64>();
    let target = log_svf_from_profile(&full.word_logsv(w)?.absolute(), s);
    Ok(([phi1, phi2, phi3], target))
}

/// Max-of-three identity for block-diagonal products `diag(b_w, C_w)`:
/// `φ^s(diag(b_w, C_w)) = max(φ^s(C_w), |b_w| φ^{s−1}(C_w), |b_w|^{s−⌊s⌋} ‖C_w^∧⌊s⌋‖)`.
/// Returns the largest absolute log-residual over `words`.
pub fn lemma3_identity(b: &[f64], c: &MatrixTuple, s: f64, words: &[Word]) -> Result<Lemma3Report> {
    let d = c.dim() + 1;
    if !(s > 1.0 && s < (d - 1) as f64) {
        return Err(Error::input("s", format!("must lie in (1, {}), got {s}", d - 1)));
    }
    if let Some(i) = b.iter().position(|x| !x.is_finite() || *x == 0.0) {
        return Err(Error::input(format!("b[{i}]"), "must be finite and non-zero"));
    }
    let full = block_tuple(b, c)?;
    let mut report = Lemma3Report {
        max_residual: 0.0,
        worst_word: None,
        dominant_counts: [0; 3],
        words_checked: 0,
    };
    for w in words {
        let (phis, target) = terms(b, c, &full, s, w)?;
        let (arg, best) = phis
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &x)| if x > acc.1 { (i, x) } else { acc });
        report.dominant_counts[arg] += 1;
        let r = (best - target).abs();
        if r > report.max_residual || report.worst_word.is_none() {
            report.max_residual = report.max_residual.max(r);
            report.worst_word = Some(w.clone());
        }
        report.words_checked += 1;
    }
    Ok(report)
}
