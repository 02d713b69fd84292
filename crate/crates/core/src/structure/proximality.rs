use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::log_eigen_moduli_unchecked;
use crate::tuple::MatrixTuple;
use crate::word::{random_words, Word};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProximalityOptions {
    pub max_len: usize,
    /// A word qualifies when `λ_k / λ_{k+1} > 1 + rel_tol`.
    pub rel_tol: f64,
    /// Random words of length `max_len + 1 ..= 2 max_len` tried after the exhaustive pass.
    pub samples: usize,
    pub seed: u64,
}

impl Default for ProximalityOptions {
    fn default() -> Self {
        Self { max_len: 6, rel_tol: 1e-6, samples: 0, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ProximalityVerdict {
    Yes { witness: Word, ratio: f64 },
    /// No qualifying word up to this length; not a proof of non-proximality.
    NoUpTo { max_len: usize },
}

impl ProximalityVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, ProximalityVerdict::Yes { .. })
    }
}

/// `λ_k(A_w) / λ_{k+1}(A_w)`.
pub fn modulus_ratio(t: &MatrixTuple, w: &Word, k: usize) -> Result<f64> {
    let (m, _) = t.word_scaled(w)?;
    let l = log_eigen_moduli_unchecked(&m)?;
    Ok((l[k - 1] - l[k]).exp())
}

fn first_qualifying(t: &MatrixTuple, words: &[Word], k: usize, rel_tol: f64) -> Result<Option<(Word, f64)>> {
    let ratios = words
        .par_iter()
        .map(|w| modulus_ratio(t, w, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(ratios
        .into_iter()
        .zip(words)
        .find(|(r, _)| *r > 1.0 + rel_tol)
        .map(|(r, w)| (w.clone(), r)))
}

/// Searches words in shortlex order for a product whose `k`-th and
/// `(k+1)`-st eigenvalue moduli differ; returns the first one found.
pub fn proximality(t: &MatrixTuple, k: usize, opts: &ProximalityOptions) -> Result<ProximalityVerdict> {
    let d = t.dim();
    if k == 0 || k >= d {
        return Err(Error::input("k", format!("proximality index {k} outside 1..={}", d.saturating_sub(1))));
    }
    for len in 1..=opts.max_len {
        let count = t.len().pow(len as u32);
        let words: Vec<Word> = (0..count).map(|i| Word::from_index(i, t.len(), len)).collect();
        if let Some((witness, ratio)) = first_qualifying(t, &words, k, opts.rel_tol)? {
            return Ok(ProximalityVerdict::Yes { witness, ratio });
        }
    }
    if opts.samples > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let words = random_words(&mut rng, t.len(), opts.samples, opts.max_len + 1, 2 * opts.max_len.max(1));
        if let Some((witness, ratio)) = first_qualifying(t, &words, k, opts.rel_tol)? {
            return Ok(ProximalityVerdict::Yes { witness, ratio });
        }
    }
    Ok(ProximalityVerdict::NoUpTo { max_len: opts.max_len })
}
