use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::potentials::{eval_potential, PotentialSpec};
use crate::tuple::MatrixTuple;
use crate::word::{random_words, shortlex, shortlex_count, Word};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasimultOptions {
    /// Bridges are the empty word and every word up to this length.
    pub bridge_len: usize,
    /// Pairs are enumerated exhaustively below this count and sampled above it.
    pub max_pairs: usize,
    pub seed: u64,
    /// Pairs whose best ratio falls below this are listed as violations.
    pub violation_threshold: f64,
}

impl Default for QuasimultOptions {
    fn default() -> Self {
        Self { bridge_len: 2, max_pairs: 4096, seed: 0, violation_threshold: 1e-3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasimultPair {
    pub left: Word,
    pub right: Word,
    /// Best bridge for this pair.
    pub bridge: Word,
    /// `max_k Φ(i k j) / (Φ(i) Φ(j))`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasimultReport {
    /// `min` over pairs of the best bridged ratio.
    pub delta_hat: f64,
    pub bridges: Vec<Word>,
    pub worst: QuasimultPair,
    pub violations: Vec<QuasimultPair>,
    pub pairs_checked: usize,
}

/// Empirical quasimultiplicativity constant over words up to length `n_probe`.
/// A positive value is evidence, not proof.
pub fn quasimult_diagnostic(
    t: &MatrixTuple,
    spec: &PotentialSpec,
    n_probe: usize,
    opts: &QuasimultOptions,
) -> Result<QuasimultReport> {
    spec.check_tuple(t)?;
    if n_probe == 0 {
        return Err(Error::input("max_len", "probe length must be at least 1"));
    }
    if opts.max_pairs == 0 {
        return Err(Error::input("max_pairs", "must be positive"));
    }
    let n = t.len();
    let mut bridges = vec![Word::new(Vec::new())];
    bridges.extend(shortlex(n, opts.bridge_len));

    let words_total = shortlex_count(n, n_probe);
    let pairs: Vec<(Word, Word)> = if words_total.saturating_mul(words_total) <= opts.max_pairs as u128 {
        let words: Vec<Word> = shortlex(n, n_probe).collect();
        words
            .iter()
            .flat_map(|a| words.iter().map(move |b| (a.clone(), b.clone())))
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let left = random_words(&mut rng, n, opts.max_pairs, 1, n_probe);
        let right = random_words(&mut rng, n, opts.max_pairs, 1, n_probe);
        left.into_iter().zip(right).collect()
    };

    let scored = pairs
        .par_iter()
        .map(|(i, j)| {
            let base = eval_potential(spec, t, i)? + eval_potential(spec, t, j)?;
            let mut best = (f64::NEG_INFINITY, 0);
            for (b, k) in bridges.iter().enumerate() {
                let v = eval_potential(spec, t, &i.concat(k).concat(j))? - base;
                if v > best.0 {
                    best = (v, b);
                }
            }
            Ok(QuasimultPair {
                left: i.clone(),
                right: j.clone(),
                bridge: bridges[best.1].clone(),
                ratio: best.0.exp(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut worst = 0;
    for (idx, p) in scored.iter().enumerate() {
        if p.ratio < scored[worst].ratio {
            worst = idx;
        }
    }
    let violations = scored
        .iter()
        .filter(|p| p.ratio < opts.violation_threshold)
        .take(32)
        .cloned()
        .collect();
    Ok(QuasimultReport {
        delta_hat: scored[worst].ratio,
        worst: scored[worst].clone(),
        bridges,
        violations,
        pairs_checked: scored.len(),
    })
}
