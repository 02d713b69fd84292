//! Exhaustive enumeration of all words of a fixed length.
//!
//! Words are laid out in lexicographic order (first symbol most
//! significant), so the words sharing a prefix form a contiguous block.
//! Products are built by a depth-first walk that extends each prefix by one
//! left multiplication, and every block is filled independently, which
//! keeps the table identical for any number of threads.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::GradedProduct;
use crate::potentials::PotentialSpec;
use crate::tuple::MatrixTuple;
use crate::word::Word;

/// Default cap on the number of words enumerated at one level.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// Words per reduction chunk.
const CHUNK_WORDS: usize = 4096;

/// Streaming `ln Σ exp(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSumExp {
    max: f64,
    sum: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self { max: f64::NEG_INFINITY, sum: 0.0 }
    }
}

impl LogSumExp {
    pub fn push(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x <= self.max {
            self.sum += (x - self.max).exp();
        } else {
            self.sum = self.sum * (self.max - x).exp() + 1.0;
            self.max = x;
        }
    }

    pub fn merge(&mut self, other: LogSumExp) {
        if other.max == f64::NEG_INFINITY {
            return;
        }
        if other.max <= self.max {
            self.sum += other.sum * (other.max - self.max).exp();
        } else {
            self.sum = self.sum * (self.max - other.max).exp() + other.sum;
            self.max = other.max;
        }
    }

    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.sum.ln()
        }
    }
}

/// `ln Σ exp(x)` over a slice, reduced chunk by chunk in index order.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let parts: Vec<LogSumExp> = values
        .par_chunks(CHUNK_WORDS)
        .map(|c| {
            let mut acc = LogSumExp::default();
            c.iter().for_each(|&x| acc.push(x));
            acc
        })
        .collect();
    let mut total = LogSumExp::default();
    parts.into_iter().for_each(|p| total.merge(p));
    total.value()
}

/// `N^n`, saturating.
pub fn word_count(n_maps: usize, depth: usize) -> u128 {
    (n_maps as u128).saturating_pow(depth as u32)
}

pub(crate) fn check_budget(needed: u128, budget: u64) -> Result<()> {
    if needed > budget as u128 {
        return Err(Error::Budget { needed, budget });
    }
    Ok(())
}

/// Log singular values of `A_w` for every word `w` of one length.
#[derive(Debug, Clone)]
pub struct LevelTable {
    n_maps: usize,
    depth: usize,
    dim: usize,
    logsv: Vec<f64>,
}

fn fill(t: &MatrixTuple, g: &GradedProduct, remaining: usize, out: &mut [f64]) {
    if remaining == 0 {
        out.copy_from_slice(&g.log_singular_values().logsv);
        return;
    }
    let step = out.len() / t.len();
    for (s, chunk) in out.chunks_mut(step).enumerate() {
        let mut next = g.clone();
        next.left_mul(t.get(s));
        fill(t, &next, remaining - 1, chunk);
    }
}

impl LevelTable {
    pub fn build(t: &MatrixTuple, depth: usize, budget: u64) -> Result<Self> {
        if depth == 0 {
            return Err(Error::input("depth", "depth must be at least 1"));
        }
        check_budget(word_count(t.len(), depth), budget)?;
        let n = t.len();
        let d = t.dim();
        let total = n.pow(depth as u32);
        let mut prefix_len = 0;
        while prefix_len < depth && n.pow(prefix_len as u32) < 256 {
            prefix_len += 1;
        }
        let blocks = n.pow(prefix_len as u32);
        let per_block = total / blocks * d;
        let mut logsv = vec![0.0; total * d];
        logsv.par_chunks_mut(per_block).enumerate().for_each(|(b, out)| {
            let mut g = GradedProduct::identity(d);
            for &s in Word::from_index(b, n, prefix_len).symbols() {
                g.left_mul(t.get(s));
            }
            fill(t, &g, depth - prefix_len, out);
        });
        Ok(Self { n_maps: n, depth, dim: d, logsv })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_maps(&self) -> usize {
        self.n_maps
    }

    /// Number of words.
    pub fn len(&self) -> usize {
        self.logsv.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.logsv.is_empty()
    }

    pub fn word(&self, index: usize) -> Word {
        Word::from_index(index, self.n_maps, self.depth)
    }

    /// `ln α_1 ≥ … ≥ ln α_d` for the word with lexicographic index `index`.
    pub fn profile(&self, index: usize) -> &[f64] {
        &self.logsv[index * self.dim..(index + 1) * self.dim]
    }

    /// `ln Φ(w)` for every word, in index order.
    pub fn log_values(&self, spec: &PotentialSpec) -> Vec<f64> {
        let needs_word = spec.reads_symbols();
        let empty = Word::new(Vec::new());
        (0..self.len())
            .into_par_iter()
            .map(|i| {
                if needs_word {
                    spec.log_from_profile(self.profile(i), &self.word(i))
                } else {
                    spec.log_from_profile(self.profile(i), &empty)
                }
            })
            .collect()
    }

    /// `ln Σ_{|w|=n} Φ(w)`.
    pub fn log_partition(&self, spec: &PotentialSpec) -> f64 {
        log_sum_exp(&self.log_values(spec))
    }

    /// `ln Σ_{|w|=n} Ψ(w)`, where `Ψ` evaluates the potential on the
    /// reversed profile (`ln α_d ≤ … ≤ ln α_1`). Each such `Ψ` is
    /// supermultiplicative and bounded above by `Φ`, so `(1/n)` times this
    /// is a lower bound for `P(Φ)` at every depth. A maximum of potentials
    /// is bounded by its best member.
    pub fn log_co_partition(&self, spec: &PotentialSpec) -> f64 {
        if let PotentialSpec::MaxOf { members } = spec {
            return members
                .iter()
                .map(|m| self.log_co_partition(m))
                .fold(f64::NEG_INFINITY, f64::max);
        }
        let reads_word = spec.reads_symbols();
        let empty = Word::new(Vec::new());
        let vals: Vec<f64> = (0..self.len())
            .into_par_iter()
            .map(|i| {
                let rev: Vec<f64> = self.profile(i).iter().rev().copied().collect();
                if reads_word {
                    spec.log_from_profile(&rev, &self.word(i))
                } else {
                    spec.log_from_profile(&rev, &empty)
                }
            })
            .collect();
        log_sum_exp(&vals)
    }
}
