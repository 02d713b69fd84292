use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite word over the alphabet `{0, …, N-1}`.
///
/// Symbols are stored zero-based; `Display` and serialisation use the
/// one-based numbering `1..=N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(symbols: Vec<usize>) -> Self {
        Word(symbols)
    }

    /// Validated constructor: non-empty, every symbol below `n`.
    pub fn try_new(symbols: Vec<usize>, n: usize) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::input("word", "word must be non-empty"));
        }
        if let Some(&s) = symbols.iter().find(|&&s| s >= n) {
            return Err(Error::input("word", format!("symbol {} out of range 1..={n}", s + 1)));
        }
        Ok(Word(symbols))
    }

    /// From one-based symbols.
    pub fn from_one_based(symbols: &[usize], n: usize) -> Result<Self> {
        if symbols.contains(&0) {
            return Err(Error::input("word", "symbols are numbered from 1"));
        }
        Self::try_new(symbols.iter().map(|s| s - 1).collect(), n)
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `self` repeated `times` times.
    pub fn power(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    /// Prefix of length `n`.
    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    /// Word with lexicographic index `index` among the `n^len` words of length `len`.
    pub fn from_index(mut index: usize, n: usize, len: usize) -> Word {
        let mut v = vec![0; len];
        for slot in v.iter_mut().rev() {
            *slot = index % n;
            index /= n;
        }
        Word(v)
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|s| s + 1).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| (s + 1).to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

/// Words of every length in `1..=max_len`, shortest first, lexicographic
/// within a length.
pub fn shortlex(n: usize, max_len: usize) -> impl Iterator<Item = Word> {
    (1..=max_len).flat_map(move |len| {
        let count = n.checked_pow(len as u32).unwrap_or(usize::MAX);
        (0..count).map(move |i| Word::from_index(i, n, len))
    })
}

/// `count` words with lengths uniform in `min_len..=max_len` and i.i.d.
/// uniform symbols.
pub fn random_words<R: rand::Rng>(rng: &mut R, n: usize, count: usize, min_len: usize, max_len: usize) -> Vec<Word> {
    (0..count)
        .map(|_| {
            let len = rng.random_range(min_len..=max_len);
            Word((0..len).map(|_| rng.random_range(0..n)).collect())
        })
        .collect()
}

/// `Σ_{l=1}^{max_len} n^l`, saturating.
pub fn shortlex_count(n: usize, max_len: usize) -> u128 {
    (1..=max_len as u32).map(|l| (n as u128).saturating_pow(l)).fold(0u128, |a, b| a.saturating_add(b))
}
