use serde::Serialize;

use super::invariant::{algebra_dimension, invariant_subspaces_of, INVARIANCE_TOL};
use super::subspace::{family_residual, Subspace};
use crate::error::{Error, Result};
use crate::linalg::{exterior_power, Matrix};
use crate::tuple::MatrixTuple;
use crate::word::shortlex;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IrreducibilityVerdict {
    Yes,
    /// `witness` is a proper invariant subspace of `∧^k ℝ^d`.
    No { witness: Subspace, residual: f64 },
    Unknown { reason: String },
}

impl IrreducibilityVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, IrreducibilityVerdict::Yes)
    }

    pub fn is_no(&self) -> bool {
        matches!(self, IrreducibilityVerdict::No { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StrongIrreducibilityVerdict {
    /// No invariant finite union was found within the search bounds.
    YesHeuristic { max_parts: usize, max_len: usize },
    /// A permuted family of subspaces of `∧^k ℝ^d`.
    No { family: Vec<Subspace>, residual: f64 },
    Unknown { reason: String },
}

impl StrongIrreducibilityVerdict {
    pub fn is_no(&self) -> bool {
        matches!(self, StrongIrreducibilityVerdict::No { .. })
    }

    pub fn is_yes_heuristic(&self) -> bool {
        matches!(self, StrongIrreducibilityVerdict::YesHeuristic { .. })
    }
}

pub(crate) fn exterior_mats(t: &MatrixTuple, k: usize) -> Result<Vec<Matrix>> {
    let d = t.dim();
    if k == 0 || k > d {
        return Err(Error::input("k", format!("exterior degree {k} outside 1..={d}")));
    }
    t.iter().map(|a| exterior_power(a, k)).collect()
}

/// Irreducibility of a family of `n×n` matrices.
pub(crate) fn irreducibility_of(mats: &[Matrix]) -> Result<IrreducibilityVerdict> {
    let n = mats[0].nrows();
    if n == 1 || algebra_dimension(mats) == n * n {
        return Ok(IrreducibilityVerdict::Yes);
    }
    let mut undecided = Vec::new();
    for j in 1..n {
        let search = invariant_subspaces_of(mats, j)?;
        if let Some(v) = search.subspaces.into_iter().next() {
            let residual = v.invariance_residual(mats);
            return Ok(IrreducibilityVerdict::No { witness: v, residual });
        }
        if !search.decided {
            undecided.push(j);
        }
    }
    if undecided.is_empty() {
        Ok(IrreducibilityVerdict::Yes)
    } else {
        Ok(IrreducibilityVerdict::Unknown {
            reason: format!("decomposability undecided for subspace dimensions {undecided:?}"),
        })
    }
}

/// Is `𝖠^∧k` irreducible? `k = d` is trivially so.
pub fn irreducibility_report(t: &MatrixTuple, k: usize) -> Result<IrreducibilityVerdict> {
    irreducibility_of(&exterior_mats(t, k)?)
}

fn normalized(m: Matrix) -> Matrix {
    let s = m.amax();
    if s > 0.0 {
        m / s
    } else {
        m
    }
}

fn power(b: &Matrix, mut p: usize) -> Matrix {
    let n = b.nrows();
    let mut acc = Matrix::identity(n, n);
    let mut base = b.clone();
    while p > 0 {
        if p & 1 == 1 {
            acc = normalized(&base * &acc);
        }
        base = normalized(&base * &base);
        p >>= 1;
    }
    acc
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Orbit of `v` under the generators, if it has at most `max_parts` members.
fn finite_orbit(v: Subspace, mats: &[Matrix], max_parts: usize) -> Option<Vec<Subspace>> {
    let mut family = vec![v];
    let mut i = 0;
    while i < family.len() {
        for a in mats {
            let img = family[i].image(a);
            if Subspace::push_unique(&mut family, img) && family.len() > max_parts {
                return None;
            }
        }
        i += 1;
    }
    Some(family)
}

pub(crate) fn strong_irreducibility_of(
    mats: &[Matrix],
    max_parts: usize,
    max_len: usize,
) -> Result<StrongIrreducibilityVerdict> {
    let n = mats[0].nrows();
    if n == 1 {
        return Ok(StrongIrreducibilityVerdict::YesHeuristic { max_parts, max_len });
    }
    let irr = irreducibility_of(mats)?;
    if let IrreducibilityVerdict::No { witness, residual } = irr {
        return Ok(StrongIrreducibilityVerdict::No { family: vec![witness], residual });
    }
    // Every part of an invariant union with at most m parts is invariant
    // under A_w^p for some p ≤ m, hence under A_w^lcm(1..m).
    let lcm = (1..=max_parts).fold(1, |acc, p| acc / gcd(acc, p) * p);
    let mut powers: Vec<usize> = (1..=max_parts).collect();
    if lcm > max_parts {
        powers.push(lcm);
    }
    let mut tried: Vec<Subspace> = Vec::new();
    for w in shortlex(mats.len(), max_len) {
        let aw = w
            .symbols()
            .iter()
            .fold(Matrix::identity(n, n), |acc, &s| normalized(&mats[s] * acc));
        for &p in &powers {
            let b = power(&aw, p);
            for j in 1..n {
                for v in invariant_subspaces_of(std::slice::from_ref(&b), j)?.subspaces {
                    if !Subspace::push_unique(&mut tried, v.clone()) {
                        continue;
                    }
                    if let Some(family) = finite_orbit(v, mats, max_parts) {
                        let residual = family_residual(&family, mats);
                        if residual <= INVARIANCE_TOL {
                            return Ok(StrongIrreducibilityVerdict::No { family, residual });
                        }
                    }
                }
            }
        }
    }
    Ok(match irr {
        IrreducibilityVerdict::Unknown { reason } => StrongIrreducibilityVerdict::Unknown { reason },
        _ => StrongIrreducibilityVerdict::YesHeuristic { max_parts, max_len },
    })
}

/// Bounded search for a finite union of at most `max_parts` proper subspaces
/// of `∧^k ℝ^d` permuted by `𝖠^∧k`. Candidates are invariant subspaces of
/// powers of products of length at most `max_len`.
pub fn strong_irreducibility_heuristic(
    t: &MatrixTuple,
    k: usize,
    max_parts: usize,
    max_len: usize,
) -> Result<StrongIrreducibilityVerdict> {
    if max_parts == 0 {
        return Err(Error::input("max_parts", "must be at least 1"));
    }
    strong_irreducibility_of(&exterior_mats(t, k)?, max_parts, max_len)
}
