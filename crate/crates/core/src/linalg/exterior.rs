use itertools::Itertools;

use super::{det, Matrix};
use crate::error::{Error, Result};

/// `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All `k`-subsets of `0..d` in lexicographic order. This fixes the basis
/// `e_{i_1} ∧ ⋯ ∧ e_{i_k}` (with `i_1 < ⋯ < i_k`) of the exterior power.
pub fn index_sets(d: usize, k: usize) -> Vec<Vec<usize>> {
    (0..d).combinations(k).collect()
}

/// Matrix of `A^∧k` in the lexicographic basis of `∧^k ℝ^d`; entry `(I, J)`
/// is the minor `det A[I, J]`.
pub fn exterior_power(a: &Matrix, k: usize) -> Result<Matrix> {
    let d = a.nrows();
    if !a.is_square() {
        return Err(Error::input("matrix", "exterior power needs a square matrix"));
    }
    if k == 0 || k > d {
        return Err(Error::input("k", format!("exterior degree {k} outside 1..={d}")));
    }
    if k == 1 {
        return Ok(a.clone());
    }
    let sets = index_sets(d, k);
    let m = sets.len();
    let mut out = Matrix::zeros(m, m);
    let mut minor = Matrix::zeros(k, k);
    for (r, rows) in sets.iter().enumerate() {
        for (c, cols) in sets.iter().enumerate() {
            for (i, &ri) in rows.iter().enumerate() {
                for (j, &cj) in cols.iter().enumerate() {
                    minor[(i, j)] = a[(ri, cj)];
                }
            }
            out[(r, c)] = det(&minor);
        }
    }
    Ok(out)
}
