use serde::Serialize;

use super::eigen::joint_eigenspaces;
use super::subspace::Subspace;
use crate::error::{Error, Result};
use crate::linalg::{exterior_power, index_sets, null_space, Matrix, Vector};
use crate::tuple::MatrixTuple;

/// Invariance residual accepted for a returned subspace.
pub const INVARIANCE_TOL: f64 = 1e-8;
/// Relative threshold for the kernel of the wedge map.
const WEDGE_KERNEL_TOL: f64 = 1e-8;
/// Relative threshold under which the Plücker form counts as zero.
const PLUCKER_TOL: f64 = 1e-8;

/// Matrix of `v ↦ v ∧ ω` from `ℝ^d` into `∧^{k+1} ℝ^d`, for `ω ∈ ∧^k ℝ^d`
/// in the lexicographic basis.
fn wedge_map(omega: &Vector, d: usize, k: usize) -> Matrix {
    let src = index_sets(d, k);
    let dst = index_sets(d, k + 1);
    let mut out = Matrix::zeros(dst.len(), d);
    for (c, set) in src.iter().enumerate() {
        let coef = omega[c];
        if coef == 0.0 {
            continue;
        }
        for i in 0..d {
            if set.contains(&i) {
                continue;
            }
            let below = set.iter().filter(|&&j| j < i).count();
            let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
            let mut joined = set.clone();
            joined.insert(below, i);
            let row = dst.binary_search(&joined).expect("index set present");
            out[(row, i)] += sign * coef;
        }
    }
    out
}

/// The `k`-plane represented by `ω`, when `ω` is (numerically) decomposable:
/// the kernel of `v ↦ v ∧ ω` then has dimension exactly `k`.
pub fn decompose(omega: &Vector, d: usize, k: usize) -> Option<Subspace> {
    if k == d {
        return Some(Subspace::from_orthonormal(Matrix::identity(d, d)));
    }
    let w = wedge_map(&(omega / omega.norm()), d, k);
    let kernel = null_space(&w, WEDGE_KERNEL_TOL);
    if kernel.ncols() == k {
        Some(Subspace::from_orthonormal(kernel))
    } else {
        None
    }
}

/// Symmetric form `Q` on `∧^2 ℝ^4` with `ωᵀ Q ω` the coefficient of
/// `ω ∧ ω` on `e_1∧e_2∧e_3∧e_4`.
fn plucker_form() -> Matrix {
    let mut q = Matrix::zeros(6, 6);
    for (i, j, v) in [(0, 5, 1.0), (1, 4, -1.0), (2, 3, 1.0)] {
        q[(i, j)] = v;
        q[(j, i)] = v;
    }
    q
}

/// `|ω ∧ ω|` for a unit `ω ∈ ∧^2 ℝ^4`; zero exactly on decomposable vectors.
pub fn plucker_residual(omega: &Vector) -> f64 {
    let u = omega / omega.norm();
    (u.transpose() * plucker_form() * &u)[(0, 0)].abs()
}

/// Decomposable directions in the span of the orthonormal columns of `e`
/// (`e ⊂ ∧^2 ℝ^4`). Returns the candidates and whether they are all of them.
fn plucker_candidates(e: &Matrix) -> (Vec<Vector>, bool) {
    let m = e.transpose() * plucker_form() * e;
    let eig = nalgebra::SymmetricEigen::new(m.clone());
    let scale = m.amax().max(1.0);
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut zero = Vec::new();
    for (i, &lam) in eig.eigenvalues.iter().enumerate() {
        let v = e * eig.eigenvectors.column(i);
        if lam.abs() <= PLUCKER_TOL * scale {
            zero.push(v);
        } else if lam > 0.0 {
            pos.push((lam, v));
        } else {
            neg.push((lam, v));
        }
    }
    let r = e.ncols();
    let mut out = zero.clone();
    for (lp, vp) in &pos {
        for (ln, vn) in &neg {
            let a = vp * (-ln).sqrt();
            let b = vn * lp.sqrt();
            out.push(&a + &b);
            out.push(&a - &b);
        }
    }
    let complete = zero.is_empty() && (r <= 2 || pos.is_empty() || neg.is_empty());
    (out, complete)
}

/// Common invariant `k`-dimensional subspaces of a family of square matrices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantSearch {
    pub k: usize,
    /// Every entry is verified by direct multiplication.
    pub subspaces: Vec<Subspace>,
    /// The list contains every invariant `k`-subspace.
    pub complete: bool,
    /// An empty list proves that none exists.
    pub decided: bool,
}

pub(crate) fn invariant_subspaces_of(mats: &[Matrix], k: usize) -> Result<InvariantSearch> {
    let d = mats[0].nrows();
    if k == 0 || k >= d {
        return Err(Error::input("k", format!("subspace dimension {k} outside 1..={}", d - 1)));
    }
    let ext: Vec<Matrix> = if k == 1 {
        mats.to_vec()
    } else {
        mats.iter().map(|a| exterior_power(a, k)).collect::<Result<_>>()?
    };
    let mut subspaces = Vec::new();
    let mut complete = true;
    let mut undecided = false;
    for e in joint_eigenspaces(&ext)? {
        let (candidates, exhaustive, decidable): (Vec<Vector>, bool, bool) = if e.ncols() == 1 {
            (vec![e.column(0).clone_owned()], true, true)
        } else if k == 1 || k == d - 1 {
            (e.column_iter().map(|c| c.clone_owned()).collect(), false, true)
        } else if d == 4 && k == 2 {
            let (c, ex) = plucker_candidates(&e);
            (c, ex, true)
        } else {
            (e.column_iter().map(|c| c.clone_owned()).collect(), false, false)
        };
        complete &= exhaustive;
        let before = subspaces.len();
        for omega in candidates {
            if omega.norm() == 0.0 {
                continue;
            }
            if let Some(v) = decompose(&omega, d, k) {
                if v.invariance_residual(mats) <= INVARIANCE_TOL {
                    Subspace::push_unique(&mut subspaces, v);
                }
            }
        }
        if !decidable && subspaces.len() == before {
            undecided = true;
        }
    }
    Ok(InvariantSearch {
        k,
        decided: !undecided || !subspaces.is_empty(),
        complete: complete && !undecided,
        subspaces,
    })
}

/// Common invariant `k`-dimensional subspaces of `𝖠`, found as decomposable
/// common eigenvectors of `𝖠^∧k`.
pub fn invariant_subspaces(t: &MatrixTuple, k: usize) -> Result<InvariantSearch> {
    invariant_subspaces_of(t.matrices(), k)
}

/// Dimension of the unital algebra generated by a family of `n×n` matrices.
/// It equals `n²` exactly when the family is absolutely irreducible.
pub fn algebra_dimension(mats: &[Matrix]) -> usize {
    let n = mats[0].nrows();
    let full = n * n;
    let flat = |m: &Matrix| Vector::from_column_slice(m.as_slice());
    let mut basis: Vec<Vector> = vec![flat(&Matrix::identity(n, n)) / (n as f64).sqrt()];
    let mut frontier = vec![Matrix::identity(n, n)];
    while !frontier.is_empty() && basis.len() < full {
        let mut next = Vec::new();
        for x in &frontier {
            for a in mats {
                let y = a * x;
                let mut v = flat(&y);
                let n0 = v.norm();
                if n0 == 0.0 {
                    continue;
                }
                v /= n0;
                for _ in 0..2 {
                    for b in &basis {
                        let p = b.dot(&v);
                        v.axpy(-p, b, 1.0);
                    }
                }
                let r = v.norm();
                if r > 1e-9 {
                    basis.push(v / r);
                    next.push(y / n0);
                    if basis.len() == full {
                        return full;
                    }
                }
            }
        }
        frontier = next;
    }
    basis.len()
}
