use serde::Serialize;

use super::eigen::joint_eigenspaces;
use super::invariant::INVARIANCE_TOL;
use super::subspace::Subspace;
use crate::error::{Error, Result};
use crate::linalg::{norm2, orthogonal_complement, serialize_matrix, Matrix};
use crate::tuple::MatrixTuple;

/// Largest scaled subdiagonal entry accepted in a triangular form.
pub const TRIANGULAR_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TriangularVerdict {
    /// Every `Xᵀ A_i X` is upper triangular; `X` is orthogonal.
    Yes {
        #[serde(serialize_with = "serialize_matrix")]
        basis: Matrix,
        residual: f64,
    },
    No,
    Unknown { reason: String },
}

impl TriangularVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, TriangularVerdict::Yes { .. })
    }
}

/// `max_i max_{r>c} |(Xᵀ A_i X)_{rc}| / max(1, ‖A_i‖)`.
pub fn subdiagonal_residual(mats: &[Matrix], x: &Matrix) -> f64 {
    let inv = x.clone().try_inverse().unwrap_or_else(|| x.transpose());
    mats.iter()
        .map(|a| {
            let t = &inv * a * x;
            let n = t.nrows();
            let worst = (0..n)
                .flat_map(|r| (0..r).map(move |c| (r, c)))
                .map(|(r, c)| t[(r, c)].abs())
                .fold(0.0, f64::max);
            worst / norm2(a).max(1.0)
        })
        .fold(0.0, f64::max)
}

pub(crate) fn triangularize(mats: &[Matrix]) -> Result<TriangularVerdict> {
    let d = mats[0].nrows();
    let mut u = Matrix::identity(d, d);
    for j in 0..d.saturating_sub(1) {
        let rest = u.columns(j, d - j).into_owned();
        let quotient: Vec<Matrix> = mats.iter().map(|a| rest.transpose() * a * &rest).collect();
        let spaces = joint_eigenspaces(&quotient)?;
        let Some(first) = spaces.first() else {
            return Ok(TriangularVerdict::No);
        };
        let v = &rest * first.column(0);
        let mut flag = u.columns(0, j).into_owned().insert_column(j, 0.0);
        flag.set_column(j, &v);
        let comp = orthogonal_complement(&flag);
        let mut next = Matrix::zeros(d, d);
        next.columns_mut(0, j + 1).copy_from(&flag);
        next.columns_mut(j + 1, d - j - 1).copy_from(&comp);
        u = next;
    }
    let residual = subdiagonal_residual(mats, &u);
    if residual <= TRIANGULAR_TOL {
        Ok(TriangularVerdict::Yes { basis: u, residual })
    } else {
        Ok(TriangularVerdict::Unknown {
            reason: format!("flag found but triangular residual is {residual:e}"),
        })
    }
}

/// Simultaneous upper-triangularisation over `ℝ` by a greedy flag of common
/// eigenvectors on successive quotients.
pub fn triangularizability(t: &MatrixTuple) -> Result<TriangularVerdict> {
    triangularize(t.matrices())
}

/// A tuple rewritten in a basis adapted to an invariant subspace, with the
/// coupling block removed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockReduction {
    pub tuple: MatrixTuple,
    /// Orthogonal change of basis; its first `split` columns span the subspace.
    #[serde(serialize_with = "serialize_matrix")]
    pub basis: Matrix,
    pub split: usize,
}

/// Replaces each `A_i` by `diag(B_i, D_i)`, where `[[B_i, C_i], [0, D_i]]`
/// is `A_i` in an orthonormal basis starting with one of `V`.
pub fn block_reduce(t: &MatrixTuple, v: &Subspace) -> Result<BlockReduction> {
    let d = t.dim();
    if v.ambient_dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "subspace lives in dimension {}, tuple in {d}",
            v.ambient_dim()
        )));
    }
    let residual = v.invariance_residual(t.matrices());
    if residual > INVARIANCE_TOL {
        return Err(Error::Precondition(format!(
            "subspace is not invariant (residual {residual:e})"
        )));
    }
    let m = v.dim();
    let mut q = Matrix::zeros(d, d);
    q.columns_mut(0, m).copy_from(v.basis());
    if m < d {
        q.columns_mut(m, d - m).copy_from(&orthogonal_complement(v.basis()));
    }
    let tuple = t.map(|a| {
        let mut b = q.transpose() * a * &q;
        b.view_mut((0, m), (m, d - m)).fill(0.0);
        b.view_mut((m, 0), (d - m, m)).fill(0.0);
        b
    })?;
    Ok(BlockReduction { tuple, basis: q, split: m })
}
