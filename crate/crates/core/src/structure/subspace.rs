use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{norm2, orthonormalize, rows_of, Matrix};

/// Relative tolerance for dropping dependent columns when orthonormalising.
const RANK_TOL: f64 = 1e-10;

/// Projector distance below which two subspaces are identified.
pub const SAME_SUBSPACE: f64 = 1e-6;

/// A linear subspace of `ℝ^n`, held as an orthonormal basis (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    /// Span of the columns of `m`.
    pub fn new(m: &Matrix) -> Result<Self> {
        let basis = orthonormalize(m, RANK_TOL);
        if basis.ncols() == 0 {
            return Err(Error::input("basis", "spanning set is zero"));
        }
        Ok(Self { basis })
    }

    pub(crate) fn from_orthonormal(basis: Matrix) -> Self {
        Self { basis }
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Orthogonal projector `Π Πᵀ`.
    pub fn projector(&self) -> Matrix {
        &self.basis * self.basis.transpose()
    }

    /// Frobenius distance between projectors; infinite across dimensions.
    pub fn distance(&self, other: &Subspace) -> f64 {
        if self.dim() != other.dim() || self.ambient_dim() != other.ambient_dim() {
            return f64::INFINITY;
        }
        (self.projector() - other.projector()).norm()
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.distance(other) <= SAME_SUBSPACE
    }

    /// `A V`, for invertible `A`.
    pub fn image(&self, a: &Matrix) -> Subspace {
        Subspace { basis: orthonormalize(&(a * &self.basis), RANK_TOL) }
    }

    /// `‖(I - Π_W Π_Wᵀ) A Π_V‖ / ‖A‖`: how far `A V` sticks out of `W`.
    pub fn mapping_residual(&self, a: &Matrix, target: &Subspace) -> f64 {
        let img = a * &self.basis;
        let out = &img - &target.basis * (target.basis.transpose() * &img);
        let scale = norm2(a);
        if scale == 0.0 {
            0.0
        } else {
            norm2(&out) / scale
        }
    }

    /// `max_i ‖(I - ΠΠᵀ) A_i Π‖ / ‖A_i‖`.
    pub fn invariance_residual(&self, mats: &[Matrix]) -> f64 {
        mats.iter().map(|a| self.mapping_residual(a, self)).fold(0.0, f64::max)
    }

    pub(crate) fn push_unique(list: &mut Vec<Subspace>, v: Subspace) -> bool {
        if list.iter().any(|u| u.same_as(&v)) {
            false
        } else {
            list.push(v);
            true
        }
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Subspace", 2)?;
        st.serialize_field("dim", &self.dim())?;
        st.serialize_field("basis", &rows_of(&self.basis))?;
        st.end()
    }
}

/// Largest residual of a finite family under the generators: each image
/// `A_i V_a` is compared against its best-matching part.
pub fn family_residual(family: &[Subspace], mats: &[Matrix]) -> f64 {
    let mut worst: f64 = 0.0;
    for a in mats {
        for v in family {
            let best = family
                .iter()
                .filter(|w| w.dim() == v.dim())
                .map(|w| v.mapping_residual(a, w))
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(best);
        }
    }
    worst
}
