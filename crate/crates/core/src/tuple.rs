use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{
    check_finite, exterior_power, row_scaled_abs_det, GradedProduct, LogSv, Matrix,
};
use crate::word::Word;

/// Matrices whose row-scaled determinant falls below this are rejected as
/// singular.
pub const DET_FLOOR: f64 = 1e-300;

/// A tuple `(A_1, …, A_N)` of invertible `d×d` real matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixTuple {
    dim: usize,
    mats: Vec<Matrix>,
}

impl MatrixTuple {
    pub fn new(mats: Vec<Matrix>) -> Result<Self> {
        let first = mats
            .first()
            .ok_or_else(|| Error::input("matrices", "at least one matrix is required"))?;
        let d = first.nrows();
        if d == 0 {
            return Err(Error::input("d", "dimension must be at least 1"));
        }
        for (i, m) in mats.iter().enumerate() {
            let field = format!("matrices[{i}]");
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::input(
                    field,
                    format!("expected {d}x{d}, got {}x{}", m.nrows(), m.ncols()),
                ));
            }
            check_finite(m, &field)?;
            if row_scaled_abs_det(m) < DET_FLOOR {
                return Err(Error::input(field, "matrix is not invertible"));
            }
        }
        Ok(Self { dim: d, mats })
    }

    /// Builds a tuple from row-major entries.
    pub fn from_rows(d: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let mats = rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                if r.len() != d * d {
                    Err(Error::input(
                        format!("matrices[{i}]"),
                        format!("expected {} entries, got {}", d * d, r.len()),
                    ))
                } else {
                    Ok(Matrix::from_row_slice(d, d, r))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(mats)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of maps `N`.
    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn get(&self, i: usize) -> &Matrix {
        &self.mats[i]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.mats
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Matrix> {
        self.mats.iter()
    }

    /// `(A_1^∧k, …, A_N^∧k)`.
    pub fn exterior(&self, k: usize) -> Result<MatrixTuple> {
        let mats = self
            .mats
            .iter()
            .map(|a| exterior_power(a, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixTuple { dim: mats[0].nrows(), mats })
    }

    /// `(X A_1 X⁻¹, …, X A_N X⁻¹)`.
    pub fn conjugate(&self, x: &Matrix) -> Result<MatrixTuple> {
        let inv = x
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::input("x", "conjugating matrix is singular"))?;
        MatrixTuple::new(self.mats.iter().map(|a| x * a * &inv).collect())
    }

    /// Applies `f` to each generator.
    pub fn map(&self, f: impl Fn(&Matrix) -> Matrix) -> Result<MatrixTuple> {
        MatrixTuple::new(self.mats.iter().map(f).collect())
    }

    pub(crate) fn check_word(&self, w: &Word) -> Result<()> {
        if w.is_empty() {
            return Err(Error::input("word", "word must be non-empty"));
        }
        if let Some(&s) = w.symbols().iter().find(|&&s| s >= self.len()) {
            return Err(Error::input(
                "word",
                format!("symbol {} out of range 1..={}", s + 1, self.len()),
            ));
        }
        Ok(())
    }

    /// The product `A_w = A_{w_n} ⋯ A_{w_1}`, materialised. Only suitable
    /// for short words; see [`MatrixTuple::word_logsv`] for long ones.
    pub fn word_matrix(&self, w: &Word) -> Result<Matrix> {
        self.check_word(w)?;
        Ok(w.symbols()
            .iter()
            .fold(Matrix::identity(self.dim, self.dim), |acc, &s| &self.mats[s] * acc))
    }

    /// Graded accumulation of `A_w`.
    pub fn word_graded(&self, w: &Word) -> Result<GradedProduct> {
        self.check_word(w)?;
        let mut g = GradedProduct::identity(self.dim);
        for &s in w.symbols() {
            g.left_mul(&self.mats[s]);
        }
        Ok(g)
    }

    /// Log singular values of `A_w = A_{w_n} ⋯ A_{w_1}` without forming the
    /// product.
    pub fn word_logsv(&self, w: &Word) -> Result<LogSv> {
        Ok(self.word_graded(w)?.log_singular_values())
    }

    /// `A_w` scaled by a positive constant, with `ln` of that constant.
    pub fn word_scaled(&self, w: &Word) -> Result<(Matrix, f64)> {
        self.check_word(w)?;
        Ok(crate::linalg::scaled_product(
            self.dim,
            w.symbols().iter().map(|&s| &self.mats[s]),
        ))
    }

    /// `ln λ_j(A_w)` (eigenvalue moduli), decreasing.
    pub fn word_log_moduli(&self, w: &Word) -> Result<Vec<f64>> {
        let (m, ls) = self.word_scaled(w)?;
        Ok(crate::linalg::log_eigen_moduli_unchecked(&m)?
            .into_iter()
            .map(|x| x + ls)
            .collect())
    }
}

impl Serialize for MatrixTuple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MatrixTuple", 2)?;
        st.serialize_field("d", &self.dim)?;
        let mats: Vec<Vec<Vec<f64>>> = self.mats.iter().map(crate::linalg::rows_of).collect();
        st.serialize_field("matrices", &mats)?;
        st.end()
    }
}

/// Log singular values of `A_w`.
pub fn word_product_logsv(t: &MatrixTuple, w: &Word) -> Result<LogSv> {
    t.word_logsv(w)
}
