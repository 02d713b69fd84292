//! Dense linear-algebra primitives: singular values, eigenvalue moduli,
//! exterior powers and a graded accumulator for long matrix products.
//!
//! Singular values and Schur forms come from `nalgebra`; everything that has
//! to survive extreme dynamic range (products of thousands of contractions)
//! goes through [`GradedProduct`], which never materialises the product.

mod exterior;
mod graded;

pub use exterior::{binomial, exterior_power, index_sets};
pub use graded::{GradedProduct, LogSv};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

pub(crate) fn check_finite(a: &Matrix, field: &str) -> Result<()> {
    if a.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::input(field, "matrix has non-finite entries"))
    }
}

fn check_square(a: &Matrix, field: &str) -> Result<()> {
    if a.is_square() && a.nrows() > 0 {
        Ok(())
    } else {
        Err(Error::input(
            field,
            format!("expected a non-empty square matrix, got {}x{}", a.nrows(), a.ncols()),
        ))
    }
}

/// Row-major nested representation, as used in JSON reports.
pub fn rows_of(a: &Matrix) -> Vec<Vec<f64>> {
    a.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// Singular values `α_1 ≥ … ≥ α_d` of a square matrix.
pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    check_square(a, "matrix")?;
    check_finite(a, "matrix")?;
    Ok(singular_values_unchecked(a))
}

pub(crate) fn singular_values_unchecked(a: &Matrix) -> Vec<f64> {
    let mut sv: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Operator 2-norm.
pub fn norm2(a: &Matrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().singular_values().iter().copied().fold(0.0, f64::max)
}

/// Moduli of the eigenvalues `λ_1 ≥ … ≥ λ_d`; complex pairs contribute their
/// modulus twice.
pub fn eigen_moduli(a: &Matrix) -> Result<Vec<f64>> {
    check_square(a, "matrix")?;
    check_finite(a, "matrix")?;
    let scale = a.amax();
    if scale == 0.0 {
        return Ok(vec![0.0; a.nrows()]);
    }
    let mut m: Vec<f64> = log_eigen_moduli_unchecked(a)?
        .into_iter()
        .map(f64::exp)
        .collect();
    m.sort_by(|x, y| y.total_cmp(x));
    Ok(m)
}

/// Natural logs of the eigenvalue moduli, decreasing. The matrix is scaled
/// by its largest entry before the Schur decomposition so the result is
/// insensitive to the overall magnitude. Zero eigenvalues give `-inf`.
pub(crate) fn log_eigen_moduli_unchecked(a: &Matrix) -> Result<Vec<f64>> {
    let d = a.nrows();
    let scale = a.amax();
    if scale == 0.0 {
        return Ok(vec![f64::NEG_INFINITY; d]);
    }
    if d == 1 {
        return Ok(vec![a[(0, 0)].abs().ln()]);
    }
    let ls = scale.ln();
    let mut out: Vec<f64> = complex_eigenvalues(&(a / scale))?
        .iter()
        .map(|z| z.norm().ln() + ls)
        .collect();
    out.sort_by(|x, y| y.total_cmp(x));
    Ok(out)
}

/// Eigenvalues via a real Schur form. nalgebra's double-shift iteration has
/// no exceptional shifts and can cycle on spectra with many equal moduli,
/// such as exterior lifts of powers; those inputs go to faer's solver.
pub(crate) fn complex_eigenvalues(a: &Matrix) -> Result<Vec<nalgebra::Complex<f64>>> {
    if let Some(s) = nalgebra::Schur::try_new(a.clone(), f64::EPSILON, 100_000) {
        return Ok(s.complex_eigenvalues().iter().copied().collect());
    }
    let m = faer::Mat::<f64>::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)]);
    let vals = m
        .eigenvalues()
        .map_err(|e| Error::Degenerate(format!("eigenvalue iteration did not converge: {e:?}")))?;
    Ok(vals.into_iter().map(|z| nalgebra::Complex::new(z.re, z.im)).collect())
}

/// Spectral radius `max |λ|`.
pub fn spectral_radius(a: &Matrix) -> Result<f64> {
    Ok(eigen_moduli(a)?.first().copied().unwrap_or(0.0))
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det(a: &Matrix) -> f64 {
    let n = a.nrows();
    let mut m = a.clone();
    let mut det = 1.0;
    for c in 0..n {
        let (p, pv) = (c..n)
            .map(|r| (r, m[(r, c)].abs()))
            .fold((c, -1.0), |best, x| if x.1 > best.1 { x } else { best });
        if pv == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap_rows(p, c);
            det = -det;
        }
        let piv = m[(c, c)];
        det *= piv;
        for r in c + 1..n {
            let f = m[(r, c)] / piv;
            if f != 0.0 {
                for k in c + 1..n {
                    m[(r, k)] -= f * m[(c, k)];
                }
            }
        }
    }
    det
}

/// `ln |det A|` computed with row-max scaling so that it neither underflows
/// nor overflows for well-formed inputs.
pub fn log_abs_det(a: &Matrix) -> f64 {
    let mut m = a.clone();
    let mut shift = 0.0;
    for mut row in m.row_iter_mut() {
        let s = row.amax();
        if s == 0.0 {
            return f64::NEG_INFINITY;
        }
        row /= s;
        shift += s.ln();
    }
    det(&m).abs().ln() + shift
}

/// `|det A|` after scaling each row by its largest entry; the quantity the
/// invertibility floor is applied to.
pub(crate) fn row_scaled_abs_det(a: &Matrix) -> f64 {
    let mut m = a.clone();
    for mut row in m.row_iter_mut() {
        let s = row.amax();
        if s == 0.0 {
            return 0.0;
        }
        row /= s;
    }
    det(&m).abs()
}

/// Serialises a matrix as nested row-major arrays.
pub fn serialize_matrix<S: serde::Serializer>(a: &Matrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&rows_of(a), s)
}

/// Orthonormal basis (as columns) of the numerical null space of `m`:
/// right singular vectors whose singular value is at most `rel_tol · σ_max`.
pub fn null_space(m: &Matrix, rel_tol: f64) -> Matrix {
    null_space_below(m, |smax| rel_tol * smax)
}

/// Null space with singular values at most `abs_tol`.
pub fn null_space_abs(m: &Matrix, abs_tol: f64) -> Matrix {
    null_space_below(m, |_| abs_tol)
}

fn null_space_below(m: &Matrix, threshold: impl Fn(f64) -> f64) -> Matrix {
    let n = m.ncols();
    if n == 0 {
        return Matrix::zeros(0, 0);
    }
    // pad to at least n rows so that the SVD returns a full V
    let padded = if m.nrows() < n {
        let mut p = Matrix::zeros(n, n);
        p.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let thresh = threshold(smax);
    let cols: Vec<Vector> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= thresh)
        .map(|(i, _)| v_t.row(i).transpose())
        .collect();
    if cols.is_empty() {
        Matrix::zeros(n, 0)
    } else {
        Matrix::from_columns(&cols)
    }
}

/// Orthonormalises the columns of `m`, dropping columns that are numerically
/// dependent on earlier ones.
pub fn orthonormalize(m: &Matrix, rel_tol: f64) -> Matrix {
    let mut cols: Vec<Vector> = Vec::new();
    for c in m.column_iter() {
        let mut v = c.clone_owned();
        let n0 = v.norm();
        if n0 == 0.0 {
            continue;
        }
        // two passes of Gram-Schmidt
        for _ in 0..2 {
            for u in &cols {
                let p = u.dot(&v);
                v.axpy(-p, u, 1.0);
            }
        }
        let n = v.norm();
        if n > rel_tol * n0 {
            cols.push(v / n);
        }
    }
    if cols.is_empty() {
        Matrix::zeros(m.nrows(), 0)
    } else {
        Matrix::from_columns(&cols)
    }
}

/// Orthonormal basis of the orthogonal complement of the column span of the
/// orthonormal matrix `q`.
pub fn orthogonal_complement(q: &Matrix) -> Matrix {
    let d = q.nrows();
    let mut stacked = Matrix::zeros(d, q.ncols() + d);
    stacked.view_mut((0, 0), (d, q.ncols())).copy_from(q);
    stacked
        .view_mut((0, q.ncols()), (d, d))
        .copy_from(&Matrix::identity(d, d));
    let full = orthonormalize(&stacked, 1e-10);
    full.columns(q.ncols(), d - q.ncols()).into_owned()
}

/// Product `A_{w_n} ⋯ A_{w_1}` normalised by its largest entry after every
/// factor, together with the accumulated log scale. Eigenvalue moduli of the
/// product are `exp(log_moduli(matrix) + log_scale)`.
pub fn scaled_product<'a>(d: usize, factors: impl IntoIterator<Item = &'a Matrix>) -> (Matrix, f64) {
    let mut m = Matrix::identity(d, d);
    let mut log_scale = 0.0;
    for a in factors {
        m = a * m;
        let s = m.amax();
        if s > 0.0 && s.is_finite() {
            m /= s;
            log_scale += s.ln();
        }
    }
    (m, log_scale)
}
