use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{log_abs_det, null_space, Matrix, Vector};
use crate::tuple::MatrixTuple;

pub const DEFAULT_SIMILITUDE_TOL: f64 = 1e-8;
pub const MAX_CESARO_ITERS: usize = 10_000;
const NULL_REL_TOL: f64 = 1e-9;
const SPD_REL_TOL: f64 = 1e-10;
const DIVERGENCE_WINDOW: usize = 100;
const ANGLE_GRID: usize = 720;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SimilitudeVerdict {
    Similitudes,
    NotSimilitudes,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SimilitudeMethod {
    /// Dimension of the space of symmetric forms fixed by every generator.
    NullSpace { invariant_dim: usize },
    Cesaro { iterations: usize, invariant_dim: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilitudeCertificate {
    /// Invariant quadratic form, scaled to trace `d`.
    #[serde(serialize_with = "serialize_opt_matrix")]
    pub p: Option<Matrix>,
    pub residual: f64,
    pub verdict: SimilitudeVerdict,
    pub method: SimilitudeMethod,
}

fn serialize_opt_matrix<S: serde::Serializer>(p: &Option<Matrix>, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&p.as_ref().map(crate::linalg::rows_of), s)
}

/// Orthonormal basis of symmetric `d×d` matrices for the Frobenius product.
fn sym_basis(d: usize) -> Vec<Matrix> {
    let mut out = Vec::with_capacity(d * (d + 1) / 2);
    for i in 0..d {
        for j in i..d {
            let mut e = Matrix::zeros(d, d);
            if i == j {
                e[(i, i)] = 1.0;
            } else {
                let v = std::f64::consts::FRAC_1_SQRT_2;
                e[(i, j)] = v;
                e[(j, i)] = v;
            }
            out.push(e);
        }
    }
    out
}

fn coords(basis: &[Matrix], p: &Matrix) -> Vector {
    Vector::from_iterator(basis.len(), basis.iter().map(|e| e.dot(p)))
}

fn from_coords(basis: &[Matrix], c: &[f64]) -> Matrix {
    let d = basis[0].nrows();
    basis.iter().zip(c).fold(Matrix::zeros(d, d), |acc, (e, &x)| acc + e * x)
}

/// `max_i ‖Âᵢᵀ P Âᵢ − P‖_F / ‖P‖_F`.
pub fn form_residual(normalized: &[Matrix], p: &Matrix) -> f64 {
    let np = p.norm();
    normalized
        .iter()
        .map(|a| (a.transpose() * p * a - p).norm() / np)
        .fold(0.0, f64::max)
}

/// Smallest eigenvalue over largest absolute eigenvalue.
fn definiteness(p: &Matrix) -> f64 {
    let sym = (p + p.transpose()) * 0.5;
    let ev = sym.symmetric_eigenvalues();
    let max = ev.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return f64::NEG_INFINITY;
    }
    ev.min() / max
}

fn is_spd(p: &Matrix) -> bool {
    definiteness(p) > SPD_REL_TOL
}

fn trace_normalized(p: Matrix) -> Matrix {
    let d = p.nrows() as f64;
    let sym = (&p + p.transpose()) * 0.5;
    let tr = sym.trace();
    sym * (d / tr)
}

/// `Âᵢ = |det Aᵢ|^{-1/d} Aᵢ`.
pub fn det_normalized(t: &MatrixTuple) -> Vec<Matrix> {
    let d = t.dim() as f64;
    t.iter().map(|a| a * (-log_abs_det(a) / d).exp()).collect()
}

/// Best SPD element of the plane spanned by `p1`, `p2`, if any.
fn spd_in_plane(p1: &Matrix, p2: &Matrix) -> Option<Matrix> {
    let at = |th: f64| p1 * th.cos() + p2 * th.sin();
    let score = |th: f64| definiteness(&at(th));
    let step = std::f64::consts::TAU / ANGLE_GRID as f64;
    let (mut best, mut best_score) = (0.0, f64::NEG_INFINITY);
    for i in 0..ANGLE_GRID {
        let th = i as f64 * step;
        let sc = score(th);
        if sc > best_score {
            best = th;
            best_score = sc;
        }
    }
    // golden-section refinement around the best grid angle
    let (mut lo, mut hi) = (best - step, best + step);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let a = hi - g * (hi - lo);
        let b = lo + g * (hi - lo);
        if score(a) > score(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    let th = 0.5 * (lo + hi);
    let p = at(th);
    is_spd(&p).then_some(p)
}

/// Looks for a symmetric positive-definite `P` with `Âᵢᵀ P Âᵢ = P` for every
/// determinant-normalized generator, i.e. an inner product in which every
/// map is a similitude.
///
/// The invariant forms are the common null space of `P ↦ Âᵢᵀ P Âᵢ − P`.
/// When that space is empty, or of dimension at most two without a positive
/// definite element, the verdict is `NOT_SIMILITUDES`. Otherwise a
/// candidate is taken from it, and if that fails the Cesàro average of
/// `P ↦ N⁻¹ Σ Âᵢᵀ P Âᵢ` started at the identity is run for up to `iters`
/// steps.
pub fn detect_similitude_structure(t: &MatrixTuple, iters: usize, tol: f64) -> Result<SimilitudeCertificate> {
    if !(tol > 0.0) {
        return Err(Error::input("tol", "must be positive"));
    }
    let d = t.dim();
    let mats = det_normalized(t);
    let basis = sym_basis(d);
    let m = basis.len();
    let mut stacked = Matrix::zeros(m * mats.len(), m);
    for (i, a) in mats.iter().enumerate() {
        for (j, e) in basis.iter().enumerate() {
            let img = a.transpose() * e * a - e;
            stacked.view_mut((i * m, j), (m, 1)).copy_from(&coords(&basis, &img));
        }
    }
    let null = null_space(&stacked, NULL_REL_TOL);
    let dim = null.ncols();
    let vectors: Vec<Matrix> = null
        .column_iter()
        .map(|c| from_coords(&basis, c.as_slice()))
        .collect();

    let candidate = match dim {
        0 => None,
        1 => {
            let p = &vectors[0];
            let p = if p.trace() < 0.0 { -p } else { p.clone() };
            is_spd(&p).then_some(p)
        }
        2 => spd_in_plane(&vectors[0], &vectors[1]),
        _ => {
            // orthogonal projection of the identity onto the invariant forms
            let id = coords(&basis, &Matrix::identity(d, d));
            let c = null.transpose() * id;
            let p = &null * c;
            let p = from_coords(&basis, p.as_slice());
            is_spd(&p).then_some(p)
        }
    };
    let method = SimilitudeMethod::NullSpace { invariant_dim: dim };
    match candidate {
        Some(p) => {
            let p = trace_normalized(p);
            let residual = form_residual(&mats, &p);
            if residual <= tol {
                return Ok(SimilitudeCertificate {
                    p: Some(p),
                    residual,
                    verdict: SimilitudeVerdict::Similitudes,
                    method,
                });
            }
        }
        None if dim <= 2 => {
            return Ok(SimilitudeCertificate {
                p: None,
                residual: f64::NAN,
                verdict: SimilitudeVerdict::NotSimilitudes,
                method,
            });
        }
        None => {}
    }
    Ok(cesaro(&mats, iters.min(MAX_CESARO_ITERS), tol, dim))
}

fn cesaro(mats: &[Matrix], iters: usize, tol: f64, invariant_dim: usize) -> SimilitudeCertificate {
    let d = mats[0].nrows();
    let n = mats.len() as f64;
    let mut p = Matrix::identity(d, d);
    let mut sum = p.clone();
    let mut history: Vec<f64> = Vec::with_capacity(iters + 1);
    let mut avg = p.clone();
    let mut residual = form_residual(mats, &avg);
    history.push(residual);
    let mut verdict = SimilitudeVerdict::Inconclusive;
    let mut done = 0;
    for step in 1..=iters {
        let next = mats.iter().fold(Matrix::zeros(d, d), |acc, a| acc + a.transpose() * &p * a) / n;
        p = trace_normalized(next);
        sum += &p;
        avg = trace_normalized(sum.clone());
        residual = form_residual(mats, &avg);
        history.push(residual);
        done = step;
        if residual <= tol && is_spd(&avg) {
            verdict = SimilitudeVerdict::Similitudes;
            break;
        }
        if step >= DIVERGENCE_WINDOW && residual > 10.0 * history[step - DIVERGENCE_WINDOW] {
            verdict = SimilitudeVerdict::NotSimilitudes;
            break;
        }
    }
    SimilitudeCertificate {
        p: Some(avg),
        residual,
        verdict,
        method: SimilitudeMethod::Cesaro { iterations: done, invariant_dim },
    }
}
