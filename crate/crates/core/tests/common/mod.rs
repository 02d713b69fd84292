#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use selfaffine::{Matrix, MatrixTuple};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries i.i.d. uniform in `[-1, 1]`.
pub fn random_matrix(rng: &mut ChaCha8Rng, d: usize) -> Matrix {
    Matrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0))
}

/// Random tuple rescaled so that every generator has norm `scale`.
pub fn random_contractions(rng: &mut ChaCha8Rng, d: usize, n: usize, scale: f64) -> MatrixTuple {
    let mats = (0..n)
        .map(|_| {
            let a = random_matrix(rng, d);
            let norm = selfaffine::linalg::norm2(&a);
            a * (scale / norm)
        })
        .collect();
    MatrixTuple::new(mats).unwrap()
}

pub fn rotation(angle: f64) -> Matrix {
    Matrix::from_row_slice(2, 2, &[angle.cos(), -angle.sin(), angle.sin(), angle.cos()])
}

pub fn diag(v: &[f64]) -> Matrix {
    Matrix::from_diagonal(&selfaffine::Vector::from_vec(v.to_vec()))
}

/// Named contracting tuples used by several suites.
pub fn corpus() -> Vec<(&'static str, MatrixTuple)> {
    let shear = Matrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
    let mut out = vec![
        ("scalars", MatrixTuple::from_rows(1, &[vec![0.5], vec![-0.3], vec![0.2]]).unwrap()),
        (
            "planar_pair",
            MatrixTuple::from_rows(2, &[vec![0.5, 0.3, -0.1, 0.4], vec![0.2, -0.4, 0.35, 0.1]]).unwrap(),
        ),
        (
            "planar_triple",
            MatrixTuple::from_rows(
                2,
                &[vec![0.45, 0.1, 0.2, -0.3], vec![-0.25, 0.4, 0.1, 0.2], vec![0.3, -0.2, -0.35, 0.15]],
            )
            .unwrap(),
        ),
        ("diagonal_pair", MatrixTuple::new(vec![diag(&[0.5, 1.0 / 3.0]), diag(&[0.25, 0.2])]).unwrap()),
        (
            "triangular_pair",
            MatrixTuple::from_rows(2, &[vec![0.5, 0.2, 0.0, 0.3], vec![0.25, -0.3, 0.0, 0.45]]).unwrap(),
        ),
        (
            "conjugated_similitudes",
            MatrixTuple::new(vec![rotation(0.7) * 0.3, rotation(2.1) * 0.25, rotation(-1.3) * 0.35])
                .unwrap()
                .conjugate(&shear)
                .unwrap(),
        ),
        ("rotation", MatrixTuple::new(vec![rotation(std::f64::consts::FRAC_PI_2) * 0.5]).unwrap()),
        (
            "spatial_triple",
            MatrixTuple::from_rows(
                3,
                &[
                    vec![0.31, -0.22, 0.15, 0.08, 0.27, -0.19, 0.12, 0.05, 0.21],
                    vec![0.18, 0.07, -0.26, -0.14, 0.33, 0.09, 0.2, -0.11, 0.16],
                    vec![0.25, 0.1, 0.05, -0.05, 0.2, 0.15, 0.1, -0.2, 0.3],
                ],
            )
            .unwrap(),
        ),
        (
            "spatial_block",
            MatrixTuple::from_rows(
                3,
                &[
                    vec![0.4, 0.0, 0.0, 0.0, 0.3, 0.2, 0.0, -0.1, 0.35],
                    vec![-0.2, 0.0, 0.0, 0.0, 0.25, -0.3, 0.0, 0.2, 0.3],
                ],
            )
            .unwrap(),
        ),
    ];
    let mut r = rng(4);
    out.push(("quartic_pair", random_contractions(&mut r, 4, 2, 0.6)));
    out
}
