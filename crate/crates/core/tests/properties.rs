mod common;

use proptest::prelude::*;
use selfaffine::analysis::{detect_similitude_structure, DEFAULT_SIMILITUDE_TOL};
use selfaffine::linalg::{eigen_moduli, exterior_power, norm2, singular_values};
use selfaffine::structure::{irreducibility_report, IrreducibilityVerdict};
use selfaffine::symbolic::{gibbs_approx, pressure_bracket, upper_pressure_sequence, PressureOptions, DEFAULT_BUDGET};
use selfaffine::{dualize, eval_potential, svf, Matrix, MatrixTuple, PotentialSpec, Word};

fn matrix(d: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(-1.0f64..1.0, d * d).prop_map(move |v| Matrix::from_row_slice(d, d, &v))
}

fn invertible(d: usize) -> impl Strategy<Value = Matrix> {
    matrix(d).prop_filter("well conditioned", |a| {
        let sv = singular_values(a).unwrap();
        sv[sv.len() - 1] > 1e-3 * sv[0]
    })
}

fn sized_matrix() -> impl Strategy<Value = Matrix> {
    (1usize..=4).prop_flat_map(invertible)
}

fn tuple(d: usize, n: usize, scale: f64) -> impl Strategy<Value = MatrixTuple> {
    proptest::collection::vec(invertible(d), n).prop_map(move |mats| {
        MatrixTuple::new(mats.into_iter().map(|a| &a * (scale / norm2(&a))).collect()).unwrap()
    })
}

fn word(n: usize, max_len: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(0..n, 1..=max_len).prop_map(Word::new)
}

fn orthogonal(d: usize) -> impl Strategy<Value = Matrix> {
    invertible(d).prop_map(|a| a.qr().q())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exterior_norm_is_top_singular_product(a in sized_matrix()) {
        let sv = singular_values(&a).unwrap();
        for k in 1..=a.nrows() {
            let prod: f64 = sv[..k].iter().product();
            prop_assert!(rel(norm2(&exterior_power(&a, k).unwrap()), prod) <= 1e-9);
        }
    }

    #[test]
    fn inverse_reverses_singular_values(a in sized_matrix()) {
        let sv = singular_values(&a).unwrap();
        let inv = singular_values(&a.clone().try_inverse().unwrap()).unwrap();
        for (x, y) in sv.iter().rev().zip(&inv) {
            prop_assert!(rel(1.0 / x, *y) <= 1e-9);
        }
    }

    #[test]
    fn singular_values_are_orthogonally_invariant((a, q, r) in (2usize..=4).prop_flat_map(|d| (invertible(d), orthogonal(d), orthogonal(d)))) {
        let base = singular_values(&a).unwrap();
        let moved = singular_values(&(&q * &a * &r)).unwrap();
        for (x, y) in base.iter().zip(&moved) {
            prop_assert!(rel(*x, *y) <= 1e-9);
        }
    }

    #[test]
    fn exterior_spectral_radius_is_top_modulus_product((a, k) in (2usize..=4).prop_flat_map(|d| (invertible(d), 1..=d))) {
        let moduli = eigen_moduli(&a).unwrap();
        let lifted = eigen_moduli(&exterior_power(&a, k).unwrap()).unwrap();
        let prod: f64 = moduli[..k].iter().product();
        prop_assert!(rel(lifted[0], prod) <= 1e-7, "{} vs {prod}", lifted[0]);
    }

    #[test]
    fn potentials_are_submultiplicative(
        (t, u, v) in tuple(3, 2, 0.8).prop_flat_map(|t| (Just(t), word(2, 6), word(2, 6))),
        s in 0.0f64..3.0,
    ) {
        let specs = vec![
            PotentialSpec::Svf { s },
            PotentialSpec::norm_power(1.5, 2).unwrap(),
            PotentialSpec::weighted_product(vec![(1, 0.7), (2, 0.4)]).unwrap(),
            PotentialSpec::max_of(vec![PotentialSpec::Svf { s }, PotentialSpec::norm_power(1.0, 1).unwrap()]).unwrap(),
        ];
        for spec in &specs {
            let whole = eval_potential(spec, &t, &u.concat(&v)).unwrap();
            let parts = eval_potential(spec, &t, &u).unwrap() + eval_potential(spec, &t, &v).unwrap();
            prop_assert!(whole <= parts + 1e-9, "{}: {whole} > {parts}", spec.label());
        }
    }

    #[test]
    fn log_svf_is_concave_and_nonincreasing_for_contractions(a in (1usize..=4).prop_flat_map(invertible), s0 in 0.0f64..1.0, s1 in 0.0f64..1.0) {
        let d = a.nrows() as f64;
        let a = &a * (0.9 / norm2(&a));
        let (lo, hi) = (s0.min(s1) * d, s0.max(s1) * d);
        let f = |s: f64| svf(&a, s).unwrap().ln();
        prop_assert!(f(hi) <= f(lo) + 1e-12);
        prop_assert!(f(0.5 * (lo + hi)) >= 0.5 * (f(lo) + f(hi)) - 1e-9);
    }

    #[test]
    fn dualize_is_an_involution((t, s) in (2usize..=4).prop_flat_map(|d| (tuple(d, 2, 0.7), 0.05f64..(d as f64 - 0.05)))) {
        let dual = dualize(&t, s).unwrap();
        let back = dualize(&dual.tuple, dual.s_dual).unwrap();
        for (a, b) in t.iter().zip(back.tuple.iter()) {
            prop_assert!((a - b).abs().max() <= 1e-8 * norm2(a));
        }
    }

    #[test]
    fn log_partition_is_subadditive(t in tuple(2, 2, 0.8), s in 0.0f64..2.0) {
        let seq = upper_pressure_sequence(&t, &PotentialSpec::Svf { s }, 8, DEFAULT_BUDGET).unwrap();
        let a = |n: usize| seq[n - 1] * n as f64;
        for n in 1..=8 {
            for m in 1..=(8 - n) {
                prop_assert!(a(n + m) <= a(n) + a(m) + 1e-9);
            }
        }
    }

    #[test]
    fn bracket_is_ordered(t in tuple(2, 3, 0.7), s in 0.0f64..2.0, n in 1usize..=6) {
        let b = pressure_bracket(&t, &PotentialSpec::Svf { s }, n, &PressureOptions::default()).unwrap();
        prop_assert!(b.lower <= b.upper);
        prop_assert!(b.periodic_lower <= b.upper + 1e-9);
    }

    #[test]
    fn gibbs_weights_are_a_probability_vector(t in tuple(3, 2, 0.8), s in 0.0f64..3.0, n in 1usize..=6) {
        let g = gibbs_approx(&t, &PotentialSpec::Svf { s }, n, DEFAULT_BUDGET).unwrap();
        let total: f64 = g.weights().iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
        prop_assert!(g.weights().iter().all(|w| *w >= 0.0));
    }

    #[test]
    fn reducible_witnesses_reverify_and_survive_conjugation(
        blocks in proptest::collection::vec(invertible(3), 2),
        x in invertible(3),
    ) {
        let mats: Vec<Matrix> = blocks
            .iter()
            .map(|b| {
                let mut m = b.clone();
                m[(1, 0)] = 0.0;
                m[(2, 0)] = 0.0;
                m
            })
            .collect();
        prop_assume!(mats.iter().all(|m| singular_values(m).unwrap()[2] > 1e-6));
        let t = MatrixTuple::new(mats).unwrap();
        let conj = t.conjugate(&x).unwrap();
        for tup in [&t, &conj] {
            match irreducibility_report(tup, 1).unwrap() {
                IrreducibilityVerdict::No { witness, .. } => {
                    prop_assert!(witness.invariance_residual(tup.matrices()) <= 1e-8);
                }
                other => prop_assert!(false, "expected a witness, got {other:?}"),
            }
        }
    }

    #[test]
    fn similitude_verdict_is_conjugation_covariant(
        angles in proptest::collection::vec(0.0f64..6.28, 2..=3),
        ratios in proptest::collection::vec(0.2f64..0.8, 3),
        b in invertible(2),
        x in invertible(2),
    ) {
        let mats = angles.iter().zip(&ratios).map(|(a, r)| common::rotation(*a) * *r).collect();
        let t = MatrixTuple::new(mats).unwrap().conjugate(&b).unwrap();
        let base = detect_similitude_structure(&t, 10_000, DEFAULT_SIMILITUDE_TOL).unwrap();
        let moved = detect_similitude_structure(&t.conjugate(&x).unwrap(), 10_000, DEFAULT_SIMILITUDE_TOL).unwrap();
        prop_assert_eq!(base.verdict, moved.verdict);
        if let (Some(p), Some(q)) = (base.p, moved.p) {
            let xinv = x.clone().try_inverse().unwrap();
            let mapped = xinv.transpose() * p * &xinv;
            let mapped = &mapped * (2.0 / mapped.trace());
            prop_assert!((&mapped - &q).abs().max() <= 1e-6 * norm2(&q));
        }
    }
}
