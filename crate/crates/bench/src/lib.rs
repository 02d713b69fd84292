//! Fixed tuples shared by the benchmarks.

use selfaffine::MatrixTuple;

/// Two contracting, irreducible 2×2 maps.
pub fn planar_pair() -> MatrixTuple {
    MatrixTuple::from_rows(2, &[vec![0.5, 0.3, -0.1, 0.4], vec![0.2, -0.4, 0.35, 0.1]]).unwrap()
}

/// Three contracting 3×3 maps with no common invariant subspace.
pub fn spatial_triple() -> MatrixTuple {
    MatrixTuple::from_rows(
        3,
        &[
            vec![0.31, -0.22, 0.15, 0.08, 0.27, -0.19, 0.12, 0.05, 0.21],
            vec![0.18, 0.07, -0.26, -0.14, 0.33, 0.09, 0.2, -0.11, 0.16],
            vec![0.25, 0.1, 0.05, -0.05, 0.2, 0.15, 0.1, -0.2, 0.3],
        ],
    )
    .unwrap()
}
