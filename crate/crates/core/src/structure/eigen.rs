use crate::error::Result;
use crate::linalg::{complex_eigenvalues, norm2, null_space_abs, orthonormalize, Matrix, Vector};
use crate::tuple::MatrixTuple;

/// Relative gap below which real eigenvalues are treated as one.
pub const CLUSTER_GAP: f64 = 1e-7;
/// Relative singular-value threshold for eigenspace null spaces.
pub const NULL_TOL: f64 = 1e-9;

/// Real eigenvalues of `a`, numerically multiple ones merged, decreasing.
pub fn real_eigenvalue_clusters(a: &Matrix) -> Result<Vec<f64>> {
    let scale = a.amax();
    if scale == 0.0 {
        return Ok(vec![0.0]);
    }
    if a.nrows() == 1 {
        return Ok(vec![a[(0, 0)]]);
    }
    let mut re: Vec<f64> = complex_eigenvalues(&(a / scale))?
        .iter()
        .filter(|z| z.im.abs() <= CLUSTER_GAP)
        .map(|z| z.re)
        .collect();
    re.sort_by(|x, y| y.total_cmp(x));
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for x in re {
        match clusters.last_mut() {
            Some(c) if (c[c.len() - 1] - x).abs() <= CLUSTER_GAP * x.abs().max(1e-3) => c.push(x),
            _ => clusters.push(vec![x]),
        }
    }
    Ok(clusters
        .into_iter()
        .map(|c| scale * c.iter().sum::<f64>() / c.len() as f64)
        .collect())
}

fn is_scalar(a: &Matrix) -> bool {
    let d = a.nrows();
    let c = a.trace() / d as f64;
    (a - Matrix::identity(d, d) * c).amax() <= 1e-12 * a.amax()
}

/// Joint eigenspaces of a family of square matrices: maximal subspaces on
/// which every generator acts as a real scalar. Each is returned as an
/// orthonormal basis. Scalar generators are skipped.
pub fn joint_eigenspaces(mats: &[Matrix]) -> Result<Vec<Matrix>> {
    let d = mats.first().map(|a| a.nrows()).unwrap_or(0);
    let mut spaces = vec![Matrix::identity(d, d)];
    for a in mats.iter().filter(|a| !is_scalar(a)) {
        let lams = real_eigenvalue_clusters(a)?;
        let scale = norm2(a);
        let mut next = Vec::new();
        for q in &spaces {
            for &lam in &lams {
                let shifted = (a - Matrix::identity(d, d) * lam) * q;
                let n = null_space_abs(&shifted, NULL_TOL * scale.max(lam.abs()));
                if n.ncols() == 0 {
                    continue;
                }
                let basis = orthonormalize(&(q * n), 1e-10);
                if basis.ncols() > 0 {
                    next.push(basis);
                }
            }
        }
        spaces = next;
        if spaces.is_empty() {
            break;
        }
    }
    Ok(spaces)
}

/// Unit vectors `v` with `A_i v ∥ v` for all `i`: a basis of each joint
/// eigenspace, in a deterministic order.
pub fn common_eigenvectors(t: &MatrixTuple) -> Result<Vec<Vector>> {
    Ok(joint_eigenspaces(t.matrices())?
        .into_iter()
        .flat_map(|q| q.column_iter().map(|c| c.clone_owned()).collect::<Vec<_>>())
        .collect())
}
