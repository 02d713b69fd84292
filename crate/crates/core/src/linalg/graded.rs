//! Graded `U·D·T` accumulation of matrix products.
//!
//! A product is held as `U · diag(exp(logd)) · T` with `U` orthogonal, `logd`
//! non-increasing and `T` well conditioned. Every left multiplication is
//! absorbed by a Householder QR with column pivoting on the *virtually*
//! scaled matrix `(A U) D`, so the scale factors only ever appear in log
//! form. Singular values are then extracted from `D·T` by repeated
//! transposed QR sweeps, which decouple widely separated scales before a
//! dense SVD is applied to each remaining cluster.

use super::{log_abs_det, singular_values_unchecked, Matrix};

/// Log singular values of a represented matrix: `α_j = exp(logsv[j] + logscale)`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct LogSv {
    pub logsv: Vec<f64>,
    pub logscale: f64,
}

impl LogSv {
    /// `ln α_j` for every `j`, decreasing.
    pub fn absolute(&self) -> Vec<f64> {
        self.logsv.iter().map(|x| x + self.logscale).collect()
    }

    /// `ln(α_1 ⋯ α_k) = ln ‖A^∧k‖`.
    pub fn log_top_product(&self, k: usize) -> f64 {
        self.logsv[..k].iter().sum::<f64>() + k as f64 * self.logscale
    }
}

#[derive(Debug, Clone)]
pub struct GradedProduct {
    u: Matrix,
    logd: Vec<f64>,
    t: Matrix,
}

/// Off-diagonal coupling below which two graded scales are treated as independent.
const DECOUPLED: f64 = 1e-8;
/// Largest log-range handed to a dense SVD in one block.
const BLOCK_LOG_RANGE: f64 = 8.0;
const MAX_SWEEPS: usize = 200;

struct PivotedQr {
    q: Matrix,
    r: Matrix,
    perm: Vec<usize>,
}

/// Householder QR of `c · diag(exp(w))` with column pivoting, computed on the
/// unscaled `c`. Pivots maximise `ln‖residual column‖ + w_j`.
fn pivoted_qr(mut c: Matrix, w: &[f64]) -> PivotedQr {
    let n = c.nrows();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut q = Matrix::identity(n, n);
    for i in 0..n {
        let mut best = i;
        let mut best_score = f64::NEG_INFINITY;
        for j in i..n {
            let norm = c.view((i, j), (n - i, 1)).norm();
            let score = if norm > 0.0 { norm.ln() + w[perm[j]] } else { f64::NEG_INFINITY };
            if score > best_score {
                best_score = score;
                best = j;
            }
        }
        if best != i {
            c.swap_columns(i, best);
            perm.swap(i, best);
        }
        if i + 1 == n {
            break;
        }
        let x = c.view((i, i), (n - i, 1)).clone_owned();
        let alpha = x.norm();
        if alpha == 0.0 {
            continue;
        }
        let sign = if x[0] >= 0.0 { 1.0 } else { -1.0 };
        let mut v = x;
        v[0] += sign * alpha;
        let vn2 = v.norm_squared();
        if vn2 == 0.0 {
            continue;
        }
        // c[i.., i..] -= 2 v (vᵀ c) / vᵀv
        for col in i..n {
            let dot: f64 = (0..n - i).map(|r| v[r] * c[(i + r, col)]).sum();
            let f = 2.0 * dot / vn2;
            for r in 0..n - i {
                c[(i + r, col)] -= f * v[r];
            }
        }
        for r in i + 1..n {
            c[(r, i)] = 0.0;
        }
        // q[:, i..] -= 2 (q v) vᵀ / vᵀv
        for row in 0..n {
            let dot: f64 = (0..n - i).map(|r| q[(row, i + r)] * v[r]).sum();
            let f = 2.0 * dot / vn2;
            for r in 0..n - i {
                q[(row, i + r)] -= f * v[r];
            }
        }
    }
    PivotedQr { q, r: c, perm }
}

/// Splits the virtually scaled `R·diag(exp(w_perm))` into `diag(exp(logd))·T`
/// with `T` upper triangular, unit-modulus diagonal.
fn split_scaled_r(r: &Matrix, w_perm: &[f64]) -> (Vec<f64>, Matrix) {
    let n = r.nrows();
    let logd: Vec<f64> = (0..n).map(|i| r[(i, i)].abs().ln() + w_perm[i]).collect();
    let mut t = Matrix::zeros(n, n);
    for i in 0..n {
        let rii = r[(i, i)].abs();
        for j in i..n {
            let rij = r[(i, j)];
            if rij == 0.0 || rii == 0.0 {
                continue;
            }
            let lg = rij.abs().ln() - rii.ln() + w_perm[j] - w_perm[i];
            t[(i, j)] = rij.signum() * lg.exp();
        }
    }
    (logd, t)
}

impl GradedProduct {
    pub fn identity(d: usize) -> Self {
        Self {
            u: Matrix::identity(d, d),
            logd: vec![0.0; d],
            t: Matrix::identity(d, d),
        }
    }

    pub fn dim(&self) -> usize {
        self.logd.len()
    }

    /// Replaces the represented product `M` by `A · M`.
    pub fn left_mul(&mut self, a: &Matrix) {
        let c = a * &self.u;
        let PivotedQr { q, r, perm } = pivoted_qr(c, &self.logd);
        let w_perm: Vec<f64> = perm.iter().map(|&p| self.logd[p]).collect();
        let (logd, t_r) = split_scaled_r(&r, &w_perm);
        let n = self.dim();
        let mut permuted = Matrix::zeros(n, n);
        for (i, &p) in perm.iter().enumerate() {
            permuted.set_row(i, &self.t.row(p));
        }
        self.u = q;
        self.logd = logd;
        self.t = t_r * permuted;
    }

    /// `ln |det M|`.
    pub fn log_abs_det(&self) -> f64 {
        self.logd.iter().sum::<f64>() + log_abs_det(&self.t)
    }

    /// Log singular values of the represented product, decreasing, with
    /// `logscale = 0`.
    pub fn log_singular_values(&self) -> LogSv {
        let (mut logd, mut t) = transpose_sweep(&self.logd, &self.t);
        for _ in 0..MAX_SWEEPS {
            if blocks_resolved(&logd, &t) {
                break;
            }
            let next = transpose_sweep(&logd, &t);
            logd = next.0;
            t = next.1;
        }
        let mut out = block_singular_values(&logd, &t);
        out.sort_by(|x, y| y.total_cmp(x));
        LogSv { logsv: out, logscale: 0.0 }
    }
}

/// Given `X = D T`, returns `(D', T')` with `T'` unit upper triangular and
/// `σ(D' T') = σ(X)`, via a pivoted QR of `Tᵀ D`.
fn transpose_sweep(logd: &[f64], t: &Matrix) -> (Vec<f64>, Matrix) {
    let PivotedQr { r, perm, .. } = pivoted_qr(t.transpose(), logd);
    let w_perm: Vec<f64> = perm.iter().map(|&p| logd[p]).collect();
    split_scaled_r(&r, &w_perm)
}

/// Connected components of the coupling graph `|T_ij| > DECOUPLED`.
fn components(t: &Matrix) -> Vec<Vec<usize>> {
    let n = t.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && t[(i, j)].abs() > DECOUPLED {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    groups
}

fn blocks_resolved(logd: &[f64], t: &Matrix) -> bool {
    components(t).iter().all(|g| {
        let hi = g.iter().map(|&i| logd[i]).fold(f64::NEG_INFINITY, f64::max);
        let lo = g.iter().map(|&i| logd[i]).fold(f64::INFINITY, f64::min);
        hi - lo <= BLOCK_LOG_RANGE
    })
}

fn block_singular_values(logd: &[f64], t: &Matrix) -> Vec<f64> {
    let mut out = Vec::with_capacity(logd.len());
    for g in components(t) {
        if g.len() == 1 {
            let i = g[0];
            out.push(logd[i] + t[(i, i)].abs().ln());
            continue;
        }
        let reference = g.iter().map(|&i| logd[i]).fold(f64::NEG_INFINITY, f64::max);
        let m = g.len();
        let mut block = Matrix::zeros(m, m);
        for (a, &i) in g.iter().enumerate() {
            let s = (logd[i] - reference).exp();
            for (b, &j) in g.iter().enumerate() {
                block[(a, b)] = s * t[(i, j)];
            }
        }
        out.extend(singular_values_unchecked(&block).into_iter().map(|x| x.ln() + reference));
    }
    out
}
