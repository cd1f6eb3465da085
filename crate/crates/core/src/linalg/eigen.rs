//! Cyclic Jacobi eigendecomposition of small symmetric matrices.

use super::dense::DenseMatrix;
use super::LinalgError;

/// Eigenvalues in ascending order and the orthogonal matrix whose columns
/// are the matching eigenvectors.
#[derive(Clone, Debug)]
pub struct EigenPair {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

impl EigenPair {
    /// `P diag(d) Pᵀ` for an arbitrary diagonal `d`.
    pub fn reassemble_with(&self, d: &[f64]) -> DenseMatrix {
        let n = self.values.len();
        let p = &self.vectors;
        let mut out = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += p[(i, k)] * d[k] * p[(j, k)];
                }
                out[(i, j)] = s;
            }
        }
        out
    }

    /// `‖PᵀP − I‖∞`
    pub fn orthogonality_residual(&self) -> f64 {
        let ptp = self.vectors.transpose().matmul(&self.vectors);
        ptp.sub(&DenseMatrix::identity(ptp.rows())).norm_inf()
    }

    /// `‖BP − P diag(λ)‖∞`
    pub fn reconstruction_residual(&self, b: &DenseMatrix) -> f64 {
        let bp = b.matmul(&self.vectors);
        let pl = self
            .vectors
            .matmul(&DenseMatrix::from_diagonal(&self.values));
        bp.sub(&pl).norm_inf()
    }
}

pub const SYMMETRY_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 50;
/// Sweeps stop once the off-diagonal Frobenius norm falls below this
/// fraction of the full norm.
const OFF_TOL: f64 = 1e-14;

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Output is deterministic: eigenvalues ascend, and each eigenvector is
/// signed so that its largest-magnitude entry (first one on ties) is positive.
pub fn jacobi_eigh(b: &DenseMatrix) -> Result<EigenPair, LinalgError> {
    if !b.is_square() {
        return Err(LinalgError::NotSquare {
            rows: b.rows(),
            cols: b.cols(),
        });
    }
    let scale = b.max_abs().max(f64::MIN_POSITIVE);
    let asym = b.symmetry_residual();
    if asym > SYMMETRY_TOL * scale.max(1.0) {
        return Err(LinalgError::NotSymmetric { residual: asym });
    }
    let n = b.rows();
    let mut a = b.clone();
    // symmetrize exactly so rotations act on a truly symmetric matrix
    for i in 0..n {
        for j in 0..i {
            let s = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = s;
            a[(j, i)] = s;
        }
    }
    let mut v = DenseMatrix::identity(n);
    let frob: f64 = a.as_slice().iter().map(|x| x * x).sum::<f64>().sqrt();

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= OFF_TOL * frob {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                if apq.abs() <= 1e-3 * f64::EPSILON * (app.abs() + aqq.abs()) {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = DenseMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        let mut imax = 0;
        for k in 1..n {
            if v[(k, src)].abs() > v[(imax, src)].abs() * (1.0 + 1e-12) {
                imax = k;
            }
        }
        let sign = if v[(imax, src)] < 0.0 { -1.0 } else { 1.0 };
        for k in 0..n {
            vectors[(k, col)] = sign * v[(k, src)];
        }
    }
    Ok(EigenPair { values, vectors })
}
