//! Scalar and block tridiagonal direct solvers.

use super::dense::{DenseMatrix, LuFactors, PIVOT_FLOOR};
use super::LinalgError;

/// Solves a scalar tridiagonal system by the Thomas algorithm.
///
/// `lower[i]` couples row `i + 1` to column `i`, `upper[i]` couples row `i`
/// to column `i + 1`. No pivoting: intended for M-matrices and SPD systems.
pub fn thomas(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &[f64],
) -> Result<Vec<f64>, LinalgError> {
    let n = diag.len();
    if rhs.len() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: rhs.len(),
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if lower.len() != n - 1 || upper.len() != n - 1 {
        return Err(LinalgError::DimensionMismatch {
            expected: n - 1,
            found: if lower.len() != n - 1 {
                lower.len()
            } else {
                upper.len()
            },
        });
    }
    let mut cp = vec![0.0; n];
    let mut dp = vec![0.0; n];
    let mut denom = diag[0];
    if denom.abs() < PIVOT_FLOOR {
        return Err(LinalgError::ZeroPivot { row: 0 });
    }
    if n > 1 {
        cp[0] = upper[0] / denom;
    }
    dp[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - lower[i - 1] * cp[i - 1];
        if denom.abs() < PIVOT_FLOOR {
            return Err(LinalgError::ZeroPivot { row: i });
        }
        if i < n - 1 {
            cp[i] = upper[i] / denom;
        }
        dp[i] = (rhs[i] - lower[i - 1] * dp[i - 1]) / denom;
    }
    let mut x = dp;
    for i in (0..n - 1).rev() {
        x[i] -= cp[i] * x[i + 1];
    }
    Ok(x)
}

/// Block tridiagonal matrix with square blocks of a common size.
///
/// Row `i` reads `lower[i-1] x_{i-1} + diag[i] x_i + upper[i] x_{i+1}`.
#[derive(Clone, Debug)]
pub struct BlockTridiag {
    block: usize,
    lower: Vec<DenseMatrix>,
    diag: Vec<DenseMatrix>,
    upper: Vec<DenseMatrix>,
}

impl BlockTridiag {
    pub fn new(
        lower: Vec<DenseMatrix>,
        diag: Vec<DenseMatrix>,
        upper: Vec<DenseMatrix>,
    ) -> Result<Self, LinalgError> {
        let n = diag.len();
        if n == 0 {
            return Err(LinalgError::Empty);
        }
        if lower.len() != n - 1 || upper.len() != n - 1 {
            return Err(LinalgError::DimensionMismatch {
                expected: n - 1,
                found: lower.len().min(upper.len()),
            });
        }
        let m = diag[0].rows();
        for b in lower.iter().chain(&diag).chain(&upper) {
            if b.rows() != m || b.cols() != m {
                return Err(LinalgError::DimensionMismatch {
                    expected: m,
                    found: b.rows().max(b.cols()),
                });
            }
        }
        Ok(Self {
            block: m,
            lower,
            diag,
            upper,
        })
    }

    /// Zero-initialized operator with `n` block rows of size `m`.
    pub fn zeros(n: usize, m: usize) -> Self {
        Self {
            block: m,
            lower: vec![DenseMatrix::zeros(m, m); n.saturating_sub(1)],
            diag: vec![DenseMatrix::zeros(m, m); n],
            upper: vec![DenseMatrix::zeros(m, m); n.saturating_sub(1)],
        }
    }

    pub fn block_size(&self) -> usize {
        self.block
    }

    /// Number of block rows.
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.block * self.diag.len()
    }

    pub fn lower(&self) -> &[DenseMatrix] {
        &self.lower
    }

    pub fn diag(&self) -> &[DenseMatrix] {
        &self.diag
    }

    pub fn upper(&self) -> &[DenseMatrix] {
        &self.upper
    }

    pub fn lower_mut(&mut self) -> &mut [DenseMatrix] {
        &mut self.lower
    }

    pub fn diag_mut(&mut self) -> &mut [DenseMatrix] {
        &mut self.diag
    }

    pub fn upper_mut(&mut self) -> &mut [DenseMatrix] {
        &mut self.upper
    }

    /// Block matrix-vector product.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>, LinalgError> {
        if v.len() != self.dim() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        let m = self.block;
        let n = self.len();
        let mut out = vec![0.0; v.len()];
        for i in 0..n {
            let o = &mut out[i * m..(i + 1) * m];
            if i > 0 {
                self.lower[i - 1].matvec_add(&v[(i - 1) * m..i * m], o);
            }
            self.diag[i].matvec_add(&v[i * m..(i + 1) * m], o);
            if i + 1 < n {
                self.upper[i].matvec_add(&v[(i + 1) * m..(i + 2) * m], o);
            }
        }
        Ok(out)
    }

    /// Expands into a full dense matrix. Test and debugging aid.
    pub fn to_dense(&self) -> DenseMatrix {
        let m = self.block;
        let n = self.len();
        let mut a = DenseMatrix::zeros(n * m, n * m);
        let mut put = |bi: usize, bj: usize, b: &DenseMatrix| {
            for r in 0..m {
                for c in 0..m {
                    a[(bi * m + r, bj * m + c)] = b[(r, c)];
                }
            }
        };
        for i in 0..n {
            put(i, i, &self.diag[i]);
            if i > 0 {
                put(i, i - 1, &self.lower[i - 1]);
            }
            if i + 1 < n {
                put(i, i + 1, &self.upper[i]);
            }
        }
        a
    }
}

/// Block Thomas algorithm; each block pivot is factored by dense LU with
/// partial pivoting.
pub fn block_thomas(op: &BlockTridiag, rhs: &[f64]) -> Result<Vec<f64>, LinalgError> {
    let m = op.block_size();
    let n = op.len();
    if rhs.len() != op.dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: op.dim(),
            found: rhs.len(),
        });
    }
    let mut cp: Vec<DenseMatrix> = Vec::with_capacity(n.saturating_sub(1));
    let mut dp: Vec<f64> = vec![0.0; n * m];
    for i in 0..n {
        let (pivot, mut r) = if i == 0 {
            (op.diag[0].clone(), rhs[..m].to_vec())
        } else {
            let l = &op.lower[i - 1];
            let pivot = op.diag[i].sub(&l.matmul(&cp[i - 1]));
            let ld = l.matvec(&dp[(i - 1) * m..i * m]);
            let r: Vec<f64> = rhs[i * m..(i + 1) * m]
                .iter()
                .zip(&ld)
                .map(|(b, x)| b - x)
                .collect();
            (pivot, r)
        };
        let lu = LuFactors::new(&pivot).map_err(|e| match e {
            LinalgError::Singular { .. } => LinalgError::SingularBlock { block: i },
            other => other,
        })?;
        if i + 1 < n {
            cp.push(lu.solve_matrix(&op.upper[i]));
        }
        r = lu.solve(&r);
        dp[i * m..(i + 1) * m].copy_from_slice(&r);
    }
    let mut x = dp;
    for i in (0..n.saturating_sub(1)).rev() {
        let (head, tail) = x.split_at_mut((i + 1) * m);
        let cx = cp[i].matvec(&tail[..m]);
        for (xi, c) in head[i * m..].iter_mut().zip(&cx) {
            *xi -= c;
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_returns_rhs() {
        let n = 5;
        let x = thomas(
            &vec![0.0; n - 1],
            &vec![1.0; n],
            &vec![0.0; n - 1],
            &[1., 2., 3., 4., 5.],
        )
        .unwrap();
        assert_eq!(x, vec![1., 2., 3., 4., 5.]);
    }

    #[test]
    fn three_by_three_hand_solution() {
        // [2 -1 0; -1 2 -1; 0 -1 2] x = [1 0 1]  =>  x = [1 1 1]
        let x = thomas(
            &[-1.0, -1.0],
            &[2.0, 2.0, 2.0],
            &[-1.0, -1.0],
            &[1.0, 0.0, 1.0],
        )
        .unwrap();
        for xi in x {
            assert!((xi - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_pivot_names_row() {
        let err = thomas(&[1.0], &[1.0, 1.0], &[1.0], &[0.0, 0.0]).unwrap_err();
        assert!(matches!(err, LinalgError::ZeroPivot { row: 1 }));
    }

    #[test]
    fn singular_block_names_index() {
        let z = DenseMatrix::zeros(2, 2);
        let op = BlockTridiag::new(
            vec![z.clone()],
            vec![DenseMatrix::identity(2), z.clone()],
            vec![z],
        )
        .unwrap();
        let err = block_thomas(&op, &[0.0; 4]).unwrap_err();
        assert!(matches!(err, LinalgError::SingularBlock { block: 1 }));
    }

    #[test]
    fn block_diagonal_system_decouples() {
        let a = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let b = DenseMatrix::from_rows(&[vec![4.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let z = DenseMatrix::zeros(2, 2);
        let op = BlockTridiag::new(vec![z.clone()], vec![a.clone(), b.clone()], vec![z]).unwrap();
        let rhs = [1.0, 2.0, 3.0, 4.0];
        let x = block_thomas(&op, &rhs).unwrap();
        let x0 = super::super::dense_lu_solve(&a, &rhs[..2]).unwrap();
        let x1 = super::super::dense_lu_solve(&b, &rhs[2..]).unwrap();
        assert_eq!(&x[..2], &x0[..]);
        assert_eq!(&x[2..], &x1[..]);
    }
}
