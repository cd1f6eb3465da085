//! Direct solvers and small dense kernels.
//!
//! Everything here is sized for one-dimensional problems: block sizes are the
//! number of coupled components (a handful), block counts the number of mesh
//! nodes. There are no iterative methods.

mod dense;
mod eigen;
mod tridiag;

pub use dense::{dense_inverse, dense_lu_solve, DenseMatrix, LuFactors, PIVOT_FLOOR};
pub use eigen::{jacobi_eigh, EigenPair, SYMMETRY_TOL};
pub use tridiag::{block_thomas, thomas, BlockTridiag};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("empty system")]
    Empty,
    #[error("zero pivot in row {row}")]
    ZeroPivot { row: usize },
    #[error("matrix is singular (pivot column {index})")]
    Singular { index: usize },
    #[error("singular pivot block at block row {block}")]
    SingularBlock { block: usize },
    #[error("matrix is not symmetric (residual {residual:e})")]
    NotSymmetric { residual: f64 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
}
