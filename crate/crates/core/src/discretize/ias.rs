//! Il'in–Allen–Southwell scheme for systems with symmetric B on uniform meshes.

use serde::{Deserialize, Serialize};

use super::assemble::central_kernel;
use super::{DiscreteOperator, DiscretizeError, Scheme};
use crate::linalg::{jacobi_eigh, DenseMatrix};
use crate::mesh::Mesh1D;
use crate::problems::SystemProblem;

/// Below this |ρ| the fitting factor uses its Taylor series.
pub const COTH_SERIES_SWITCH: f64 = 1e-4;
const SYMMETRY_TOL: f64 = 1e-10;
const UNIFORM_RTOL: f64 = 1e-9;

/// `σ(ρ) = ρ coth ρ`, with `1 + ρ²/3 − ρ⁴/45` near 0.
pub fn fitting_factor(rho: f64) -> f64 {
    if rho.abs() < COTH_SERIES_SWITCH {
        let r2 = rho * rho;
        1.0 + r2 / 3.0 - r2 * r2 / 45.0
    } else {
        rho / rho.tanh()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IasFitting {
    #[default]
    Exact,
    /// All σ = 1; reproduces the central scheme.
    Unit,
}

pub fn ias_assemble(
    problem: &SystemProblem,
    mesh: &Mesh1D,
) -> Result<DiscreteOperator, DiscretizeError> {
    ias_assemble_with(problem, mesh, IasFitting::Exact)
}

/// Rows `−ε P diag(σ) Pᵀ D⁺D⁻u + B D⁰u + A u = f` with `B(x_i) = P diag(λ) Pᵀ`
/// and `σ_j = σ(λ_j h/(2ε))`. Requires a uniform mesh, a common diffusion
/// coefficient ε and symmetric B at every node.
pub fn ias_assemble_with(
    problem: &SystemProblem,
    mesh: &Mesh1D,
    fitting: IasFitting,
) -> Result<DiscreteOperator, DiscretizeError> {
    let incompatible = |reason: &str| DiscretizeError::Incompatible {
        scheme: Scheme::Ias,
        reason: reason.into(),
    };
    if problem.b().is_none() {
        return Err(incompatible("needs a convection matrix"));
    }
    if !mesh.is_uniform(UNIFORM_RTOL) {
        return Err(DiscretizeError::NotUniform);
    }
    let d = problem.diffusion();
    let eps = d[0];
    if d.iter().any(|&e| (e - eps).abs() > 1e-14 * eps) {
        return Err(incompatible("needs a common diffusion coefficient"));
    }
    let h = 1.0 / mesh.n_cells() as f64;
    let m = problem.m();
    central_kernel(problem, mesh, Scheme::Ias, |node, b| {
        let b = b.expect("checked above");
        let residual = b.symmetry_residual();
        if residual > SYMMETRY_TOL * b.max_abs().max(1.0) {
            return Err(DiscretizeError::NotSymmetric { node, residual });
        }
        match fitting {
            IasFitting::Unit => Ok(DenseMatrix::identity(m).scaled(eps)),
            IasFitting::Exact => {
                let eig = jacobi_eigh(b)?;
                let sigma: Vec<f64> = eig
                    .values
                    .iter()
                    .map(|&l| fitting_factor(l * h / (2.0 * eps)))
                    .collect();
                Ok(eig.reassemble_with(&sigma).scaled(eps))
            }
        }
    })
}
