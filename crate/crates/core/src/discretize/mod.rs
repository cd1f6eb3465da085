//! Finite-difference and linear finite-element discretizations on arbitrary
//! meshes, assembled into block-tridiagonal systems with one M×M block per
//! node. Boundary rows are identity blocks carrying g0 and g1.

mod assemble;
mod energy;
mod ias;
mod stencil;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::linalg::{block_thomas, BlockTridiag, LinalgError};
use crate::mesh::Mesh1D;
use crate::problems::SystemProblem;

pub use assemble::assemble;
pub use energy::{energy_error, energy_norm, energy_norm_system};
pub use ias::{fitting_factor, ias_assemble, ias_assemble_with, IasFitting, COTH_SERIES_SWITCH};
pub use stencil::{diff_ops, DiffOps};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DiscretizeError {
    #[error("scheme {scheme} is not applicable: {reason}")]
    Incompatible { scheme: Scheme, reason: String },
    #[error("IAS needs a uniform mesh")]
    NotUniform,
    #[error("B is not symmetric at node {node} (residual {residual:e})")]
    NotSymmetric { node: usize, residual: f64 },
    #[error("vector length {found} does not match operator dimension {expected}")]
    Dimension { expected: usize, found: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("{0}")]
    Reference(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    SimpleUpwind,
    MidpointUpwind,
    Central,
    Ias,
    GalerkinFem,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [
        Scheme::SimpleUpwind,
        Scheme::MidpointUpwind,
        Scheme::Central,
        Scheme::Ias,
        Scheme::GalerkinFem,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::SimpleUpwind => "simple-upwind",
            Scheme::MidpointUpwind => "midpoint-upwind",
            Scheme::Central => "central",
            Scheme::Ias => "ias",
            Scheme::GalerkinFem => "galerkin-fem",
        }
    }

    /// Formal order, used as the default mesh parameter μ.
    pub fn order(&self) -> u32 {
        match self {
            Scheme::Central => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| format!("unknown scheme {s:?}"))
    }
}

/// Assembled linear system `op · u = rhs`, node-major unknowns `u[i*M + k]`.
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    pub(crate) op: BlockTridiag,
    pub(crate) rhs: Vec<f64>,
    pub(crate) mesh: Mesh1D,
    pub(crate) scheme: Scheme,
    pub(crate) problem: String,
    pub(crate) warnings: Vec<String>,
}

impl DiscreteOperator {
    pub fn matrix(&self) -> &BlockTridiag {
        &self.op
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn m(&self) -> usize {
        self.op.block_size()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn solve(&self) -> Result<DiscreteSolution, DiscretizeError> {
        let values = block_thomas(&self.op, &self.rhs)?;
        let residual = backward_error(self, &values)?;
        Ok(DiscreteSolution {
            mesh: self.mesh.clone(),
            m: self.m(),
            values,
            problem: self.problem.clone(),
            scheme: self.scheme,
            residual,
        })
    }
}

/// Block-tridiagonal product `op · v`.
pub fn apply(op: &DiscreteOperator, v: &[f64]) -> Result<Vec<f64>, DiscretizeError> {
    if v.len() != op.op.dim() {
        return Err(DiscretizeError::Dimension {
            expected: op.op.dim(),
            found: v.len(),
        });
    }
    Ok(op.op.apply(v)?)
}

/// `‖A u − b‖∞ / (‖A‖∞ ‖u‖∞ + ‖b‖∞)`; the absolute residual would scale
/// with the ε/h² entries of strongly graded meshes.
fn backward_error(op: &DiscreteOperator, u: &[f64]) -> Result<f64, DiscretizeError> {
    let au = apply(op, u)?;
    let r = au
        .iter()
        .zip(&op.rhs)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let m = op.m();
    let mut norm_a: f64 = 0.0;
    for i in 0..op.op.len() {
        for k in 0..m {
            let mut row = op.op.diag()[i].row(k).iter().map(|x| x.abs()).sum::<f64>();
            if i > 0 {
                row += op.op.lower()[i - 1]
                    .row(k)
                    .iter()
                    .map(|x| x.abs())
                    .sum::<f64>();
            }
            if i + 1 < op.op.len() {
                row += op.op.upper()[i].row(k).iter().map(|x| x.abs()).sum::<f64>();
            }
            norm_a = norm_a.max(row);
        }
    }
    let nu = u.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let nb = op.rhs.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let denom = norm_a * nu + nb;
    Ok(if denom > 0.0 { r / denom } else { r })
}

/// Nodal solution with provenance.
#[derive(Debug, Clone)]
pub struct DiscreteSolution {
    mesh: Mesh1D,
    m: usize,
    values: Vec<f64>,
    pub problem: String,
    pub scheme: Scheme,
    /// Normwise backward error of the linear solve.
    pub residual: f64,
}

impl DiscreteSolution {
    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Node-major values, `values()[i*M + k] = u_k(x_i)`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at_node(&self, i: usize) -> &[f64] {
        &self.values[i * self.m..(i + 1) * self.m]
    }

    pub fn component(&self, k: usize) -> Vec<f64> {
        self.values
            .iter()
            .skip(k)
            .step_by(self.m)
            .copied()
            .collect()
    }

    /// CSV `x,u_1,...,u_M`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x");
        for k in 1..=self.m {
            s.push_str(&format!(",u_{k}"));
        }
        s.push('\n');
        for (i, x) in self.mesh.points().iter().enumerate() {
            s.push_str(&format!("{x:.17e}"));
            for v in self.at_node(i) {
                s.push_str(&format!(",{v:.17e}"));
            }
            s.push('\n');
        }
        s
    }
}

/// Assembles with `scheme` (IAS dispatches to [`ias_assemble`]) and solves.
pub fn solve_problem(
    problem: &SystemProblem,
    mesh: &Mesh1D,
    scheme: Scheme,
) -> Result<DiscreteSolution, DiscretizeError> {
    let op = match scheme {
        Scheme::Ias => ias_assemble(problem, mesh)?,
        _ => assemble(problem, mesh, scheme)?,
    };
    op.solve()
}
