use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{ProblemError, SystemProblem};
use crate::discretize::{solve_problem, Scheme};
use crate::mesh::Mesh1D;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ReferenceKind {
    Exact,
    Asymptotic {
        defect: String,
    },
    FineMesh {
        n_ref: usize,
        family: String,
        scheme: Scheme,
        /// Richardson order used against the bisected mesh, if any.
        extrapolation_order: Option<u32>,
    },
}

pub type PointFn = Arc<dyn Fn(f64, &mut [f64]) + Send + Sync>;

/// Evaluator of a reference solution at any x in [0, 1].
#[derive(Clone)]
pub struct ReferenceSolution {
    kind: ReferenceKind,
    m: usize,
    value: PointFn,
    derivative: Option<PointFn>,
}

impl fmt::Debug for ReferenceSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReferenceSolution")
            .field("kind", &self.kind)
            .field("m", &self.m)
            .field("has_derivative", &self.derivative.is_some())
            .finish()
    }
}

impl ReferenceSolution {
    pub fn new(kind: ReferenceKind, m: usize, value: PointFn, derivative: Option<PointFn>) -> Self {
        Self {
            kind,
            m,
            value,
            derivative,
        }
    }

    /// Piecewise-linear interpolant of node-major values `values[i*m + k]`.
    pub fn from_nodal(kind: ReferenceKind, points: Vec<f64>, values: Vec<f64>, m: usize) -> Self {
        assert_eq!(points.len() * m, values.len(), "nodal data size");
        let data = Arc::new((points, values));
        let d2 = data.clone();
        let value: PointFn = Arc::new(move |x, out| {
            let (p, v) = (&data.0, &data.1);
            let (i, t) = locate(p, x);
            for k in 0..m {
                out[k] = v[i * m + k] + t * (v[(i + 1) * m + k] - v[i * m + k]);
            }
        });
        // slope of the interpolant, continuous from the left at nodes
        let derivative: PointFn = Arc::new(move |x, out| {
            let (p, v) = (&d2.0, &d2.1);
            let (i, _) = locate(p, x);
            let h = p[i + 1] - p[i];
            for k in 0..m {
                out[k] = (v[(i + 1) * m + k] - v[i * m + k]) / h;
            }
        });
        Self::new(kind, m, value, Some(derivative))
    }

    pub fn kind(&self) -> &ReferenceKind {
        &self.kind
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn eval_into(&self, x: f64, out: &mut [f64]) {
        (self.value)(x, out)
    }

    pub fn eval(&self, x: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.m];
        self.eval_into(x, &mut out);
        out
    }

    pub fn has_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    pub fn derivative_into(&self, x: f64, out: &mut [f64]) -> Result<(), ProblemError> {
        match &self.derivative {
            Some(d) => {
                d(x, out);
                Ok(())
            }
            None => Err(ProblemError::Unsupported("a derivative")),
        }
    }
}

/// Cell index i with `p[i] <= x <= p[i+1]` and the local coordinate.
fn locate(p: &[f64], x: f64) -> (usize, f64) {
    let n = p.len() - 1;
    let i = p.partition_point(|&q| q < x).clamp(1, n) - 1;
    let t = ((x - p[i]) / (p[i + 1] - p[i])).clamp(0.0, 1.0);
    (i, t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub scheme: Scheme,
    /// Richardson extrapolation against the bisected mesh, `(2^p u_{2N} − u_N)/(2^p − 1)`.
    pub extrapolation_order: Option<u32>,
}

/// Fine-mesh reference: solve on `mesh` (and on its bisection when
/// extrapolating) and interpolate piecewise linearly.
pub fn fine_mesh_oracle(
    problem: &SystemProblem,
    mesh: &Mesh1D,
    config: OracleConfig,
) -> Result<ReferenceSolution, ProblemError> {
    let err = |e: &dyn fmt::Display| ProblemError::Oracle(e.to_string());
    let coarse = solve_problem(problem, mesh, config.scheme).map_err(|e| err(&e))?;
    let m = problem.m();
    let values = match config.extrapolation_order {
        None => coarse.values().to_vec(),
        Some(p) => {
            let fine_mesh = mesh.refine(2);
            let fine = solve_problem(problem, &fine_mesh, config.scheme).map_err(|e| err(&e))?;
            let w = 2f64.powi(p as i32);
            let (uc, uf) = (coarse.values(), fine.values());
            (0..uc.len())
                .map(|idx| {
                    let (i, k) = (idx / m, idx % m);
                    (w * uf[2 * i * m + k] - uc[idx]) / (w - 1.0)
                })
                .collect()
        }
    };
    let kind = ReferenceKind::FineMesh {
        n_ref: mesh.n_cells(),
        family: mesh.label().family.clone(),
        scheme: config.scheme,
        extrapolation_order: config.extrapolation_order,
    };
    Ok(ReferenceSolution::from_nodal(
        kind,
        mesh.points().to_vec(),
        values,
        m,
    ))
}
