//! Singularly perturbed boundary-value problems `−E u″ + B u′ + A u = f`
//! on (0, 1) with Dirichlet data, their stability pre-checks, layer
//! envelopes and built-in reference problems.

mod builtin;
mod envelope;
mod reference;
mod spec;
mod stability;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::linalg::DenseMatrix;

pub use builtin::{
    builtin_reaction_diffusion_system, builtin_scalar_cd, builtin_strongly_coupled_example,
    builtin_weakly_coupled_cd, reaction_diffusion_default_a, reaction_diffusion_oracle,
    reaction_diffusion_problem, scalar_cd_exact, strongly_coupled_exact,
    strongly_coupled_exact_reference, strongly_coupled_oracle, verify_scalar_exact,
    weakly_coupled_oracle, WEAKLY_COUPLED_EPS,
};
pub use envelope::{envelope_check, EnvelopeFit, LayerEnvelope, LayerTerm};
pub use reference::{fine_mesh_oracle, OracleConfig, ReferenceKind, ReferenceSolution};
pub use spec::{BuiltinName, ProblemSpec};
pub use stability::{
    check_gamma, check_upsilon, GammaCheck, StabilityReport, UpsilonCheck, MONOTONE_TOL,
    SAMPLE_POINTS,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProblemError {
    #[error("invalid problem: {0}")]
    Invalid(String),
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("reference solution cannot provide {0}")]
    Unsupported(&'static str),
    #[error("reference construction failed: {0}")]
    Oracle(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    /// `B` diagonal; components couple only through `A`.
    WeaklyCoupled,
    StronglyCoupled,
    /// `−E u″ + A u = f` with `E = diag(ε_i²)`.
    ReactionDiffusion,
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProblemKind::WeaklyCoupled => "weakly-coupled",
            ProblemKind::StronglyCoupled => "strongly-coupled",
            ProblemKind::ReactionDiffusion => "reaction-diffusion",
        })
    }
}

pub type MatrixFn = Arc<dyn Fn(f64) -> DenseMatrix + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

/// Matrix-valued coefficient, constant or a pure function of x.
#[derive(Clone)]
pub enum MatrixCoef {
    Constant(DenseMatrix),
    Variable(MatrixFn),
}

impl MatrixCoef {
    pub fn eval(&self, x: f64) -> DenseMatrix {
        match self {
            MatrixCoef::Constant(m) => m.clone(),
            MatrixCoef::Variable(f) => f(x),
        }
    }

    /// Derivative in x: zero for constants, central difference otherwise.
    pub fn derivative(&self, x: f64) -> DenseMatrix {
        match self {
            MatrixCoef::Constant(m) => DenseMatrix::zeros(m.rows(), m.cols()),
            MatrixCoef::Variable(f) => {
                let d = 1e-6;
                let (lo, hi) = ((x - d).max(0.0), (x + d).min(1.0));
                f(hi).sub(&f(lo)).scaled(1.0 / (hi - lo))
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, MatrixCoef::Constant(_))
    }

    fn scale_rows(&self, d: &[f64]) -> MatrixCoef {
        let scale = |mut m: DenseMatrix, d: &[f64]| {
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    m[(i, j)] *= d[i];
                }
            }
            m
        };
        match self {
            MatrixCoef::Constant(m) => MatrixCoef::Constant(scale(m.clone(), d)),
            MatrixCoef::Variable(f) => {
                let (f, d) = (f.clone(), d.to_vec());
                MatrixCoef::Variable(Arc::new(move |x| scale(f(x), &d)))
            }
        }
    }
}

impl fmt::Debug for MatrixCoef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixCoef::Constant(m) => f.debug_tuple("Constant").field(&m.to_rows()).finish(),
            MatrixCoef::Variable(_) => f.write_str("Variable(..)"),
        }
    }
}

#[derive(Clone)]
pub enum VectorCoef {
    Constant(Vec<f64>),
    Variable(VectorFn),
}

impl VectorCoef {
    pub fn eval(&self, x: f64) -> Vec<f64> {
        match self {
            VectorCoef::Constant(v) => v.clone(),
            VectorCoef::Variable(f) => f(x),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, VectorCoef::Constant(_))
    }

    fn scale(&self, d: &[f64]) -> VectorCoef {
        match self {
            VectorCoef::Constant(v) => {
                VectorCoef::Constant(v.iter().zip(d).map(|(a, b)| a * b).collect())
            }
            VectorCoef::Variable(f) => {
                let (f, d) = (f.clone(), d.to_vec());
                VectorCoef::Variable(Arc::new(move |x| {
                    f(x).iter().zip(&d).map(|(a, b)| a * b).collect()
                }))
            }
        }
    }
}

impl fmt::Debug for VectorCoef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VectorCoef::Constant(v) => f.debug_tuple("Constant").field(v).finish(),
            VectorCoef::Variable(_) => f.write_str("Variable(..)"),
        }
    }
}

/// An M-component linear two-point BVP
/// `−E u″ + B u′ + A u = f`, `u(0) = g0`, `u(1) = g1`.
///
/// `eps` holds the perturbation parameters used for meshes and envelopes;
/// `diffusion` holds the actual diagonal of E (ε_i, or ε_i² for the
/// reaction–diffusion kind, times any row scaling).
#[derive(Debug, Clone)]
pub struct SystemProblem {
    pub name: String,
    pub kind: ProblemKind,
    eps: Vec<f64>,
    diffusion: Vec<f64>,
    b: Option<MatrixCoef>,
    a: MatrixCoef,
    f: VectorCoef,
    g0: Vec<f64>,
    g1: Vec<f64>,
    envelope: LayerEnvelope,
}

impl SystemProblem {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        kind: ProblemKind,
        eps: Vec<f64>,
        b: Option<MatrixCoef>,
        a: MatrixCoef,
        f: VectorCoef,
        g0: Vec<f64>,
        g1: Vec<f64>,
        envelope: LayerEnvelope,
    ) -> Result<Self, ProblemError> {
        let m = eps.len();
        if m == 0 {
            return Err(ProblemError::Invalid("need at least one component".into()));
        }
        if eps.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
            return Err(ProblemError::Invalid(
                "diffusion parameters must be positive".into(),
            ));
        }
        let dim = |what, found| {
            if found == m {
                Ok(())
            } else {
                Err(ProblemError::Dimension {
                    what,
                    expected: m,
                    found,
                })
            }
        };
        dim("g0", g0.len())?;
        dim("g1", g1.len())?;
        let probe = [0.0, 0.5, 1.0];
        for &x in &probe {
            let am = a.eval(x);
            dim("A rows", am.rows())?;
            dim("A cols", am.cols())?;
            dim("f", f.eval(x).len())?;
        }
        match (kind, &b) {
            (ProblemKind::ReactionDiffusion, Some(_)) => {
                return Err(ProblemError::Invalid(
                    "reaction-diffusion problems have no convection term".into(),
                ))
            }
            (ProblemKind::ReactionDiffusion, None) => {}
            (_, None) => {
                return Err(ProblemError::Invalid(
                    "convection matrix B is required".into(),
                ))
            }
            (_, Some(bc)) => {
                let samples = if bc.is_constant() { 1 } else { 101 };
                for s in 0..samples {
                    let x = if samples == 1 {
                        0.0
                    } else {
                        s as f64 / (samples - 1) as f64
                    };
                    let bm = bc.eval(x);
                    dim("B rows", bm.rows())?;
                    dim("B cols", bm.cols())?;
                    if kind == ProblemKind::WeaklyCoupled && !bm.is_diagonal() {
                        return Err(ProblemError::Invalid(format!(
                            "weakly coupled kind requires diagonal B (off-diagonal entry at x = {x})"
                        )));
                    }
                }
            }
        }
        let diffusion = match kind {
            ProblemKind::ReactionDiffusion => eps.iter().map(|e| e * e).collect(),
            _ => eps.clone(),
        };
        Ok(Self {
            name: name.into(),
            kind,
            eps,
            diffusion,
            b,
            a,
            f,
            g0,
            g1,
            envelope,
        })
    }

    pub fn m(&self) -> usize {
        self.eps.len()
    }

    /// Perturbation parameters ε_i.
    pub fn eps(&self) -> &[f64] {
        &self.eps
    }

    /// Diagonal entries of E.
    pub fn diffusion(&self) -> &[f64] {
        &self.diffusion
    }

    pub fn b(&self) -> Option<&MatrixCoef> {
        self.b.as_ref()
    }

    pub fn a(&self) -> &MatrixCoef {
        &self.a
    }

    pub fn f(&self) -> &VectorCoef {
        &self.f
    }

    pub fn g0(&self) -> &[f64] {
        &self.g0
    }

    pub fn g1(&self) -> &[f64] {
        &self.g1
    }

    pub fn envelope(&self) -> &LayerEnvelope {
        &self.envelope
    }

    /// Multiplies equation i by `d[i] > 0`. The solution is unchanged.
    pub fn scale_rows(&self, d: &[f64]) -> Result<SystemProblem, ProblemError> {
        if d.len() != self.m() {
            return Err(ProblemError::Dimension {
                what: "row scaling",
                expected: self.m(),
                found: d.len(),
            });
        }
        if d.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
            return Err(ProblemError::Invalid(
                "row scalings must be positive".into(),
            ));
        }
        let mut out = self.clone();
        out.diffusion = self.diffusion.iter().zip(d).map(|(e, s)| e * s).collect();
        out.b = self.b.as_ref().map(|b| b.scale_rows(d));
        out.a = self.a.scale_rows(d);
        out.f = self.f.scale(d);
        Ok(out)
    }
}
