//! JSON problem definitions: constant coefficients inline, or a built-in name.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::builtin::{
    builtin_scalar_cd, builtin_strongly_coupled_example, builtin_weakly_coupled_cd,
    reaction_diffusion_oracle, reaction_diffusion_problem, strongly_coupled_exact_reference,
    weakly_coupled_oracle,
};
use super::{
    check_gamma, LayerEnvelope, LayerTerm, MatrixCoef, ProblemError, ProblemKind,
    ReferenceSolution, SystemProblem, VectorCoef,
};
use crate::linalg::DenseMatrix;
use crate::mesh::LayerSide;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuiltinName {
    ScalarCd,
    StronglyCoupled,
    ReactionDiffusion,
    WeaklyCoupledCd,
}

impl BuiltinName {
    pub const ALL: [BuiltinName; 4] = [
        BuiltinName::ScalarCd,
        BuiltinName::StronglyCoupled,
        BuiltinName::ReactionDiffusion,
        BuiltinName::WeaklyCoupledCd,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BuiltinName::ScalarCd => "scalar-cd",
            BuiltinName::StronglyCoupled => "strongly-coupled",
            BuiltinName::ReactionDiffusion => "reaction-diffusion",
            BuiltinName::WeaklyCoupledCd => "weakly-coupled-cd",
        }
    }

    /// Number of ε values the problem takes.
    pub fn eps_count(&self, m: Option<usize>) -> usize {
        match self {
            BuiltinName::ScalarCd | BuiltinName::StronglyCoupled => 1,
            BuiltinName::ReactionDiffusion => m.unwrap_or(2),
            BuiltinName::WeaklyCoupledCd => 2,
        }
    }
}

impl fmt::Display for BuiltinName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BuiltinName {
    type Err = ProblemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| ProblemError::Invalid(format!("unknown built-in problem {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum ProblemSpec {
    Builtin {
        builtin: BuiltinName,
        eps: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m: Option<usize>,
    },
    Custom {
        #[serde(default = "default_name")]
        name: String,
        kind: ProblemKind,
        eps: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        b: Option<Vec<Vec<f64>>>,
        a: Vec<Vec<f64>>,
        f: Vec<f64>,
        g0: Vec<f64>,
        g1: Vec<f64>,
    },
}

fn default_name() -> String {
    "custom".into()
}

impl ProblemSpec {
    pub fn from_json(s: &str) -> Result<Self, ProblemError> {
        serde_json::from_str(s).map_err(|e| ProblemError::Invalid(format!("problem JSON: {e}")))
    }

    pub fn build(&self) -> Result<SystemProblem, ProblemError> {
        match self {
            ProblemSpec::Builtin { builtin, eps, m } => {
                let want = builtin.eps_count(*m);
                if eps.len() != want {
                    return Err(ProblemError::Dimension {
                        what: "epsilon list",
                        expected: want,
                        found: eps.len(),
                    });
                }
                match builtin {
                    BuiltinName::ScalarCd => Ok(builtin_scalar_cd(eps[0])?.0),
                    BuiltinName::StronglyCoupled => Ok(builtin_strongly_coupled_example(eps[0])?.0),
                    BuiltinName::ReactionDiffusion => reaction_diffusion_problem(want, eps),
                    BuiltinName::WeaklyCoupledCd => builtin_weakly_coupled_cd([eps[0], eps[1]]),
                }
            }
            ProblemSpec::Custom {
                name,
                kind,
                eps,
                b,
                a,
                f,
                g0,
                g1,
            } => {
                let matrix = |rows: &Vec<Vec<f64>>| {
                    DenseMatrix::from_rows(rows).map_err(|e| ProblemError::Invalid(e.to_string()))
                };
                let a = matrix(a)?;
                let b = b.as_ref().map(matrix).transpose()?;
                let envelope = match (&b, kind) {
                    (Some(b), ProblemKind::WeaklyCoupled) => LayerEnvelope::new(
                        eps.iter()
                            .enumerate()
                            .map(|(k, &e)| {
                                let bk = b[(k, k)];
                                let side = if bk > 0.0 {
                                    LayerSide::Right
                                } else {
                                    LayerSide::Left
                                };
                                LayerTerm::new(side, bk.abs().max(f64::MIN_POSITIVE), e)
                            })
                            .collect(),
                    ),
                    (Some(b), _) => {
                        let rate = (0..b.rows())
                            .map(|k| b[(k, k)].abs())
                            .fold(f64::INFINITY, f64::min);
                        LayerEnvelope::new(
                            eps.iter()
                                .map(|&e| {
                                    LayerTerm::new(LayerSide::Both, rate.max(f64::MIN_POSITIVE), e)
                                })
                                .collect(),
                        )
                    }
                    (None, _) => LayerEnvelope::default(),
                };
                let mut p = SystemProblem::new(
                    name.clone(),
                    *kind,
                    eps.clone(),
                    b.map(MatrixCoef::Constant),
                    MatrixCoef::Constant(a),
                    VectorCoef::Constant(f.clone()),
                    g0.clone(),
                    g1.clone(),
                    envelope,
                )?;
                if *kind == ProblemKind::ReactionDiffusion {
                    if let Ok(Some(kappa)) = check_gamma(&p).map(|g| g.kappa) {
                        p.envelope = LayerEnvelope::reaction_diffusion(kappa, eps);
                    }
                }
                Ok(p)
            }
        }
    }

    /// Exact reference when one exists, otherwise the problem's fine-mesh
    /// oracle with `n_ref` cells. Custom problems have none.
    pub fn reference(
        &self,
        problem: &SystemProblem,
        n_ref: usize,
    ) -> Result<ReferenceSolution, ProblemError> {
        match self {
            ProblemSpec::Builtin { builtin, eps, .. } => match builtin {
                BuiltinName::ScalarCd => Ok(builtin_scalar_cd(eps[0])?.1),
                BuiltinName::StronglyCoupled => Ok(strongly_coupled_exact_reference(eps[0])),
                BuiltinName::ReactionDiffusion => reaction_diffusion_oracle(problem, n_ref),
                BuiltinName::WeaklyCoupledCd => weakly_coupled_oracle(problem, n_ref),
            },
            ProblemSpec::Custom { .. } => {
                Err(ProblemError::Unsupported("a reference for custom problems"))
            }
        }
    }
}
