use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::mesh::{
    bakhvalov_shishkin, bakhvalov_type, shishkin, system_shishkin, LayerSide, Mesh1D, MeshError,
};
use crate::problems::SystemProblem;

/// Mesh families a sweep can build from a problem's layer envelope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeshFamily {
    Uniform,
    Shishkin,
    BakhvalovShishkin,
    BakhvalovType,
    SystemShishkin,
}

impl MeshFamily {
    pub const ALL: [MeshFamily; 5] = [
        MeshFamily::Uniform,
        MeshFamily::Shishkin,
        MeshFamily::BakhvalovShishkin,
        MeshFamily::BakhvalovType,
        MeshFamily::SystemShishkin,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            MeshFamily::Uniform => "uniform",
            MeshFamily::Shishkin => "shishkin",
            MeshFamily::BakhvalovShishkin => "bakhvalov-shishkin",
            MeshFamily::BakhvalovType => "bakhvalov-type",
            MeshFamily::SystemShishkin => "system-shishkin",
        }
    }

    /// Whether the error bound carries a ln N factor on this family.
    pub fn has_log_factor(&self) -> bool {
        matches!(self, MeshFamily::Shishkin | MeshFamily::SystemShishkin)
    }
}

impl fmt::Display for MeshFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MeshFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| format!("unknown mesh family {s:?}"))
    }
}

/// Mesh of `family` with N cells adapted to the problem's layers; `mu` is
/// the order parameter (σ for the system mesh).
pub fn build_mesh(
    problem: &SystemProblem,
    family: MeshFamily,
    n: usize,
    mu: f64,
) -> Result<Mesh1D, MeshError> {
    let env = problem.envelope();
    match family {
        MeshFamily::Uniform => Mesh1D::uniform(n),
        MeshFamily::Shishkin => shishkin(&env.layer_spec(mu)?, n),
        MeshFamily::BakhvalovShishkin => bakhvalov_shishkin(&env.layer_spec(mu)?, n),
        MeshFamily::BakhvalovType => bakhvalov_type(&env.layer_spec(mu)?, n),
        MeshFamily::SystemShishkin => {
            let beta = env
                .min_rate()
                .ok_or_else(|| MeshError::InvalidParameter("problem has no layer terms".into()))?;
            let eps = env.eps_list();
            match env.side() {
                Some(LayerSide::Both) => Ok(system_shishkin(&eps, mu, beta, n, true)?.mesh),
                Some(LayerSide::Right) => {
                    Ok(system_shishkin(&eps, mu, beta, n, false)?.mesh.mirror())
                }
                _ => Ok(system_shishkin(&eps, mu, beta, n, false)?.mesh),
            }
        }
    }
}
