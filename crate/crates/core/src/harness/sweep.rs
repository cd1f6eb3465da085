use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{ConvergenceReport, ErrorRecord, Norm, RateTarget, ReportFormat};
use super::{build_mesh, max_norm_error, HarnessError, MeshFamily};
use crate::discretize::{energy_error, solve_problem, Scheme};
use crate::mesh::{bakhvalov_type, diagnostics, LayerSide, LayerSpec};
use crate::problems::{
    builtin_scalar_cd, builtin_strongly_coupled_example, fine_mesh_oracle,
    reaction_diffusion_oracle, strongly_coupled_exact_reference, strongly_coupled_oracle,
    weakly_coupled_oracle, BuiltinName, OracleConfig, ProblemError, ProblemSpec, ReferenceSolution,
    SystemProblem,
};

pub const WORKERS_ENV: &str = "SPBVP_WORKERS";
pub const DEFAULT_N: [usize; 5] = [64, 128, 256, 512, 1024];
pub const DEFAULT_EPS: [f64; 5] = [1e-2, 1e-4, 1e-6, 1e-8, 1e-10];
/// At μ = 1 upwind on the Bakhvalov families keeps a visible ln N factor.
pub const DEFAULT_MU: f64 = 2.0;

/// Worker threads for sweeps: `SPBVP_WORKERS` if set to a positive
/// integer, otherwise the available parallelism.
pub fn worker_count() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EpsValue {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl EpsValue {
    pub fn to_vec(&self) -> Vec<f64> {
        match self {
            EpsValue::Scalar(e) => vec![*e],
            EpsValue::Vector(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReferenceChoice {
    /// Exact where a closed form exists, otherwise the fine-mesh oracle.
    #[default]
    Auto,
    Exact,
    Asymptotic,
    Oracle,
}

fn default_n() -> Vec<usize> {
    DEFAULT_N.to_vec()
}

fn default_eps() -> Vec<EpsValue> {
    DEFAULT_EPS.iter().map(|&e| EpsValue::Scalar(e)).collect()
}

fn default_oracle_factor() -> usize {
    16
}

/// A convergence study; also the JSON document read by `spbvp study`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    pub problem: BuiltinName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub scheme: Scheme,
    pub mesh: MeshFamily,
    /// Mesh order parameter (σ for the system mesh).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(rename = "N_list", alias = "n_list", default = "default_n")]
    pub n_list: Vec<usize>,
    #[serde(default = "default_eps")]
    pub eps_list: Vec<EpsValue>,
    #[serde(default)]
    pub norm: Norm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<RateTarget>,
    #[serde(default)]
    pub reference: ReferenceChoice,
    /// Oracle resolution N_ref = factor · max N.
    #[serde(default = "default_oracle_factor")]
    pub oracle_factor: usize,
    /// Also compute the energy-norm error (implied by `norm: energy`).
    #[serde(default)]
    pub energy: bool,
    /// Mesh quality `max_k ∫(1 + |u′|)` per record.
    #[serde(default)]
    pub quality: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<ReportFormat>,
}

impl StudyConfig {
    pub fn new(problem: BuiltinName, scheme: Scheme, mesh: MeshFamily) -> Self {
        Self {
            problem,
            m: None,
            scheme,
            mesh,
            mu: None,
            n_list: default_n(),
            eps_list: default_eps(),
            norm: Norm::Max,
            target: None,
            reference: ReferenceChoice::Auto,
            oracle_factor: default_oracle_factor(),
            energy: false,
            quality: false,
            output: None,
            format: None,
        }
    }

    pub fn from_json(s: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(s).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn mu(&self) -> f64 {
        self.mu.unwrap_or(DEFAULT_MU)
    }

    pub fn target(&self) -> RateTarget {
        self.target.unwrap_or_else(|| {
            RateTarget::for_order(self.scheme.order(), self.mesh.has_log_factor())
        })
    }

    fn spec(&self, eps: &[f64]) -> ProblemSpec {
        ProblemSpec::Builtin {
            builtin: self.problem,
            eps: eps.to_vec(),
            m: self.m,
        }
    }

    fn validate(&self) -> Result<(), HarnessError> {
        let bad = |s: &str| Err(HarnessError::Config(s.into()));
        if self.n_list.is_empty() || self.eps_list.is_empty() {
            return bad("N_list and eps_list must be nonempty");
        }
        if self.n_list.windows(2).any(|w| w[1] <= w[0]) {
            return bad("N_list must be strictly increasing");
        }
        if self.oracle_factor < 2 {
            return bad("oracle_factor must be at least 2");
        }
        if let Some(mu) = self.mu {
            if !(mu > 0.0) {
                return bad("mu must be positive");
            }
        }
        for e in &self.eps_list {
            self.spec(&e.to_vec())
                .build()
                .map_err(|err| HarnessError::Config(err.to_string()))?;
        }
        Ok(())
    }
}

/// Reference of the requested kind for a built-in problem.
pub fn reference_for(
    builtin: BuiltinName,
    problem: &SystemProblem,
    choice: ReferenceChoice,
    n_ref: usize,
) -> Result<ReferenceSolution, ProblemError> {
    let eps = problem.eps();
    match (choice, builtin) {
        (ReferenceChoice::Auto | ReferenceChoice::Exact, BuiltinName::ScalarCd) => {
            Ok(builtin_scalar_cd(eps[0])?.1)
        }
        (ReferenceChoice::Auto | ReferenceChoice::Exact, BuiltinName::StronglyCoupled) => {
            Ok(strongly_coupled_exact_reference(eps[0]))
        }
        (ReferenceChoice::Exact, _) => Err(ProblemError::Unsupported(
            "an exact solution for this problem",
        )),
        (ReferenceChoice::Asymptotic, BuiltinName::StronglyCoupled) => {
            Ok(builtin_strongly_coupled_example(eps[0])?.1)
        }
        (ReferenceChoice::Asymptotic, _) => Err(ProblemError::Unsupported(
            "an asymptotic solution for this problem",
        )),
        (_, BuiltinName::ReactionDiffusion) => reaction_diffusion_oracle(problem, n_ref),
        (_, BuiltinName::WeaklyCoupledCd) => weakly_coupled_oracle(problem, n_ref),
        (ReferenceChoice::Oracle, BuiltinName::StronglyCoupled) => {
            strongly_coupled_oracle(problem, n_ref)
        }
        (ReferenceChoice::Oracle, BuiltinName::ScalarCd) => {
            let env = problem.envelope();
            let spec = LayerSpec::new(
                eps[0],
                env.min_rate().unwrap_or(1.0),
                1.0,
                env.side().unwrap_or(LayerSide::Right),
            )
            .map_err(|e| ProblemError::Oracle(e.to_string()))?;
            let mesh =
                bakhvalov_type(&spec, n_ref).map_err(|e| ProblemError::Oracle(e.to_string()))?;
            fine_mesh_oracle(
                problem,
                &mesh,
                OracleConfig {
                    scheme: Scheme::SimpleUpwind,
                    extrapolation_order: Some(1),
                },
            )
        }
    }
}

/// Runs every (N, ε) cell in parallel on `worker_count()` threads. Config
/// errors are returned; per-cell failures are recorded in the report.
pub fn sweep(config: &StudyConfig) -> Result<ConvergenceReport, HarnessError> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count())
        .build()
        .map_err(|e| HarnessError::Config(e.to_string()))?;
    Ok(pool.install(|| run(config)))
}

fn run(config: &StudyConfig) -> ConvergenceReport {
    let eps_list: Vec<Vec<f64>> = config.eps_list.iter().map(EpsValue::to_vec).collect();
    let n_ref = config.oracle_factor * config.n_list.iter().copied().max().unwrap_or(1);
    let setups: Vec<Result<(SystemProblem, ReferenceSolution), String>> = eps_list
        .par_iter()
        .map(|eps| {
            let problem = config.spec(eps).build().map_err(|e| e.to_string())?;
            let reference = reference_for(config.problem, &problem, config.reference, n_ref)
                .map_err(|e| e.to_string())?;
            Ok((problem, reference))
        })
        .collect();
    let ne = eps_list.len();
    let cells: Vec<(usize, usize)> = (0..config.n_list.len())
        .flat_map(|ni| (0..ne).map(move |ei| (ni, ei)))
        .collect();
    let records: Vec<ErrorRecord> = cells
        .par_iter()
        .map(|&(ni, ei)| cell(config, config.n_list[ni], &eps_list[ei], &setups[ei]))
        .collect();
    ConvergenceReport::from_records(
        config.mesh.to_string(),
        config.scheme,
        config.norm,
        config.target(),
        config.n_list.clone(),
        eps_list,
        records,
    )
}

fn cell(
    config: &StudyConfig,
    n: usize,
    eps: &[f64],
    setup: &Result<(SystemProblem, ReferenceSolution), String>,
) -> ErrorRecord {
    let mut rec = ErrorRecord {
        family: config.mesh.to_string(),
        scheme: config.scheme,
        n,
        eps: eps.to_vec(),
        err_max: None,
        err_energy: None,
        quality: None,
        failure: None,
    };
    let (problem, reference) = match setup {
        Ok(s) => s,
        Err(e) => {
            rec.failure = Some(format!("reference: {e}"));
            return rec;
        }
    };
    let mesh = match build_mesh(problem, config.mesh, n, config.mu()) {
        Ok(m) => m,
        Err(e) => {
            rec.failure = Some(format!("mesh: {e}"));
            return rec;
        }
    };
    let sol = match solve_problem(problem, &mesh, config.scheme) {
        Ok(s) => s,
        Err(e) => {
            rec.failure = Some(format!("solve: {e}"));
            return rec;
        }
    };
    rec.err_max = Some(max_norm_error(&sol, reference));
    if config.energy || config.norm == Norm::Energy {
        match energy_error(&sol, reference, problem.diffusion()) {
            Ok(e) => rec.err_energy = Some(e),
            Err(e) => rec.failure = Some(format!("energy: {e}")),
        }
    }
    if config.quality && reference.has_derivative() {
        let m = reference.m();
        let g = |x: f64| {
            let mut du = vec![0.0; m];
            let _ = reference.derivative_into(x, &mut du);
            1.0 + du.iter().fold(0.0f64, |a, v| a.max(v.abs()))
        };
        rec.quality = diagnostics(&mesh, Some(&g)).ok().and_then(|d| d.quality);
    }
    rec
}
