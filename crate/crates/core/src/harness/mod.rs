//! Error norms, (N, ε) convergence sweeps, rate fitting and reporting.

mod meshes;
mod report;
mod sweep;

use crate::discretize::DiscreteSolution;
use crate::problems::ReferenceSolution;

pub use meshes::{build_mesh, MeshFamily};
pub use report::{
    corrected_rate, raw_rate, ConvergenceReport, ErrorRecord, Norm, RateTarget, ReportFormat,
    UniformPoint, CSV_HEADER,
};
pub use sweep::{
    reference_for, sweep, worker_count, EpsValue, ReferenceChoice, StudyConfig, DEFAULT_EPS,
    DEFAULT_MU, DEFAULT_N, WORKERS_ENV,
};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

/// `max_i max_k |u_k(x_i) − u_{i,k}|`.
pub fn max_norm_error(sol: &DiscreteSolution, reference: &ReferenceSolution) -> f64 {
    let m = sol.m();
    let mut u = vec![0.0; m];
    let mut err: f64 = 0.0;
    for (i, &x) in sol.mesh().points().iter().enumerate() {
        reference.eval_into(x, &mut u);
        for (a, b) in u.iter().zip(sol.at_node(i)) {
            err = err.max((a - b).abs());
        }
    }
    err
}
