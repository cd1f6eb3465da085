use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use spbvp::discretize::{solve_problem, Scheme};
use spbvp::harness::{build_mesh, sweep, MeshFamily, ReportFormat, StudyConfig, DEFAULT_MU};
use spbvp::mesh::{
    bakhvalov_monitor, bakhvalov_original, bakhvalov_shishkin, bakhvalov_type, diagnostics,
    duran_lombardi, equidistribute, gartland, lambert_mesh_with, shishkin, system_shishkin,
    DuranLombardiVariant, GartlandVariant, LambertForm, LayerSide, LayerSpec, Mesh1D,
    DEFAULT_MONITOR_K,
};
use spbvp::problems::{BuiltinName, ProblemSpec, StabilityReport};

const EXIT_FAILURE: u8 = 2;
const EXIT_CONFIG: u8 = 3;

#[derive(Parser)]
#[command(
    name = "spbvp",
    version,
    about = "Layer-adapted meshes and solvers for singularly perturbed BVPs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a mesh as CSV `i,x_i,h_i` with a diagnostics footer.
    Mesh(MeshArgs),
    /// Solve a problem and print CSV `x,u_1..u_M`.
    Solve(SolveArgs),
    /// Print the Γ/Υ stability report of a JSON problem definition.
    Check(CheckArgs),
    /// Run an (N, ε) convergence study from a JSON config.
    Study(StudyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Generator {
    Uniform,
    Shishkin,
    BakhvalovShishkin,
    BakhvalovType,
    Bakhvalov,
    Lambert,
    LambertLiteral,
    Gartland,
    GartlandType,
    DuranLombardi,
    DuranLombardiUniformStart,
    Equidistributed,
    SystemShishkin,
}

#[derive(Args)]
struct MeshArgs {
    #[arg(long, value_enum)]
    family: Generator,
    /// Perturbation parameter; comma-separated ascending list for system-shishkin.
    #[arg(long, value_delimiter = ',', default_value = "1e-4")]
    eps: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Order parameter μ (σ for system-shishkin).
    #[arg(long, default_value_t = DEFAULT_MU)]
    mu: f64,
    /// Number of cells for the fixed-N families.
    #[arg(short = 'n', long = "n", default_value_t = 64)]
    n: usize,
    /// Coarse step H for the recursive families.
    #[arg(long = "coarse-h", default_value_t = 1.0 / 16.0)]
    coarse_h: f64,
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
    /// Bakhvalov's q.
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    /// Monitor scale K̃ for the equidistributed mesh.
    #[arg(long = "monitor-k", default_value_t = DEFAULT_MONITOR_K)]
    monitor_k: f64,
    #[arg(long, default_value = "left")]
    side: LayerSide,
}

#[derive(Args)]
struct SolveArgs {
    /// Built-in problem name or path to a JSON problem definition.
    #[arg(long)]
    problem: String,
    /// ε values for a built-in problem (comma-separated).
    #[arg(long, value_delimiter = ',')]
    eps: Vec<f64>,
    /// System size for the reaction-diffusion built-in.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value = "shishkin")]
    mesh: MeshFamily,
    #[arg(short = 'n', long = "n", default_value_t = 64)]
    n: usize,
    #[arg(long, default_value_t = DEFAULT_MU)]
    mu: f64,
    #[arg(long, default_value = "simple-upwind")]
    scheme: Scheme,
}

#[derive(Args)]
struct CheckArgs {
    /// JSON problem definition (`-` reads stdin).
    problem: PathBuf,
    /// Weights C_i for the Υ check (comma-separated).
    #[arg(long, value_delimiter = ',')]
    constants: Vec<f64>,
}

#[derive(Args)]
struct StudyArgs {
    config: PathBuf,
    /// Overrides the config's output path; `-` writes to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

enum Failure {
    Config(String),
    Run(String),
}

fn config<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Config(e.to_string())
}

fn run_err<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Run(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Mesh(a) => mesh_cmd(&a),
        Command::Solve(a) => solve_cmd(&a),
        Command::Check(a) => check_cmd(&a),
        Command::Study(a) => study_cmd(&a),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}

fn read_input(path: &std::path::Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(config)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
    }
}

fn mesh_cmd(a: &MeshArgs) -> Result<ExitCode, Failure> {
    let eps = *a.eps.first().ok_or_else(|| config("--eps is empty"))?;
    let spec = || LayerSpec::new(eps, a.gamma, a.mu, a.side).map_err(config);
    let mesh = match a.family {
        Generator::Uniform => Mesh1D::uniform(a.n).map_err(config)?,
        Generator::Shishkin => shishkin(&spec()?, a.n).map_err(config)?,
        Generator::BakhvalovShishkin => bakhvalov_shishkin(&spec()?, a.n).map_err(config)?,
        Generator::BakhvalovType => bakhvalov_type(&spec()?, a.n).map_err(config)?,
        Generator::Bakhvalov => bakhvalov_original(&spec()?, a.n, a.q).map_err(config)?.mesh,
        Generator::Lambert => {
            lambert_mesh_with(&spec()?, a.n, LambertForm::Decaying).map_err(config)?
        }
        Generator::LambertLiteral => {
            lambert_mesh_with(&spec()?, a.n, LambertForm::Literal).map_err(config)?
        }
        Generator::Gartland => {
            gartland(&spec()?, a.coarse_h, GartlandVariant::Gartland).map_err(config)?
        }
        Generator::GartlandType => {
            gartland(&spec()?, a.coarse_h, GartlandVariant::GartlandType).map_err(config)?
        }
        Generator::DuranLombardi => duran_lombardi(
            &spec()?,
            a.coarse_h,
            a.kappa,
            DuranLombardiVariant::Geometric,
        )
        .map_err(config)?,
        Generator::DuranLombardiUniformStart => duran_lombardi(
            &spec()?,
            a.coarse_h,
            a.kappa,
            DuranLombardiVariant::InitialUniform,
        )
        .map_err(config)?,
        Generator::Equidistributed => {
            let s = spec()?;
            let left = bakhvalov_monitor(&s, a.monitor_k);
            let e = match a.side {
                LayerSide::Left => equidistribute(&left, a.n, 100, 1e-8),
                LayerSide::Right => equidistribute(|x| left(1.0 - x), a.n, 100, 1e-8),
                LayerSide::Both => equidistribute(|x| left(x).max(left(1.0 - x)), a.n, 100, 1e-8),
            }
            .map_err(config)?;
            if !e.converged {
                eprintln!(
                    "warning: equidistribution stopped at residual {:.3e}",
                    e.residual
                );
            }
            e.mesh
        }
        Generator::SystemShishkin => {
            let mirrored = a.side == LayerSide::Both;
            let m = system_shishkin(&a.eps, a.mu, a.gamma, a.n, mirrored)
                .map_err(config)?
                .mesh;
            if a.side == LayerSide::Right {
                m.mirror()
            } else {
                m
            }
        }
    };
    let (g, side) = (a.gamma, a.side);
    let envelope = move |x: f64| {
        let layer = |d: f64| a.gamma / eps * (-g * d / eps).exp();
        1.0 + match side {
            LayerSide::Left => layer(x),
            LayerSide::Right => layer(1.0 - x),
            LayerSide::Both => layer(x) + layer(1.0 - x),
        }
    };
    let diag = diagnostics(&mesh, Some(&envelope)).map_err(run_err)?;
    for w in &mesh.label().warnings {
        eprintln!("warning: {w}");
    }
    out(&format!("{}{}", mesh.to_csv(), diag.to_footer()));
    Ok(ExitCode::SUCCESS)
}

fn solve_cmd(a: &SolveArgs) -> Result<ExitCode, Failure> {
    let spec = match a.problem.parse::<BuiltinName>() {
        Ok(builtin) => ProblemSpec::Builtin {
            builtin,
            eps: a.eps.clone(),
            m: a.m,
        },
        Err(_) => ProblemSpec::from_json(&read_input(a.problem.as_ref())?).map_err(config)?,
    };
    let problem = spec.build().map_err(config)?;
    let mesh = build_mesh(&problem, a.mesh, a.n, a.mu).map_err(config)?;
    let sol = solve_problem(&problem, &mesh, a.scheme).map_err(run_err)?;
    out(&sol.to_csv());
    Ok(ExitCode::SUCCESS)
}

fn check_cmd(a: &CheckArgs) -> Result<ExitCode, Failure> {
    let problem = ProblemSpec::from_json(&read_input(&a.problem)?)
        .and_then(|s| s.build())
        .map_err(config)?;
    let constants = (!a.constants.is_empty()).then_some(a.constants.as_slice());
    let report = StabilityReport::for_problem(&problem, constants).map_err(config)?;
    out(&format!("{}\n", report.to_json()));
    Ok(ExitCode::SUCCESS)
}

fn study_cmd(a: &StudyArgs) -> Result<ExitCode, Failure> {
    let cfg = StudyConfig::from_json(&read_input(&a.config)?).map_err(config)?;
    let output = a
        .output
        .clone()
        .or_else(|| cfg.output.as_ref().map(PathBuf::from));
    let format = match a.format {
        Some(Format::Csv) => ReportFormat::Csv,
        Some(Format::Json) => ReportFormat::Json,
        None => cfg.format.unwrap_or_else(|| match &output {
            Some(p) if p.extension().is_some_and(|e| e == "json") => ReportFormat::Json,
            _ => ReportFormat::Csv,
        }),
    };
    let report = sweep(&cfg).map_err(config)?;
    match output {
        Some(p) if p.as_os_str() != "-" => report.write_to(format, &p).map_err(run_err)?,
        _ => out(&report.emit(format)),
    }
    for u in &report.uniform {
        eprintln!(
            "N={:<6} E={:<13} raw={:<8} corrected={}",
            u.n,
            fmt_opt(u.error, 4),
            fmt_opt(u.rate_raw, 3),
            fmt_opt(u.rate_corrected, 3)
        );
    }
    if let Some(r) = report.c_star_ratio {
        eprintln!("C* max/min = {r:.3}");
    }
    for inv in &report.inversions {
        eprintln!("note: {inv}");
    }
    if report.failures > 0 {
        for r in report.records.iter().filter(|r| r.failure.is_some()) {
            eprintln!(
                "failed N={} eps={:?}: {}",
                r.n,
                r.eps,
                r.failure.as_deref().unwrap_or("")
            );
        }
        return Ok(ExitCode::from(EXIT_FAILURE));
    }
    Ok(ExitCode::SUCCESS)
}

/// Writes to stdout; a closed pipe downstream is not an error.
fn out(s: &str) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(s.as_bytes()).and_then(|_| stdout.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: writing output: {e}");
        }
    }
}

fn fmt_opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.digits$e}"))
}
