use std::sync::Arc;

use super::{
    check_gamma, fine_mesh_oracle, LayerEnvelope, LayerTerm, MatrixCoef, OracleConfig,
    ProblemError, ProblemKind, ReferenceKind, ReferenceSolution, SystemProblem, VectorCoef,
};
use crate::discretize::Scheme;
use crate::linalg::DenseMatrix;
use crate::mesh::{system_shishkin, LayerSide, Mesh1D};

/// ε pairs (ε₁, ε₂) used for the weakly coupled convection–diffusion study.
pub const WEAKLY_COUPLED_EPS: [[f64; 2]; 3] = [[1e-4, 1e-2], [1e-6, 1e-3], [1e-8, 1e-4]];

/// `(u, u′, u″)` of `−εu″ + λu′ = c`, `u(0) = u(1) = 0`, for `λ ≠ 0`.
/// The layer sits at x = 1 for λ > 0 and at x = 0 for λ < 0.
pub fn scalar_cd_exact(eps: f64, lambda: f64, c: f64, x: f64) -> [f64; 3] {
    let (y, sign) = if lambda > 0.0 {
        (x, 1.0)
    } else {
        (1.0 - x, -1.0)
    };
    let lam = lambda.abs();
    let a = lam / eps;
    let scale = c / lam;
    let denom = -(-a).exp_m1();
    let e = (-a * (1.0 - y)).exp();
    let u = scale * (y - (e - (-a).exp()) / denom);
    let du = scale * (1.0 - a * e / denom);
    let d2u = -scale * a * a * e / denom;
    [u, sign * du, d2u]
}

/// Largest relative residual of `−εu″ + u′ − 1` over 10³ interior points,
/// each scaled by `1 + |εu″| + |u′|`.
pub fn verify_scalar_exact(eps: f64) -> f64 {
    (1..1000)
        .map(|i| {
            let x = i as f64 / 1000.0;
            let [_, du, d2u] = scalar_cd_exact(eps, 1.0, 1.0, x);
            let r = -eps * d2u + du - 1.0;
            r.abs() / (1.0 + (eps * d2u).abs() + du.abs())
        })
        .fold(0.0, f64::max)
}

fn constant(rows: &[Vec<f64>]) -> MatrixCoef {
    MatrixCoef::Constant(DenseMatrix::from_rows(rows).expect("static matrix"))
}

/// `−εu″ + u′ = 1`, `u(0) = u(1) = 0`, with its closed-form solution.
pub fn builtin_scalar_cd(eps: f64) -> Result<(SystemProblem, ReferenceSolution), ProblemError> {
    let problem = SystemProblem::new(
        "scalar-cd",
        ProblemKind::WeaklyCoupled,
        vec![eps],
        Some(constant(&[vec![1.0]])),
        constant(&[vec![0.0]]),
        VectorCoef::Constant(vec![1.0]),
        vec![0.0],
        vec![0.0],
        LayerEnvelope::new(vec![LayerTerm::new(LayerSide::Right, 1.0, eps)]),
    )?;
    let residual = verify_scalar_exact(eps);
    if !(residual <= 1e-10) {
        return Err(ProblemError::Invalid(format!(
            "closed form fails its residual check at eps = {eps}: {residual:e}"
        )));
    }
    let reference = ReferenceSolution::new(
        ReferenceKind::Exact,
        1,
        Arc::new(move |x, out| out[0] = scalar_cd_exact(eps, 1.0, 1.0, x)[0]),
        Some(Arc::new(move |x, out| {
            out[0] = scalar_cd_exact(eps, 1.0, 1.0, x)[1]
        })),
    );
    Ok((problem, reference))
}

const SQRT5: f64 = 2.236_067_977_499_79;

/// Exact solution of the strongly coupled example and its derivative, by
/// diagonalizing B: `w₁ = (2u₁ + u₂)/√5` sees eigenvalue −5 and
/// `w₂ = (−u₁ + 2u₂)/√5` sees +5.
pub fn strongly_coupled_exact(eps: f64, x: f64) -> ([f64; 2], [f64; 2]) {
    let w1 = scalar_cd_exact(eps, -5.0, 4.0 / SQRT5, x);
    let w2 = scalar_cd_exact(eps, 5.0, 3.0 / SQRT5, x);
    let u = [(2.0 * w1[0] - w2[0]) / SQRT5, (w1[0] + 2.0 * w2[0]) / SQRT5];
    let du = [(2.0 * w1[1] - w2[1]) / SQRT5, (w1[1] + 2.0 * w2[1]) / SQRT5];
    (u, du)
}

/// `−εu₁″ − 3u₁′ − 4u₂′ = 1`, `−εu₂″ − 4u₁′ + 3u₂′ = 2`, homogeneous
/// boundary data, with the asymptotic evaluator
/// `u₁ = 8/25 − 11x/25 − 8/25 e^{−5x/ε} + 3/25 e^{−5(1−x)/ε}`,
/// `u₂ = 4/25 + 2x/25 − 4/25 e^{−5x/ε} − 6/25 e^{−5(1−x)/ε}`.
pub fn builtin_strongly_coupled_example(
    eps: f64,
) -> Result<(SystemProblem, ReferenceSolution), ProblemError> {
    let problem = SystemProblem::new(
        "strongly-coupled",
        ProblemKind::StronglyCoupled,
        vec![eps, eps],
        Some(constant(&[vec![-3.0, -4.0], vec![-4.0, 3.0]])),
        constant(&[vec![0.0, 0.0], vec![0.0, 0.0]]),
        VectorCoef::Constant(vec![1.0, 2.0]),
        vec![0.0, 0.0],
        vec![0.0, 0.0],
        LayerEnvelope::new(vec![LayerTerm::new(LayerSide::Both, 5.0, eps)]),
    )?;
    let reference = ReferenceSolution::new(
        ReferenceKind::Asymptotic {
            defect: "O(eps)".into(),
        },
        2,
        Arc::new(move |x, out| {
            let l = (-5.0 * x / eps).exp();
            let r = (-5.0 * (1.0 - x) / eps).exp();
            out[0] = (8.0 - 11.0 * x - 8.0 * l + 3.0 * r) / 25.0;
            out[1] = (4.0 + 2.0 * x - 4.0 * l - 6.0 * r) / 25.0;
        }),
        Some(Arc::new(move |x, out| {
            let l = (-5.0 * x / eps).exp();
            let r = (-5.0 * (1.0 - x) / eps).exp();
            let k = 5.0 / eps;
            out[0] = (-11.0 + 8.0 * k * l + 3.0 * k * r) / 25.0;
            out[1] = (2.0 + 4.0 * k * l - 6.0 * k * r) / 25.0;
        })),
    );
    Ok((problem, reference))
}

/// Exact reference for the strongly coupled example.
pub fn strongly_coupled_exact_reference(eps: f64) -> ReferenceSolution {
    ReferenceSolution::new(
        ReferenceKind::Exact,
        2,
        Arc::new(move |x, out| out.copy_from_slice(&strongly_coupled_exact(eps, x).0)),
        Some(Arc::new(move |x, out| {
            out.copy_from_slice(&strongly_coupled_exact(eps, x).1)
        })),
    )
}

/// `a_ii = 2`, `a_ij = −1/(2M)`.
pub fn reaction_diffusion_default_a(m: usize) -> DenseMatrix {
    let mut a = DenseMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            a[(i, j)] = if i == j { 2.0 } else { -0.5 / m as f64 };
        }
    }
    a
}

/// `−diag(ε_i²) u″ + A u = 1` with the default A and zero boundary data.
/// The envelope uses κ from the Γ check.
pub fn reaction_diffusion_problem(m: usize, eps: &[f64]) -> Result<SystemProblem, ProblemError> {
    if eps.len() != m {
        return Err(ProblemError::Dimension {
            what: "epsilon list",
            expected: m,
            found: eps.len(),
        });
    }
    if eps.windows(2).any(|w| w[1] < w[0]) {
        return Err(ProblemError::Invalid("epsilons must be ascending".into()));
    }
    let mut p = SystemProblem::new(
        "reaction-diffusion",
        ProblemKind::ReactionDiffusion,
        eps.to_vec(),
        None,
        MatrixCoef::Constant(reaction_diffusion_default_a(m)),
        VectorCoef::Constant(vec![1.0; m]),
        vec![0.0; m],
        vec![0.0; m],
        LayerEnvelope::default(),
    )?;
    let kappa = check_gamma(&p)?
        .kappa
        .ok_or_else(|| ProblemError::Invalid("A is not diagonally dominant".into()))?;
    p.envelope = LayerEnvelope::reaction_diffusion(kappa, eps);
    Ok(p)
}

fn round_up(n: usize, d: usize) -> usize {
    n.div_ceil(d).max(1) * d
}

/// Central scheme on a mirrored system Shishkin mesh (σ = 2, β = κ), with
/// second-order Richardson extrapolation against the bisected mesh. N_ref is
/// rounded up to a multiple of 2(M+1).
pub fn reaction_diffusion_oracle(
    problem: &SystemProblem,
    n_ref: usize,
) -> Result<ReferenceSolution, ProblemError> {
    let kappa = problem
        .envelope()
        .min_rate()
        .ok_or_else(|| ProblemError::Invalid("problem has no layer terms".into()))?;
    let n = round_up(n_ref, 2 * (problem.m() + 1));
    let mesh = system_shishkin(problem.eps(), 2.0, kappa, n, true)
        .map_err(|e| ProblemError::Oracle(e.to_string()))?
        .mesh;
    fine_mesh_oracle(
        problem,
        &mesh,
        OracleConfig {
            scheme: Scheme::Central,
            extrapolation_order: Some(2),
        },
    )
}

/// Built-in reaction–diffusion system with its fine-mesh oracle.
pub fn builtin_reaction_diffusion_system(
    m: usize,
    eps: &[f64],
    n_ref: usize,
) -> Result<(SystemProblem, ReferenceSolution), ProblemError> {
    let p = reaction_diffusion_problem(m, eps)?;
    let r = reaction_diffusion_oracle(&p, n_ref)?;
    Ok((p, r))
}

/// `−diag(ε₁, ε₂) u″ + diag(1, 2) u′ + [[2, −1], [−1, 3]] u = (1 + x, 2)`,
/// zero boundary data; both layers at x = 1 with decay rate β = 1.
pub fn builtin_weakly_coupled_cd(eps: [f64; 2]) -> Result<SystemProblem, ProblemError> {
    if eps[1] < eps[0] {
        return Err(ProblemError::Invalid("epsilons must be ascending".into()));
    }
    SystemProblem::new(
        "weakly-coupled-cd",
        ProblemKind::WeaklyCoupled,
        eps.to_vec(),
        Some(constant(&[vec![1.0, 0.0], vec![0.0, 2.0]])),
        constant(&[vec![2.0, -1.0], vec![-1.0, 3.0]]),
        VectorCoef::Variable(Arc::new(|x| vec![1.0 + x, 2.0])),
        vec![0.0, 0.0],
        vec![0.0, 0.0],
        LayerEnvelope::new(
            eps.iter()
                .map(|&e| LayerTerm::new(LayerSide::Right, 1.0, e))
                .collect(),
        ),
    )
}

/// Upwind on the reflected system Shishkin mesh (σ = 1, β = 1), first-order
/// Richardson extrapolation. N_ref is rounded up to a multiple of M+1.
pub fn weakly_coupled_oracle(
    problem: &SystemProblem,
    n_ref: usize,
) -> Result<ReferenceSolution, ProblemError> {
    let n = round_up(n_ref, problem.m() + 1);
    let beta = problem.envelope().min_rate().unwrap_or(1.0);
    let mesh = system_shishkin(problem.eps(), 1.0, beta, n, false)
        .map_err(|e| ProblemError::Oracle(e.to_string()))?
        .mesh
        .mirror();
    fine_mesh_oracle(
        problem,
        &mesh,
        OracleConfig {
            scheme: Scheme::SimpleUpwind,
            extrapolation_order: Some(1),
        },
    )
}

/// IAS on a uniform mesh of N_ref cells, without extrapolation.
pub fn strongly_coupled_oracle(
    problem: &SystemProblem,
    n_ref: usize,
) -> Result<ReferenceSolution, ProblemError> {
    let mesh = Mesh1D::uniform(n_ref).map_err(|e| ProblemError::Oracle(e.to_string()))?;
    fine_mesh_oracle(
        problem,
        &mesh,
        OracleConfig {
            scheme: Scheme::Ias,
            extrapolation_order: None,
        },
    )
}
