//! Shared suites for the integration and acceptance targets. Each returns
//! the list of violations; an empty list means the suite passed.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use spbvp::linalg::{block_thomas, dense_lu_solve, jacobi_eigh, BlockTridiag, DenseMatrix};
use spbvp::mesh::{
    bakhvalov_original, bakhvalov_shishkin, bakhvalov_type, duran_lombardi, equidistribute,
    gartland, lambert_mesh, shishkin, system_shishkin, DuranLombardiVariant, GartlandVariant,
    LayerSide, LayerSpec, Mesh1D,
};
use spbvp::problems::{
    check_gamma, LayerEnvelope, MatrixCoef, ProblemKind, SystemProblem, VectorCoef,
};

pub const SUITE_EPS: [f64; 3] = [1.0, 1e-4, 1e-10];
pub const SUITE_N: [usize; 3] = [8, 64, 512];
const SIDES: [LayerSide; 3] = [LayerSide::Left, LayerSide::Right, LayerSide::Both];

fn check_valid(name: &str, mesh: &Mesh1D, out: &mut Vec<String>) {
    let p = mesh.points();
    if p[0] != 0.0 || p[p.len() - 1] != 1.0 {
        out.push(format!("{name}: endpoints {} {}", p[0], p[p.len() - 1]));
    }
    if let Some(i) = p.windows(2).position(|w| w[1] <= w[0]) {
        out.push(format!("{name}: not increasing at {i}"));
    }
}

/// Endpoints, monotonicity and the per-family structural properties over
/// ε ∈ {1, 1e−4, 1e−10} × N ∈ {8, 64, 512}. Recursive families use H = 1/N.
pub fn mesh_invariant_suite() -> Vec<String> {
    let mut out = Vec::new();
    for &eps in &SUITE_EPS {
        for &n in &SUITE_N {
            for &side in &SIDES {
                let spec = LayerSpec::new(eps, 1.0, 2.0, side).unwrap();
                let tag = |f: &str| format!("{f} eps={eps:e} N={n} side={side}");
                let h = 1.0 / n as f64;
                let fixed: Vec<(&str, Result<Mesh1D, _>)> = vec![
                    ("shishkin", shishkin(&spec, n)),
                    ("bakhvalov-shishkin", bakhvalov_shishkin(&spec, n)),
                    ("bakhvalov-type", bakhvalov_type(&spec, n)),
                    (
                        "bakhvalov",
                        bakhvalov_original(&spec, n, 0.5).map(|b| b.mesh),
                    ),
                    ("lambert", lambert_mesh(&spec, n)),
                    ("gartland", gartland(&spec, h, GartlandVariant::Gartland)),
                    (
                        "gartland-type",
                        gartland(&spec, h, GartlandVariant::GartlandType),
                    ),
                    (
                        "duran-lombardi",
                        duran_lombardi(&spec, h, 1.0, DuranLombardiVariant::Geometric),
                    ),
                    (
                        "duran-lombardi-uniform-start",
                        duran_lombardi(&spec, h, 1.0, DuranLombardiVariant::InitialUniform),
                    ),
                    (
                        "system-shishkin",
                        system_shishkin(&[eps], 2.0, 1.0, n, side == LayerSide::Both)
                            .map(|s| s.mesh),
                    ),
                ];
                for (name, mesh) in fixed {
                    match mesh {
                        Ok(m) => check_valid(&tag(name), &m, &mut out),
                        Err(e) => out.push(format!("{}: {e}", tag(name))),
                    }
                }
                if let Ok(m) = gartland(&spec, h, GartlandVariant::Gartland) {
                    let h = m.spacings();
                    let worst = h.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
                    if side == LayerSide::Left && worst > std::f64::consts::E + 1e-12 {
                        out.push(format!("{}: growth ratio {worst}", tag("gartland")));
                    }
                }
            }
            let spec = LayerSpec::new(eps, 1.0, 2.0, LayerSide::Left).unwrap();
            if let Ok(b) = bakhvalov_original(&spec, n, 0.5) {
                if let Some(tau) = b.tau {
                    for (i, &x) in b.mesh.points().iter().enumerate() {
                        let t = i as f64 / n as f64;
                        if t > tau {
                            break;
                        }
                        let lhs = 0.5 * -(-x / (spec.mu * eps)).exp_m1();
                        if (lhs - t).abs() > 1e-12 {
                            out.push(format!(
                                "bakhvalov eps={eps:e} N={n}: inversion off by {:e} at i={i}",
                                (lhs - t).abs()
                            ));
                        }
                    }
                }
            }
        }
    }
    for &n in &SUITE_N {
        let h = 1.0 / n as f64;
        let counts: Vec<usize> = [1e-4, 1e-10]
            .iter()
            .map(|&eps| {
                let spec = LayerSpec::new(eps, 1.0, 2.0, LayerSide::Left).unwrap();
                gartland(&spec, h, GartlandVariant::GartlandType).map_or(0, |m| m.n_cells())
            })
            .collect();
        // graded part is ~2/H cells for every ε; only the coarse remainder
        // 1 − 2ε ln(1/ε) shifts, by at most a cell or two
        let (lo, hi) = (counts[0].min(counts[1]), counts[0].max(counts[1]));
        if hi as f64 > 4.0 / h || hi - lo > 2 {
            out.push(format!(
                "gartland-type H=1/{n}: counts {counts:?} depend on eps"
            ));
        }
        for &eps in &[1e-4, 1e-10] {
            let spec = LayerSpec::new(eps, 1.0, 2.0, LayerSide::Left).unwrap();
            if let Ok(m) = duran_lombardi(&spec, h, 1.0, DuranLombardiVariant::Geometric) {
                let expect = (1.0 / eps).ln() / h;
                let ratio = m.n_cells() as f64 / expect;
                if !(0.5..=2.0).contains(&ratio) {
                    out.push(format!(
                        "duran-lombardi eps={eps:e} H=1/{n}: {} cells vs H^-1 ln(1/eps) = {expect:.1}",
                        m.n_cells()
                    ));
                }
            }
        }
        match equidistribute(|_| 1.0, n, 50, 1e-8) {
            Ok(e) if e.residual <= 1e-8 => {}
            Ok(e) => out.push(format!(
                "equidistribute M=1 N={n}: residual {:e}",
                e.residual
            )),
            Err(e) => out.push(format!("equidistribute M=1 N={n}: {e}")),
        }
    }
    out
}

fn random_matrix(rng: &mut StdRng, m: usize, scale: f64) -> DenseMatrix {
    let data = (0..m * m)
        .map(|_| scale * rng.random_range(-1.0..1.0))
        .collect();
    DenseMatrix::from_row_major(m, m, data).unwrap()
}

/// block_thomas against dense LU and jacobi_eigh against its invariants on
/// 1000 random instances each, plus the ±5 example.
pub fn kernel_suite() -> Vec<String> {
    let mut out = Vec::new();
    let mut rng = StdRng::seed_from_u64(2024);
    let norm = |v: &[f64]| v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    for trial in 0..1000 {
        let m = rng.random_range(1..=4);
        let n = rng.random_range(2..=40);
        let lower = (0..n - 1)
            .map(|_| random_matrix(&mut rng, m, 1.0))
            .collect();
        let upper = (0..n - 1)
            .map(|_| random_matrix(&mut rng, m, 1.0))
            .collect();
        let diag = (0..n)
            .map(|_| {
                let mut d = random_matrix(&mut rng, m, 1.0);
                for k in 0..m {
                    d[(k, k)] += 3.0 * m as f64;
                }
                d
            })
            .collect();
        let op = BlockTridiag::new(lower, diag, upper).unwrap();
        let rhs: Vec<f64> = (0..n * m).map(|_| rng.random_range(-1.0..1.0)).collect();
        match (
            block_thomas(&op, &rhs),
            dense_lu_solve(&op.to_dense(), &rhs),
        ) {
            (Ok(x), Ok(y)) => {
                let d: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
                if norm(&d) > 1e-9 * norm(&y).max(1.0) {
                    out.push(format!(
                        "block_thomas trial {trial}: differs by {:e}",
                        norm(&d)
                    ));
                }
            }
            (a, b) => out.push(format!(
                "block_thomas trial {trial}: {:?} / {:?}",
                a.err(),
                b.err()
            )),
        }
    }
    for trial in 0..1000 {
        let m = rng.random_range(1..=8);
        let a = random_matrix(&mut rng, m, 10.0);
        let b = a.add(&a.transpose()).scaled(0.5);
        match jacobi_eigh(&b) {
            Ok(e) => {
                let orth = e.orthogonality_residual();
                let rec = e.reconstruction_residual(&b);
                if orth > 1e-10 || rec > 1e-10 * b.norm_inf().max(1.0) {
                    out.push(format!("jacobi trial {trial}: orth {orth:e} recon {rec:e}"));
                }
            }
            Err(e) => out.push(format!("jacobi trial {trial}: {e}")),
        }
    }
    let b = DenseMatrix::from_rows(&[vec![-3.0, -4.0], vec![-4.0, 3.0]]).unwrap();
    match jacobi_eigh(&b) {
        Ok(e) if (e.values[0] + 5.0).abs() <= 1e-12 && (e.values[1] - 5.0).abs() <= 1e-12 => {}
        other => out.push(format!(
            "jacobi [[-3,-4],[-4,3]]: {:?}",
            other.map(|e| e.values)
        )),
    }
    out
}

/// Reaction–diffusion problem with constant `a` and unit data.
pub fn constant_a_problem(a: DenseMatrix) -> SystemProblem {
    let m = a.rows();
    SystemProblem::new(
        "constant-a",
        ProblemKind::ReactionDiffusion,
        vec![1e-3; m],
        None,
        MatrixCoef::Constant(a),
        VectorCoef::Constant(vec![1.0; m]),
        vec![0.0; m],
        vec![0.0; m],
        LayerEnvelope::default(),
    )
    .unwrap()
}

/// Γ verdicts for identity, strongly diagonally dominant and ratio-2 A, and
/// symmetric + monotone ⇒ positive definite on 100 random instances.
pub fn stability_suite() -> Vec<String> {
    let mut out = Vec::new();
    let verdict =
        |rows: &[Vec<f64>]| check_gamma(&constant_a_problem(DenseMatrix::from_rows(rows).unwrap()));
    match verdict(&[
        vec![1.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0],
        vec![0.0, 0.0, 1.0],
    ]) {
        Ok(g) if g.inverse_nonneg && g.gamma_matrix == DenseMatrix::identity(3).to_rows() => {}
        other => out.push(format!("identity: {other:?}")),
    }
    match verdict(&[
        vec![4.0, -1.0, 0.5],
        vec![1.0, 5.0, -1.0],
        vec![-0.5, 1.0, 3.0],
    ]) {
        Ok(g) if g.inverse_nonneg && g.diag_dominant => {}
        other => out.push(format!("diagonally dominant: {other:?}")),
    }
    // Γ = [[1, −2], [−2, 1]], Γ⁻¹ = −1/3 [[1, 2], [2, 1]]
    match verdict(&[vec![1.0, 2.0], vec![-4.0, 2.0]]) {
        Ok(g) if !g.inverse_nonneg => {
            let inv = g.inverse.unwrap_or_default();
            let want = [[-1.0 / 3.0, -2.0 / 3.0], [-2.0 / 3.0, -1.0 / 3.0]];
            let off = (0..2)
                .flat_map(|i| (0..2).map(move |j| (i, j)))
                .map(|(i, j)| (inv[i][j] - want[i][j]).abs())
                .fold(0.0, f64::max);
            if off > 1e-14 {
                out.push(format!("ratio 2: inverse {inv:?}"));
            }
        }
        other => out.push(format!("ratio 2: {other:?}")),
    }
    let mut rng = StdRng::seed_from_u64(77);
    let (mut tested, mut drawn) = (0, 0);
    while tested < 100 && drawn < 100_000 {
        drawn += 1;
        let m = rng.random_range(2..=4);
        let spread = rng.random_range(0.1..1.5);
        let mut a = DenseMatrix::zeros(m, m);
        for i in 0..m {
            a[(i, i)] = rng.random_range(0.5..2.0);
            for j in 0..i {
                let v = spread * rng.random_range(-1.0..1.0);
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        let g = match check_gamma(&constant_a_problem(a.clone())) {
            Ok(g) => g,
            Err(e) => {
                out.push(format!("random instance {drawn}: {e}"));
                continue;
            }
        };
        if !g.inverse_nonneg {
            continue;
        }
        tested += 1;
        match jacobi_eigh(&a) {
            Ok(e) if e.values[0] > 0.0 => {}
            Ok(e) => out.push(format!("monotone but not definite: {:?}", e.values)),
            Err(e) => out.push(format!("eigensolver: {e}")),
        }
    }
    if tested < 100 {
        out.push(format!("only {tested} monotone instances in {drawn} draws"));
    }
    out
}
