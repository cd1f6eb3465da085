mod common;

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use spbvp::discretize::{solve_problem, Scheme};
use spbvp::harness::{build_mesh, max_norm_error, MeshFamily};
use spbvp::linalg::{dense_inverse, DenseMatrix};
use spbvp::mesh::LayerSide;
use spbvp::problems::{
    builtin_scalar_cd, builtin_strongly_coupled_example, builtin_weakly_coupled_cd, check_gamma,
    check_upsilon, envelope_check, reaction_diffusion_oracle, reaction_diffusion_problem,
    strongly_coupled_exact_reference, weakly_coupled_oracle, LayerEnvelope, LayerTerm, MatrixCoef,
    ProblemKind, ReferenceSolution, StabilityReport, SystemProblem, VectorCoef, MONOTONE_TOL,
};

#[test]
fn stability_suite_has_no_violations() {
    let v = common::stability_suite();
    assert!(v.is_empty(), "{v:#?}");
}

#[test]
fn gamma_verdict_invariant_under_row_scaling() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..200 {
        let m = rng.random_range(2..=4);
        let mut a = DenseMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                a[(i, j)] = if i == j {
                    rng.random_range(0.5..3.0)
                } else {
                    rng.random_range(-1.5..1.5)
                };
            }
        }
        let p = common::constant_a_problem(a);
        let d: Vec<f64> = (0..m)
            .map(|_| 10f64.powf(rng.random_range(-3.0..3.0)))
            .collect();
        let q = p.scale_rows(&d).unwrap();
        let (g, h) = (check_gamma(&p).unwrap(), check_gamma(&q).unwrap());
        assert_eq!(g.inverse_nonneg, h.inverse_nonneg);
        for (r, s) in g
            .gamma_matrix
            .iter()
            .flatten()
            .zip(h.gamma_matrix.iter().flatten())
        {
            assert!((r - s).abs() <= 1e-12 * r.abs().max(1.0));
        }
    }
}

fn convection_problem(b: DenseMatrix, a: DenseMatrix) -> SystemProblem {
    let m = b.rows();
    SystemProblem::new(
        "convection",
        ProblemKind::StronglyCoupled,
        vec![1e-3; m],
        Some(MatrixCoef::Constant(b)),
        MatrixCoef::Constant(a),
        VectorCoef::Constant(vec![1.0; m]),
        vec![0.0; m],
        vec![0.0; m],
        LayerEnvelope::new(vec![LayerTerm::new(LayerSide::Left, 1.0, 1e-3)]),
    )
    .unwrap()
}

#[test]
fn upsilon_constant_two_by_two_by_hand() {
    let b = DenseMatrix::from_rows(&[vec![-4.0, 0.5], vec![-0.25, -3.0]]).unwrap();
    let a = DenseMatrix::from_rows(&[vec![1.0, -0.2], vec![0.3, 1.0]]).unwrap();
    let u = check_upsilon(&convection_problem(b, a), Some(&[2.0, 0.5])).unwrap();
    // γ12 = −2(0.2 + 0.5), γ21 = −0.5(0.3 + 0.25)
    let (g12, g21) = (-1.4, -0.275);
    assert!((u.upsilon_matrix[0][1] - g12).abs() < 1e-12);
    assert!((u.upsilon_matrix[1][0] - g21).abs() < 1e-12);
    let det = 1.0 - g12 * g21;
    assert!(det > 0.0 && u.inverse_nonneg);
    let inv = u.inverse.unwrap();
    assert!((inv[0][1] + g12 / det).abs() < 1e-12);
}

#[test]
fn upsilon_with_diagonal_b_sees_only_a() {
    let b = DenseMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 3.0]]).unwrap();
    let a = DenseMatrix::from_rows(&[vec![1.0, -0.7], vec![0.4, 1.0]]).unwrap();
    let u = check_upsilon(&convection_problem(b, a), None).unwrap();
    assert!((u.upsilon_matrix[0][1] + 0.7).abs() < 1e-12);
    assert!((u.upsilon_matrix[1][0] + 0.4).abs() < 1e-12);
}

/// With `C_i = 1/min|b_ii|`, a monotone Υ dominates the comparison matrix of
/// `diag(|b_ii|)⁻¹ B`, so B must be generalized diagonally dominant.
#[test]
fn monotone_upsilon_implies_b_is_an_h_matrix() {
    let mut rng = StdRng::seed_from_u64(9);
    let mut monotone = 0;
    for _ in 0..2000 {
        let m = rng.random_range(2..=4);
        let mut b = DenseMatrix::zeros(m, m);
        let mut a = DenseMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                b[(i, j)] = if i == j {
                    rng.random_range(0.5..3.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 }
                } else {
                    rng.random_range(-1.0..1.0)
                };
                a[(i, j)] = rng.random_range(-0.3..0.3);
            }
        }
        let c: Vec<f64> = (0..m).map(|i| 1.0 / b[(i, i)].abs()).collect();
        let u = check_upsilon(&convection_problem(b.clone(), a), Some(&c)).unwrap();
        if !u.inverse_nonneg {
            continue;
        }
        monotone += 1;
        let mut cmp = DenseMatrix::identity(m);
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    cmp[(i, j)] = -(b[(i, j)] / b[(i, i)]).abs();
                }
            }
        }
        let inv = dense_inverse(&cmp).unwrap();
        assert!(inv.to_rows().iter().flatten().all(|&v| v >= -MONOTONE_TOL));
    }
    assert!(monotone >= 100, "{monotone}");
}

#[test]
fn strongly_coupled_report_skips_gamma_and_runs_upsilon() {
    let (p, _) = builtin_strongly_coupled_example(1e-4).unwrap();
    let r = StabilityReport::for_problem(&p, None).unwrap();
    assert!(r.gamma.is_none() && r.gamma_skipped.is_some());
    let u = r.upsilon.unwrap();
    assert!(u.heuristic);
    assert_eq!(u.upsilon_matrix, vec![vec![1.0, -4.0], vec![-4.0, 1.0]]);
    assert!(!u.inverse_nonneg);
}

#[test]
fn builtin_closed_forms_at_quoted_points() {
    for &eps in &[1e-1, 1e-3, 1e-8] {
        let (_, r) = builtin_scalar_cd(eps).unwrap();
        let denom = -(-1.0 / eps).exp_m1();
        let u = |x: f64| x - ((-(1.0 - x) / eps).exp() - (-1.0 / eps).exp()) / denom;
        for x in [0.0, 0.5, 1.0] {
            assert!((r.eval(x)[0] - u(x)).abs() <= 1e-12, "eps={eps} x={x}");
        }
    }
    let eps = 1e-4;
    let (_, r) = builtin_strongly_coupled_example(eps).unwrap();
    let (u0, uh, u1) = (r.eval(0.0), r.eval(0.5), r.eval(1.0));
    assert!((u0[0] - 2.0 * u0[1]).abs() <= 1e-12);
    assert!((2.0 * u1[0] + u1[1]).abs() <= 1e-12);
    assert!((uh[0] - 0.1).abs() <= 1e-12 && (uh[1] - 0.2).abs() <= 1e-12);
}

#[test]
fn asymptotic_and_exact_strongly_coupled_agree_to_order_eps() {
    for &eps in &[1e-2, 1e-4, 1e-6] {
        let (_, asym) = builtin_strongly_coupled_example(eps).unwrap();
        let exact = strongly_coupled_exact_reference(eps);
        let worst = (0..=1000)
            .map(|i| i as f64 / 1000.0)
            .flat_map(|x| {
                let (a, b) = (asym.eval(x), exact.eval(x));
                [(a[0] - b[0]).abs(), (a[1] - b[1]).abs()]
            })
            .fold(0.0, f64::max);
        assert!(worst <= 5.0 * eps, "eps={eps}: {worst}");
    }
}

#[test]
fn envelope_constant_bounded_across_eps() {
    let fits: Vec<f64> = [1e-2, 1e-4, 1e-6, 1e-8]
        .iter()
        .map(|&eps| {
            let (p, r) = builtin_scalar_cd(eps).unwrap();
            envelope_check(&r, p.envelope(), 1).unwrap().c
        })
        .collect();
    let (lo, hi) = fits
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(l, h), &c| (l.min(c), h.max(c)));
    assert!(hi / lo <= 3.0, "{fits:?}");

    let (p, r) = builtin_scalar_cd(1e-4).unwrap();
    let c0 = envelope_check(&r, p.envelope(), 0).unwrap().c;
    let sup = (0..=10_000)
        .map(|i| r.eval(i as f64 / 1e4)[0].abs())
        .fold(0.0, f64::max);
    assert!((c0 - sup).abs() <= 1e-3 * sup, "{c0} vs {sup}");

    let (p, r) = builtin_scalar_cd(1.0).unwrap();
    let c2 = envelope_check(&r, p.envelope(), 2).unwrap().c;
    assert!(c2 < 10.0, "{c2}");
}

fn oracle_gap(a: &ReferenceSolution, b: &ReferenceSolution, points: &[f64]) -> f64 {
    points
        .iter()
        .flat_map(|&x| {
            a.eval(x)
                .into_iter()
                .zip(b.eval(x))
                .map(|(p, q)| (p - q).abs())
                .collect::<Vec<_>>()
        })
        .fold(0.0, f64::max)
}

#[test]
fn reaction_diffusion_oracle_is_self_consistent() {
    let p = reaction_diffusion_problem(2, &[1e-6, 1e-3]).unwrap();
    let n = 384;
    let n_ref = 16 * n;
    let (r1, r2) = (
        reaction_diffusion_oracle(&p, n_ref).unwrap(),
        reaction_diffusion_oracle(&p, 2 * n_ref).unwrap(),
    );
    let mesh = build_mesh(&p, MeshFamily::SystemShishkin, n, 2.0).unwrap();
    let study = max_norm_error(&solve_problem(&p, &mesh, Scheme::Central).unwrap(), &r1);
    let gap = oracle_gap(&r1, &r2, mesh.points());
    assert!(gap < 0.1 * study, "gap {gap:e} vs study error {study:e}");
}

#[test]
fn weakly_coupled_oracle_is_self_consistent() {
    let p = builtin_weakly_coupled_cd([1e-6, 1e-3]).unwrap();
    let n = 384;
    let n_ref = 16 * n;
    let (r1, r2) = (
        weakly_coupled_oracle(&p, n_ref).unwrap(),
        weakly_coupled_oracle(&p, 2 * n_ref).unwrap(),
    );
    let mesh = build_mesh(&p, MeshFamily::SystemShishkin, n, 2.0).unwrap();
    let study = max_norm_error(
        &solve_problem(&p, &mesh, Scheme::SimpleUpwind).unwrap(),
        &r1,
    );
    let gap = oracle_gap(&r1, &r2, mesh.points());
    assert!(gap < 0.1 * study, "gap {gap:e} vs study error {study:e}");
}

#[test]
fn reaction_diffusion_default_a_passes_gamma() {
    for m in 1..=4 {
        let eps: Vec<f64> = (0..m).map(|i| 10f64.powi(-6 + i as i32)).collect();
        let p = reaction_diffusion_problem(m, &eps).unwrap();
        let g = check_gamma(&p).unwrap();
        assert!(g.inverse_nonneg && g.kappa.is_some());
        assert!((0..=100).all(|i| p.envelope().eval(i as f64 / 100.0, 2) >= 1.0));
    }
}
