//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero when the outcome differs from the expected one.

mod common;

use std::process::ExitCode;

use spbvp::discretize::{solve_problem, Scheme};
use spbvp::harness::{
    build_mesh, max_norm_error, sweep, ConvergenceReport, EpsValue, MeshFamily, Norm, RateTarget,
    ReferenceChoice, StudyConfig,
};
use spbvp::problems::{builtin_strongly_coupled_example, BuiltinName, WEAKLY_COUPLED_EPS};

const SCALAR_EPS: [f64; 4] = [1e-4, 1e-6, 1e-8, 1e-10];
const SCALAR_N: [usize; 5] = [64, 128, 256, 512, 1024];
const SYSTEM_N: [usize; 5] = [96, 192, 384, 768, 1536];

/// Criteria whose targets the implementation cannot meet; see README.
/// They still run and must still fail, so a change in behavior is noticed.
const EXPECTED_FAIL: [u32; 1] = [5];

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (u32, &'static str, fn() -> Result<Outcome, String>);

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn fmt_rates(r: &[Option<f64>]) -> String {
    let v: Vec<String> = r
        .iter()
        .map(|x| x.map_or("-".into(), |v| format!("{v:.3}")))
        .collect();
    format!("[{}]", v.join(", "))
}

fn rates_within(r: &[Option<f64>], lo: f64, hi: f64) -> bool {
    !r.is_empty() && r.iter().all(|x| x.is_some_and(|v| (lo..=hi).contains(&v)))
}

fn study(
    problem: BuiltinName,
    scheme: Scheme,
    mesh: MeshFamily,
    n: &[usize],
    eps: Vec<EpsValue>,
) -> StudyConfig {
    let mut c = StudyConfig::new(problem, scheme, mesh);
    c.n_list = n.to_vec();
    c.eps_list = eps;
    c
}

fn scalars(eps: &[f64]) -> Vec<EpsValue> {
    eps.iter().map(|&e| EpsValue::Scalar(e)).collect()
}

fn run(c: &StudyConfig) -> Result<ConvergenceReport, String> {
    let r = sweep(c).map_err(|e| e.to_string())?;
    if r.failures > 0 {
        let first = r
            .records
            .iter()
            .find_map(|x| x.failure.clone())
            .unwrap_or_default();
        return Err(format!("{} failed cells, first: {first}", r.failures));
    }
    Ok(r)
}

fn criterion_1() -> Result<Outcome, String> {
    let r = run(&study(
        BuiltinName::ScalarCd,
        Scheme::SimpleUpwind,
        MeshFamily::Shishkin,
        &SCALAR_N,
        scalars(&SCALAR_EPS),
    ))?;
    let rates = r.rates_from(0, true);
    let ratio = r.c_star_ratio.unwrap_or(f64::INFINITY);
    Ok(outcome(
        rates_within(&rates, 0.85, 1.15) && ratio <= 3.0,
        format!(
            "corrected rates {} C* max/min {ratio:.4}",
            fmt_rates(&rates)
        ),
    ))
}

fn criterion_2() -> Result<Outcome, String> {
    let mut pass = true;
    let mut detail = Vec::new();
    for family in [MeshFamily::BakhvalovShishkin, MeshFamily::BakhvalovType] {
        let r = run(&study(
            BuiltinName::ScalarCd,
            Scheme::SimpleUpwind,
            family,
            &SCALAR_N,
            scalars(&SCALAR_EPS),
        ))?;
        let rates = r.rates_from(0, false);
        pass &= rates_within(&rates, 0.85, 1.15);
        detail.push(format!("{family} raw rates {}", fmt_rates(&rates)));
    }
    Ok(outcome(pass, detail.join("; ")))
}

fn criterion_3() -> Result<Outcome, String> {
    let mut c = study(
        BuiltinName::ReactionDiffusion,
        Scheme::Central,
        MeshFamily::SystemShishkin,
        &SYSTEM_N,
        vec![EpsValue::Vector(vec![1e-6, 1e-3])],
    );
    c.m = Some(2);
    let r = run(&c)?;
    let rates = r.rates_from(0, true);
    Ok(outcome(
        rates_within(&rates, 1.75, 2.25),
        format!("corrected rates {}", fmt_rates(&rates)),
    ))
}

fn criterion_4() -> Result<Outcome, String> {
    let eps = WEAKLY_COUPLED_EPS
        .iter()
        .map(|e| EpsValue::Vector(e.to_vec()))
        .collect();
    let r = run(&study(
        BuiltinName::WeaklyCoupledCd,
        Scheme::SimpleUpwind,
        MeshFamily::SystemShishkin,
        &SYSTEM_N,
        eps,
    ))?;
    let rates = r.rates_from(0, true);
    Ok(outcome(
        rates_within(&rates, 0.8, 1.2),
        format!("corrected rates {}", fmt_rates(&rates)),
    ))
}

fn criterion_5() -> Result<Outcome, String> {
    let eps = [1e-4, 1e-6, 1e-8];
    let mut c = study(
        BuiltinName::StronglyCoupled,
        Scheme::Ias,
        MeshFamily::Uniform,
        &SCALAR_N,
        scalars(&eps),
    );
    c.reference = ReferenceChoice::Oracle;
    let r = run(&c)?;
    let rates = r.rates_from(0, false);
    let decreasing = rates.iter().all(|x| x.is_some_and(|v| v >= 0.8));
    let errors = r.uniform_errors();
    let finest = errors.iter().flatten().copied().fold(0.0, f64::max);

    // computed solution against the asymptotic formula, cell by cell
    let mut asym_ok = true;
    let mut worst = 0.0f64;
    for (ni, &n) in SCALAR_N.iter().enumerate() {
        for (ei, &e) in eps.iter().enumerate() {
            let (p, asym) = builtin_strongly_coupled_example(e).map_err(|x| x.to_string())?;
            let mesh = build_mesh(&p, MeshFamily::Uniform, n, c.mu()).map_err(|x| x.to_string())?;
            let sol = solve_problem(&p, &mesh, Scheme::Ias).map_err(|x| x.to_string())?;
            let d = max_norm_error(&sol, &asym);
            let study_err = r.records[ni * eps.len() + ei].err_max.unwrap_or(f64::NAN);
            let bound = (5.0 * e).max(5.0 * study_err);
            asym_ok &= d <= bound;
            worst = worst.max(d / bound);
        }
    }
    Ok(outcome(
        decreasing && asym_ok,
        format!(
            "raw rates {} (largest E(N) {finest:.2e}); asymptotic match {} (worst distance/bound {worst:.2e})",
            fmt_rates(&rates),
            if asym_ok { "holds" } else { "fails" }
        ),
    ))
}

fn criterion_6() -> Result<Outcome, String> {
    let mut detail = Vec::new();
    let mut pass = true;
    for (family, target, label) in [
        (MeshFamily::Shishkin, RateTarget::NInvLogN, "N^-1 ln N"),
        (MeshFamily::BakhvalovShishkin, RateTarget::NInv, "N^-1"),
    ] {
        let mut c = study(
            BuiltinName::ScalarCd,
            Scheme::GalerkinFem,
            family,
            &SCALAR_N,
            scalars(&SCALAR_EPS),
        );
        c.norm = Norm::Energy;
        c.target = Some(target);
        let r = run(&c)?;
        let scaled: Vec<f64> = r
            .uniform
            .iter()
            .map(|u| u.error.unwrap_or(f64::NAN) / target.value(u.n))
            .collect();
        let (lo, hi) = scaled
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(l, h), &v| (l.min(v), h.max(v)));
        let eps_ratio = r.c_star_ratio.unwrap_or(f64::INFINITY);
        pass &= hi / lo <= 3.0 && eps_ratio <= 3.0;
        detail.push(format!(
            "{family}: E/({label}) over N max/min {:.3}, C* over eps max/min {eps_ratio:.4}",
            hi / lo
        ));
        if family == MeshFamily::Shishkin {
            // the ln N factor shows as growth of N·E(N)
            let n_e: Vec<f64> = r
                .uniform
                .iter()
                .map(|u| u.n as f64 * u.error.unwrap_or(f64::NAN))
                .collect();
            let grows = n_e.windows(2).all(|w| w[1] > w[0]);
            pass &= grows;
            detail.push(format!(
                "shishkin N*E {} from {:.3} to {:.3}",
                if grows { "grows" } else { "does not grow" },
                n_e[0],
                n_e[n_e.len() - 1]
            ));
        }
    }
    Ok(outcome(pass, detail.join("; ")))
}

fn suite(v: Vec<String>, what: &str) -> Result<Outcome, String> {
    Ok(if v.is_empty() {
        outcome(true, format!("{what}: no violations"))
    } else {
        outcome(false, format!("{} violations, first: {}", v.len(), v[0]))
    })
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, "upwind + Shishkin, scalar", criterion_1),
        (
            2,
            "upwind + Bakhvalov-Shishkin / Bakhvalov-type, scalar",
            criterion_2,
        ),
        (
            3,
            "central + system Shishkin, reaction-diffusion",
            criterion_3,
        ),
        (4, "upwind + system Shishkin, weakly coupled", criterion_4),
        (5, "IAS on uniform meshes, strongly coupled", criterion_5),
        (6, "Galerkin FEM energy norm", criterion_6),
        (7, "stability checks", || {
            suite(
                common::stability_suite(),
                "Gamma verdicts and PD implication",
            )
        }),
        (8, "mesh invariant suite", || {
            suite(common::mesh_invariant_suite(), "all families")
        }),
        (9, "solver kernels", || {
            suite(common::kernel_suite(), "block_thomas, jacobi_eigh")
        }),
    ];
    let mut unexpected = Vec::new();
    for (id, name, f) in criteria {
        let start = std::time::Instant::now();
        let o = f().unwrap_or_else(|e| outcome(false, format!("error: {e}")));
        let expected_fail = EXPECTED_FAIL.contains(&id);
        println!(
            "{} criterion {id} ({name}): {} [{:.1}s]{}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64(),
            match (o.pass, expected_fail) {
                (false, true) => " (known failure)",
                (true, true) => " (expected to fail, now passes)",
                _ => "",
            }
        );
        if o.pass == expected_fail {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
