//! Inverse-monotonicity pre-checks on the coupling matrices.

use serde::{Deserialize, Serialize};

use super::{MatrixCoef, ProblemError, ProblemKind, SystemProblem};
use crate::linalg::{dense_inverse, DenseMatrix};

/// Size of the uniform grid on which sup-norms, minima and L1 norms of
/// coefficient functions are estimated.
pub const SAMPLE_POINTS: usize = 10_000;
/// Inverse entries at or above `−MONOTONE_TOL` count as nonnegative.
pub const MONOTONE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaCheck {
    pub gamma_matrix: Vec<Vec<f64>>,
    pub inverse: Option<Vec<Vec<f64>>>,
    pub inverse_nonneg: bool,
    pub min_inverse_entry: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// `ζ = max_i Σ_{j≠i} ‖a_ij/a_ii‖∞`.
    pub zeta: f64,
    pub diag_dominant: bool,
    pub min_diag: f64,
    /// `κ = ((1−ζ) min_i min_x a_ii)^{1/2}`, reaction–diffusion kind with ζ < 1.
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpsilonCheck {
    pub upsilon_matrix: Vec<Vec<f64>>,
    pub constants: Vec<f64>,
    pub inverse: Option<Vec<Vec<f64>>>,
    pub inverse_nonneg: bool,
    pub min_inverse_entry: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// The constants C_i have no constructive recipe; the verdict depends on them.
    pub heuristic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub problem: String,
    pub kind: ProblemKind,
    pub m: usize,
    /// Absent for convection problems whose A has a non-positive diagonal.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<GammaCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_skipped: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upsilon: Option<UpsilonCheck>,
}

impl StabilityReport {
    /// Γ check, and the Υ check when the problem has a convection matrix.
    /// Γ needs a_ii > 0; without B that is an error, with B it is skipped.
    pub fn for_problem(
        problem: &SystemProblem,
        constants: Option<&[f64]>,
    ) -> Result<Self, ProblemError> {
        let (gamma, gamma_skipped, upsilon) = match problem.b() {
            None => (Some(check_gamma(problem)?), None, None),
            Some(_) => {
                let (g, skipped) = match check_gamma(problem) {
                    Ok(g) => (Some(g), None),
                    Err(e) => (None, Some(e.to_string())),
                };
                (g, skipped, Some(check_upsilon(problem, constants)?))
            }
        };
        Ok(Self {
            problem: problem.name.clone(),
            kind: problem.kind,
            m: problem.m(),
            gamma,
            gamma_skipped,
            upsilon,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn grid(coef_constant: bool) -> Vec<f64> {
    if coef_constant {
        vec![0.0]
    } else {
        (0..SAMPLE_POINTS)
            .map(|i| i as f64 / (SAMPLE_POINTS - 1) as f64)
            .collect()
    }
}

struct Verdict {
    inverse: Option<Vec<Vec<f64>>>,
    nonneg: bool,
    min_entry: Option<f64>,
    reason: Option<String>,
}

fn inverse_verdict(g: &DenseMatrix) -> Verdict {
    match dense_inverse(g) {
        Ok(inv) => {
            let min = inv.min_entry();
            Verdict {
                nonneg: min >= -MONOTONE_TOL,
                min_entry: Some(min),
                reason: (min < -MONOTONE_TOL)
                    .then(|| format!("inverse has negative entry {min:e}")),
                inverse: Some(inv.to_rows()),
            }
        }
        Err(e) => Verdict {
            inverse: None,
            nonneg: false,
            min_entry: None,
            reason: Some(format!("matrix is singular: {e}")),
        },
    }
}

/// Builds `Γ` with `γ_ii = 1`, `γ_ij = −‖a_ij/a_ii‖∞` and tests `Γ⁻¹ ≥ 0`.
pub fn check_gamma(problem: &SystemProblem) -> Result<GammaCheck, ProblemError> {
    let m = problem.m();
    let a = problem.a();
    let mut ratio = DenseMatrix::zeros(m, m);
    let mut min_diag = f64::INFINITY;
    for x in grid(a.is_constant()) {
        let ax = a.eval(x);
        for i in 0..m {
            let aii = ax[(i, i)];
            if !(aii > 0.0) {
                return Err(ProblemError::Invalid(format!(
                    "a_{}{} = {aii} is not positive at x = {x}",
                    i + 1,
                    i + 1
                )));
            }
            min_diag = min_diag.min(aii);
            for j in 0..m {
                if j != i {
                    ratio[(i, j)] = ratio[(i, j)].max((ax[(i, j)] / aii).abs());
                }
            }
        }
    }
    let mut gamma = DenseMatrix::identity(m);
    let mut zeta: f64 = 0.0;
    for i in 0..m {
        let mut row = 0.0;
        for j in 0..m {
            if j != i {
                gamma[(i, j)] = -ratio[(i, j)];
                row += ratio[(i, j)];
            }
        }
        zeta = zeta.max(row);
    }
    let v = inverse_verdict(&gamma);
    let kappa = (problem.kind == ProblemKind::ReactionDiffusion && zeta < 1.0)
        .then(|| ((1.0 - zeta) * min_diag).sqrt());
    Ok(GammaCheck {
        gamma_matrix: gamma.to_rows(),
        inverse: v.inverse,
        inverse_nonneg: v.nonneg,
        min_inverse_entry: v.min_entry,
        reason: v.reason,
        zeta,
        diag_dominant: zeta < 1.0,
        min_diag,
        kappa,
    })
}

/// Builds `Υ` with `γ_ii = 1`, `γ_ij = −C_i (‖b′_ij + a_ij‖_{L1} + ‖b_ij‖∞)`
/// and tests `Υ⁻¹ ≥ 0`. `constants` defaults to all ones.
pub fn check_upsilon(
    problem: &SystemProblem,
    constants: Option<&[f64]>,
) -> Result<UpsilonCheck, ProblemError> {
    let m = problem.m();
    let b = problem
        .b()
        .ok_or_else(|| ProblemError::Invalid("the Υ check needs a convection matrix".into()))?;
    let c: Vec<f64> = match constants {
        Some(c) if c.len() != m => {
            return Err(ProblemError::Dimension {
                what: "Υ constants",
                expected: m,
                found: c.len(),
            })
        }
        Some(c) if c.iter().any(|&v| !(v > 0.0)) => {
            return Err(ProblemError::Invalid("Υ constants must be positive".into()))
        }
        Some(c) => c.to_vec(),
        None => vec![1.0; m],
    };
    let a = problem.a();
    let (l1, sup) = coupling_norms(b, a, m);
    let mut ups = DenseMatrix::identity(m);
    for i in 0..m {
        for j in 0..m {
            if i != j {
                ups[(i, j)] = -c[i] * (l1[(i, j)] + sup[(i, j)]);
            }
        }
    }
    let v = inverse_verdict(&ups);
    Ok(UpsilonCheck {
        upsilon_matrix: ups.to_rows(),
        constants: c,
        inverse: v.inverse,
        inverse_nonneg: v.nonneg,
        min_inverse_entry: v.min_entry,
        reason: v.reason,
        heuristic: true,
    })
}

/// `‖b′_ij + a_ij‖_{L1}` by the composite trapezoid rule and `‖b_ij‖∞` by
/// sampling, both on the shared grid.
fn coupling_norms(b: &MatrixCoef, a: &MatrixCoef, m: usize) -> (DenseMatrix, DenseMatrix) {
    let xs = grid(b.is_constant() && a.is_constant());
    let mut l1 = DenseMatrix::zeros(m, m);
    let mut sup = DenseMatrix::zeros(m, m);
    if xs.len() == 1 {
        let (bx, ax) = (b.eval(0.0), a.eval(0.0));
        for i in 0..m {
            for j in 0..m {
                l1[(i, j)] = ax[(i, j)].abs();
                sup[(i, j)] = bx[(i, j)].abs();
            }
        }
        return (l1, sup);
    }
    let h = 1.0 / (xs.len() - 1) as f64;
    for (s, &x) in xs.iter().enumerate() {
        let w = if s == 0 || s == xs.len() - 1 {
            0.5 * h
        } else {
            h
        };
        let (bx, dbx, ax) = (b.eval(x), b.derivative(x), a.eval(x));
        for i in 0..m {
            for j in 0..m {
                l1[(i, j)] += w * (dbx[(i, j)] + ax[(i, j)]).abs();
                sup[(i, j)] = sup[(i, j)].max(bx[(i, j)].abs());
            }
        }
    }
    (l1, sup)
}

#[cfg(test)]
mod tests {
    use super::super::{LayerEnvelope, VectorCoef};
    use super::*;

    fn rd(a: Vec<Vec<f64>>) -> SystemProblem {
        let m = a.len();
        SystemProblem::new(
            "t",
            ProblemKind::ReactionDiffusion,
            vec![1e-3; m],
            None,
            MatrixCoef::Constant(DenseMatrix::from_rows(&a).unwrap()),
            VectorCoef::Constant(vec![1.0; m]),
            vec![0.0; m],
            vec![0.0; m],
            LayerEnvelope::default(),
        )
        .unwrap()
    }

    #[test]
    fn identity_is_monotone() {
        let g = check_gamma(&rd(vec![vec![1.0, 0.0], vec![0.0, 1.0]])).unwrap();
        assert_eq!(g.gamma_matrix, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert!(g.inverse_nonneg);
        assert_eq!(g.kappa, Some(1.0));
    }

    #[test]
    fn ratio_two_is_not_monotone() {
        // Γ = [[1,−2],[−2,1]], Γ⁻¹ = −1/3 [[1,2],[2,1]]
        let g = check_gamma(&rd(vec![vec![1.0, 2.0], vec![6.0, 3.0]])).unwrap();
        assert!(!g.inverse_nonneg);
        let inv = g.inverse.unwrap();
        let want = [[-1.0 / 3.0, -2.0 / 3.0], [-2.0 / 3.0, -1.0 / 3.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((inv[i][j] - want[i][j]).abs() < 1e-14);
            }
        }
        assert!(g.kappa.is_none());
    }

    #[test]
    fn nonpositive_diagonal_rejected() {
        let p = rd(vec![vec![0.0, 1.0], vec![1.0, 1.0]]);
        assert!(check_gamma(&p).is_err());
    }

    #[test]
    fn variable_coefficients_sampled() {
        let a = MatrixCoef::Variable(std::sync::Arc::new(|x: f64| {
            DenseMatrix::from_rows(&[vec![1.0 + x, -0.5 * x], vec![0.0, 2.0]]).unwrap()
        }));
        let p = SystemProblem::new(
            "v",
            ProblemKind::ReactionDiffusion,
            vec![1e-2; 2],
            None,
            a,
            VectorCoef::Constant(vec![1.0; 2]),
            vec![0.0; 2],
            vec![0.0; 2],
            LayerEnvelope::default(),
        )
        .unwrap();
        let g = check_gamma(&p).unwrap();
        // sup over x of 0.5x/(1+x) is 1/4 at x = 1
        assert!((g.zeta - 0.25).abs() < 1e-12);
        assert!((g.min_diag - 1.0).abs() < 1e-12);
        assert!((g.kappa.unwrap() - 0.75f64.sqrt()).abs() < 1e-12);
    }
}
