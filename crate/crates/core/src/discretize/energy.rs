use super::{DiscreteSolution, DiscretizeError};
use crate::mesh::Mesh1D;
use crate::problems::ReferenceSolution;
use crate::quadrature::{graded_breaks, integrate_breaks, CELL_LEVELS};

/// `(ε|v|₁² + ‖v‖₀²)^{1/2}` of the piecewise-linear interpolant, exact per cell.
pub fn energy_norm(mesh: &Mesh1D, v: &[f64], eps: f64) -> f64 {
    assert_eq!(v.len(), mesh.n_cells() + 1, "nodal vector length");
    cell_sum(mesh, v, 1, 0, eps).sqrt()
}

/// Energy norm of node-major system values, `Σ_k ε_k|v_k|₁² + ‖v_k‖₀²`.
pub fn energy_norm_system(mesh: &Mesh1D, values: &[f64], eps: &[f64]) -> f64 {
    let m = eps.len();
    assert_eq!(
        values.len(),
        (mesh.n_cells() + 1) * m,
        "nodal vector length"
    );
    (0..m)
        .map(|k| cell_sum(mesh, values, m, k, eps[k]))
        .sum::<f64>()
        .sqrt()
}

fn cell_sum(mesh: &Mesh1D, v: &[f64], m: usize, k: usize, eps: f64) -> f64 {
    mesh.spacings()
        .iter()
        .enumerate()
        .map(|(c, &h)| {
            let (a, b) = (v[c * m + k], v[(c + 1) * m + k]);
            eps * (b - a) * (b - a) / h + h * (a * a + a * b + b * b) / 3.0
        })
        .sum()
}

/// True energy-norm error `‖u − u_h‖` between a reference with derivative
/// and the piecewise-linear discrete solution. One globally adaptive pass
/// over the mesh, with geometric pre-refinement toward both ends of every
/// cell much wider than the smallest ε.
pub fn energy_error(
    solution: &DiscreteSolution,
    reference: &ReferenceSolution,
    eps: &[f64],
) -> Result<f64, DiscretizeError> {
    let m = solution.m();
    if eps.len() != m || reference.m() != m {
        return Err(DiscretizeError::Dimension {
            expected: m,
            found: eps.len().min(reference.m()),
        });
    }
    if !reference.has_derivative() {
        return Err(DiscretizeError::Reference(
            "reference has no derivative".into(),
        ));
    }
    let pts = solution.mesh().points();
    let vals = solution.values();
    let eps_min = eps.iter().copied().fold(f64::INFINITY, f64::min);
    let mut breaks = Vec::with_capacity(pts.len() * 4);
    for w in pts.windows(2) {
        let h = w[1] - w[0];
        let ratio = h / eps_min;
        if ratio > LAYER_RATIO {
            let levels = (ratio.log2().ceil() as u32 + 4).min(CELL_LEVELS);
            breaks.extend_from_slice(&graded_breaks(w[0], w[1], levels)[..]);
            breaks.pop();
        } else {
            breaks.push(w[0]);
        }
    }
    breaks.push(pts[pts.len() - 1]);
    let integrand = |x: f64| {
        let c = pts.partition_point(|&p| p <= x).clamp(1, pts.len() - 1) - 1;
        let (xl, h) = (pts[c], pts[c + 1] - pts[c]);
        let va = &vals[c * m..(c + 1) * m];
        let vb = &vals[(c + 1) * m..(c + 2) * m];
        let mut u = [0.0; STACK_M];
        let mut du = [0.0; STACK_M];
        let mut heap_u;
        let mut heap_du;
        let (u, du) = if m <= STACK_M {
            (&mut u[..m], &mut du[..m])
        } else {
            heap_u = vec![0.0; m];
            heap_du = vec![0.0; m];
            (&mut heap_u[..], &mut heap_du[..])
        };
        reference.eval_into(x, u);
        reference.derivative_into(x, du).expect("checked above");
        let t = (x - xl) / h;
        (0..m)
            .map(|k| {
                let slope = (vb[k] - va[k]) / h;
                let vh = va[k] + t * (vb[k] - va[k]);
                eps[k] * (du[k] - slope).powi(2) + (u[k] - vh).powi(2)
            })
            .sum::<f64>()
    };
    let r = integrate_breaks(
        integrand,
        &breaks,
        ENERGY_RTOL,
        1e-300,
        4 * breaks.len() + 20_000,
    );
    Ok(r.value.max(0.0).sqrt())
}

/// Cells wider than this multiple of the smallest ε get graded breaks.
const LAYER_RATIO: f64 = 8.0;
const ENERGY_RTOL: f64 = 1e-9;
const STACK_M: usize = 8;
