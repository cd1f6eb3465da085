//! Meshes that equidistribute a positive monitor function.

use super::{uniform_points, LayerSide, LayerSpec, Mesh1D, MeshError, MeshLabel};
use crate::quadrature::integrate_cell;

/// Default constant K̃ in the Bakhvalov monitor.
pub const DEFAULT_MONITOR_K: f64 = 2.0;

/// Background cells per mesh cell for the cumulative trapezoid integral.
const SUBCELLS: usize = 64;
/// Relative change of M across a background cell that triggers bisection.
const REL_CHANGE: f64 = 1e-2;
const MAX_DEPTH: u32 = 40;

/// `M(s) = max(1, K̃ γ/ε · exp(−γ s/(με)))`, whose equidistributing mesh is
/// of Bakhvalov type.
pub fn bakhvalov_monitor(spec: &LayerSpec, k_tilde: f64) -> impl Fn(f64) -> f64 + Clone {
    let (eps, gamma, mu) = (spec.eps, spec.gamma, spec.mu);
    move |s: f64| (k_tilde * gamma / eps * (-gamma * s / (mu * eps)).exp()).max(1.0)
}

#[derive(Debug, Clone)]
pub struct Equidistributed {
    pub mesh: Mesh1D,
    pub iterations: usize,
    /// `max_i |∫_cell M − mean| / mean`, cell integrals by adaptive quadrature.
    pub residual: f64,
    /// False when `max_iter` was hit; `mesh` is then the best iterate.
    pub converged: bool,
}

/// Iterated inversion of the cumulative monitor integral.
///
/// Each sweep integrates M by the composite trapezoid rule on a background
/// grid made of the current mesh with every cell split into 64 parts, then
/// inverts the piecewise-linear cumulative integral at the N equal levels.
/// Background subcells across which M changes by more than 1% are bisected
/// further, so a coarse cell straddling a steep tail is still resolved.
/// The residual is measured independently with adaptive Gauss–Kronrod.
pub fn equidistribute<M>(
    monitor: M,
    n: usize,
    max_iter: usize,
    tol: f64,
) -> Result<Equidistributed, MeshError>
where
    M: Fn(f64) -> f64,
{
    if n < 1 {
        return Err(MeshError::InvalidCount {
            n,
            reason: "need at least one cell".into(),
        });
    }
    let mut pts = uniform_points(0.0, 1.0, n);
    let mut best = (f64::INFINITY, pts.clone());
    let mut iterations = 0;
    for it in 1..=max_iter.max(1) {
        iterations = it;
        let res = residual(&monitor, &pts)?;
        if res < best.0 {
            best = (res, pts.clone());
        }
        if res <= tol {
            break;
        }
        pts = invert_cumulative(&monitor, &pts, n)?;
    }
    // the last inversion has not been scored yet
    let res = residual(&monitor, &pts)?;
    if res < best.0 {
        best = (res, pts);
    }
    let (residual, pts) = best;
    let converged = residual <= tol;
    let mut label = MeshLabel::new("equidistributed", LayerSide::Left)
        .param("N", n as f64)
        .param("iterations", iterations as f64)
        .param("residual", residual);
    if !converged {
        label.warn(format!(
            "equidistribution did not reach tol {tol:e} in {max_iter} iterations (residual {residual:e})"
        ));
    }
    Ok(Equidistributed {
        mesh: Mesh1D::new(pts, label)?,
        iterations,
        residual,
        converged,
    })
}

fn residual<M: Fn(f64) -> f64>(monitor: &M, pts: &[f64]) -> Result<f64, MeshError> {
    let cells: Vec<f64> = pts
        .windows(2)
        .map(|w| integrate_cell(monitor, w[0], w[1]).value)
        .collect();
    let mean = cells.iter().sum::<f64>() / cells.len() as f64;
    if !(mean > 0.0 && mean.is_finite()) {
        return Err(MeshError::InvalidParameter(
            "monitor must be positive and integrable".into(),
        ));
    }
    Ok(cells.iter().map(|c| (c - mean).abs()).fold(0.0, f64::max) / mean)
}

fn invert_cumulative<M: Fn(f64) -> f64>(
    monitor: &M,
    pts: &[f64],
    n: usize,
) -> Result<Vec<f64>, MeshError> {
    let mut grid = vec![0.0];
    let mut vals = vec![checked(monitor, 0.0)?];
    for w in pts.windows(2) {
        for j in 1..=SUBCELLS {
            let b = if j == SUBCELLS {
                w[1]
            } else {
                w[0] + (w[1] - w[0]) * j as f64 / SUBCELLS as f64
            };
            let fb = checked(monitor, b)?;
            refine(
                monitor,
                *grid.last().unwrap(),
                *vals.last().unwrap(),
                b,
                fb,
                0,
                &mut grid,
                &mut vals,
            )?;
        }
    }
    let mut cum = vec![0.0; grid.len()];
    for j in 1..grid.len() {
        cum[j] = cum[j - 1] + 0.5 * (vals[j] + vals[j - 1]) * (grid[j] - grid[j - 1]);
    }
    let total = cum[grid.len() - 1];
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    let mut j = 1;
    for k in 1..n {
        let level = total * k as f64 / n as f64;
        while cum[j] < level {
            j += 1;
        }
        let (c0, c1) = (cum[j - 1], cum[j]);
        let frac = if c1 > c0 {
            (level - c0) / (c1 - c0)
        } else {
            0.0
        };
        out.push(grid[j - 1] + frac * (grid[j] - grid[j - 1]));
    }
    out.push(1.0);
    // guard against coincident points from round-off at extreme ratios
    for k in 1..out.len() {
        if out[k] <= out[k - 1] {
            return Err(MeshError::NotMonotone { index: k });
        }
    }
    Ok(out)
}

fn checked<M: Fn(f64) -> f64>(monitor: &M, s: f64) -> Result<f64, MeshError> {
    let v = monitor(s);
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(MeshError::InvalidParameter(format!(
            "monitor must be positive and finite, got {v} at {s}"
        )))
    }
}

/// Appends the background points of `(a, b]`, bisecting while M varies too much.
#[allow(clippy::too_many_arguments)]
fn refine<M: Fn(f64) -> f64>(
    monitor: &M,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    depth: u32,
    grid: &mut Vec<f64>,
    vals: &mut Vec<f64>,
) -> Result<(), MeshError> {
    if depth < MAX_DEPTH && (fa - fb).abs() > REL_CHANGE * fa.max(fb) {
        let m = 0.5 * (a + b);
        if m > a && m < b {
            let fm = checked(monitor, m)?;
            refine(monitor, a, fa, m, fm, depth + 1, grid, vals)?;
            return refine(monitor, m, fm, b, fb, depth + 1, grid, vals);
        }
    }
    grid.push(b);
    vals.push(fb);
    Ok(())
}
