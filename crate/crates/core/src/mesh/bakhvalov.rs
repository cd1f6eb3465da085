//! Bakhvalov-type meshes and Bakhvalov's original C¹ mesh.

use super::{
    place, require_even, uniform_points, Half, LayerSide, LayerSpec, Mesh1D, MeshError, MeshLabel,
};
use crate::roots::{newton_bisect, ROOT_MAX_ITER, ROOT_TOL};

/// Transition point `min(1/2, (με/γ) ln(1/ε))`; `None` when the mesh
/// degenerates to uniform (ε ≥ 1 or the clamp is active).
pub(crate) fn bakhvalov_transition(spec: &LayerSpec) -> Option<f64> {
    if spec.eps >= 1.0 {
        return None;
    }
    let s = spec.width() * (1.0 / spec.eps).ln();
    (s < 0.5).then_some(s)
}

/// Bakhvalov-type mesh: `x_i = -(με/γ) ln(1 - 2(1 - ε) i/N)` for
/// `i <= N/2`, equidistant on `[σ*, 1]`.
pub fn bakhvalov_type(spec: &LayerSpec, n: usize) -> Result<Mesh1D, MeshError> {
    spec.validate()?;
    require_even(n, 4)?;
    if spec.side == LayerSide::Both {
        require_even(n / 2, 4)?;
    }
    let label = MeshLabel::new("bakhvalov-type", spec.side)
        .param("eps", spec.eps)
        .param("gamma", spec.gamma)
        .param("mu", spec.mu)
        .param("N", n as f64)
        .param("sigma", bakhvalov_transition(spec).unwrap_or(0.5));
    place(spec, label, |s, half| {
        let m = match half {
            Half::Full => n,
            Half::Half => n / 2,
        };
        let Some(sigma) = bakhvalov_transition(s) else {
            return Ok((
                uniform_points(0.0, 1.0, m),
                vec!["transition point clamped; uniform mesh".into()],
            ));
        };
        let k = m / 2;
        let c = 2.0 * (1.0 - s.eps);
        let w = s.width();
        let mut pts: Vec<f64> = (0..=k)
            .map(|i| {
                let arg = -c * i as f64 / m as f64;
                debug_assert!(1.0 + arg > 0.0);
                -w * arg.ln_1p()
            })
            .collect();
        pts[k] = sigma;
        pts.extend(uniform_points(sigma, 1.0, m - k).into_iter().skip(1));
        Ok((pts, Vec::new()))
    })
}

/// Bakhvalov's original mesh together with the C¹ matching parameter τ.
#[derive(Debug, Clone)]
pub struct BakhvalovMesh {
    pub mesh: Mesh1D,
    /// Tangent point of the mesh-generating function; `None` when the mesh
    /// degenerated to uniform.
    pub tau: Option<f64>,
    /// |φ'(τ)(1 − τ) − (1 − φ(τ))| at the computed τ.
    pub residual: f64,
    pub degenerate: bool,
}

/// Generating function `φ(t) = -(με/γ) ln(1 - t/q)` (the exact inverse of
/// `q(1 - exp(-γx/(με))) = t`) on `[0, τ]`, continued by its tangent through
/// `(1, 1)`.
///
/// τ is found in terms of `δ = q − τ`, where the matching condition
/// `φ'(τ)(1−τ) = 1 − φ(τ)` reads
/// `c(1 − q + δ)/δ − 1 + c ln(q/δ) = 0` with `c = με/γ`; solving in
/// `ln δ` keeps full relative precision for tiny ε.
pub fn bakhvalov_original(spec: &LayerSpec, n: usize, q: f64) -> Result<BakhvalovMesh, MeshError> {
    spec.validate()?;
    if !(q > 0.0 && q < 1.0) {
        return Err(MeshError::InvalidParameter(format!(
            "q must lie in (0, 1), got {q}"
        )));
    }
    if n < 2 {
        return Err(MeshError::InvalidCount {
            n,
            reason: "need at least two cells".into(),
        });
    }
    if spec.side == LayerSide::Both {
        require_even(n, 4)?;
    }
    let tau_info = std::cell::Cell::new((None, 0.0));
    let label = MeshLabel::new("bakhvalov", spec.side)
        .param("eps", spec.eps)
        .param("gamma", spec.gamma)
        .param("mu", spec.mu)
        .param("N", n as f64)
        .param("q", q);
    let mut mesh = place(spec, label, |s, half| {
        let m = match half {
            Half::Full => n,
            Half::Half => n / 2,
        };
        let c = s.width();
        match solve_tau(c, q)? {
            None => {
                tau_info.set((None, 0.0));
                Ok((
                    uniform_points(0.0, 1.0, m),
                    vec!["mesh degenerates to uniform (no C1 tangent point for this eps)".into()],
                ))
            }
            Some((tau, delta, residual)) => {
                tau_info.set((Some(tau), residual));
                let phi = |t: f64| -c * (-t / q).ln_1p();
                let phi_tau = c * (q / delta).ln();
                let slope = c / delta;
                let mut pts: Vec<f64> = (0..=m)
                    .map(|i| {
                        let t = i as f64 / m as f64;
                        if t <= tau {
                            phi(t)
                        } else {
                            phi_tau + slope * (t - tau)
                        }
                    })
                    .collect();
                pts[m] = 1.0;
                Ok((pts, Vec::new()))
            }
        }
    })?;
    let (tau, residual) = tau_info.get();
    if let Some(t) = tau {
        mesh.label_mut().params.push(("tau".into(), t));
    }
    Ok(BakhvalovMesh {
        degenerate: tau.is_none(),
        mesh,
        tau,
        residual,
    })
}

/// Returns `(τ, δ, residual)`, or `None` when no tangent point exists.
pub(crate) fn solve_tau(c: f64, q: f64) -> Result<Option<(f64, f64, f64)>, MeshError> {
    // residual as a function of s = ln δ; strictly decreasing in s
    let r = |s: f64| {
        let d = s.exp();
        let val = c * (1.0 - q) / d + c - 1.0 + c * (q.ln() - s);
        let der = -c * (1.0 - q) / d - c;
        (val, der)
    };
    let s_hi = q.ln();
    if r(s_hi).0 >= 0.0 {
        return Ok(None);
    }
    let mut s_lo = s_hi - 1.0;
    while r(s_lo).0 <= 0.0 {
        s_lo -= 1.0;
        if s_lo < -700.0 {
            return Err(MeshError::InvalidParameter(
                "could not bracket the Bakhvalov tangent point".into(),
            ));
        }
    }
    let root = newton_bisect(r, s_lo, s_hi, ROOT_TOL, ROOT_MAX_ITER)
        .map_err(|source| MeshError::Root { t: q, source })?;
    let delta = root.x.exp();
    Ok(Some((q - delta, delta, root.residual)))
}
