//! Multi-band Shishkin mesh for systems with ordered diffusion parameters.

use super::{uniform_points, LayerSide, Mesh1D, MeshError, MeshLabel};

#[derive(Debug, Clone)]
pub struct SystemShishkin {
    pub mesh: Mesh1D,
    /// `τ_0 = 0 < τ_1 <= ... <= τ_M < τ_{M+1}` on the (half-)interval the
    /// bands were built on; `τ_{M+1}` is 1, or 1/2 when mirrored.
    pub tau: Vec<f64>,
}

/// Transition points `τ_k = min(k τ_{k+1}/(k+1), σ ε_k/β ln N)` computed
/// from `τ_{M+1} = 1` downward. Each band `[τ_k, τ_{k+1}]` receives N/(M+1)
/// equal cells; the layers sit at x = 0.
///
/// With `mirrored`, the construction is carried out on [0, 1/2] with N/2
/// cells (`τ_{M+1} = 1/2`) and reflected, giving the same grading at both
/// ends; N must then be divisible by 2(M+1).
pub fn system_shishkin(
    eps: &[f64],
    sigma: f64,
    beta: f64,
    n: usize,
    mirrored: bool,
) -> Result<SystemShishkin, MeshError> {
    let m = eps.len();
    if m == 0 {
        return Err(MeshError::InvalidParameter("empty epsilon list".into()));
    }
    if eps.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
        return Err(MeshError::InvalidParameter(
            "epsilons must be positive".into(),
        ));
    }
    if eps.windows(2).any(|w| w[1] < w[0]) {
        return Err(MeshError::InvalidParameter(
            "epsilons must be in ascending order".into(),
        ));
    }
    if !(sigma > 0.0 && beta > 0.0) {
        return Err(MeshError::InvalidParameter(
            "sigma and beta must be positive".into(),
        ));
    }
    let bands = m + 1;
    let divisor = if mirrored { 2 * bands } else { bands };
    if n == 0 || !n.is_multiple_of(divisor) {
        return Err(MeshError::InvalidCount {
            n,
            reason: format!("must be a positive multiple of {divisor}"),
        });
    }
    let length = if mirrored { 0.5 } else { 1.0 };
    let ln_n = (n as f64).ln();
    let mut tau = vec![0.0; bands + 1];
    tau[bands] = length;
    for k in (1..=m).rev() {
        tau[k] = (k as f64 * tau[k + 1] / (k + 1) as f64).min(sigma * eps[k - 1] / beta * ln_n);
    }
    tau[0] = 0.0;
    let per_band = n / divisor;
    let mut half = vec![0.0];
    for k in 0..bands {
        half.extend(
            uniform_points(tau[k], tau[k + 1], per_band)
                .into_iter()
                .skip(1),
        );
    }
    let pts = if mirrored {
        let h = half.len() - 1;
        let mut pts = half.clone();
        pts.extend(half[..h].iter().rev().map(|x| 1.0 - x));
        pts
    } else {
        half
    };
    let mut label = MeshLabel::new(
        "system-shishkin",
        if mirrored {
            LayerSide::Both
        } else {
            LayerSide::Left
        },
    )
    .param("N", n as f64)
    .param("sigma", sigma)
    .param("beta", beta);
    for (k, &e) in eps.iter().enumerate() {
        label = label.param(&format!("eps{}", k + 1), e);
    }
    for (k, &t) in tau.iter().enumerate().skip(1).take(m) {
        label = label.param(&format!("tau{k}"), t);
    }
    Ok(SystemShishkin {
        mesh: Mesh1D::new(pts, label)?,
        tau,
    })
}
