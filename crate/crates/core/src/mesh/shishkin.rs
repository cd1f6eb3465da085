//! Piecewise-equidistant Shishkin meshes and Shishkin-type meshes graded by
//! a mesh-generating function.

use std::fmt;
use std::sync::Arc;

use super::{place, require_even, uniform_points, Half, LayerSpec, Mesh1D, MeshError, MeshLabel};

/// Transition point `min(1/2, (με/γ) ln N)`.
pub(crate) fn shishkin_transition(spec: &LayerSpec, n: usize) -> f64 {
    (spec.width() * (n as f64).ln()).min(0.5)
}

/// Shishkin mesh: N/2 equal cells on [0, σ] and N/2 on [σ, 1].
pub fn shishkin(spec: &LayerSpec, n: usize) -> Result<Mesh1D, MeshError> {
    spec.validate()?;
    require_even(n, 4)?;
    if spec.side == super::LayerSide::Both {
        require_even(n / 2, 2)?;
    }
    let sigma = shishkin_transition(spec, n);
    let label = MeshLabel::new("shishkin", spec.side)
        .param("eps", spec.eps)
        .param("gamma", spec.gamma)
        .param("mu", spec.mu)
        .param("N", n as f64)
        .param("sigma", sigma);
    place(spec, label, |s, half| {
        let m = match half {
            Half::Full => n,
            Half::Half => n / 2,
        };
        let sigma = shishkin_transition(s, m);
        let k = m / 2;
        let mut pts: Vec<f64> = (0..=k)
            .map(|i| sigma * (2.0 * i as f64 / m as f64))
            .collect();
        pts[k] = sigma;
        pts.extend(uniform_points(sigma, 1.0, m - k).into_iter().skip(1));
        Ok((pts, Vec::new()))
    })
}

/// Mesh-generating function λ: [0, 1/2] → [0, ln N], strictly increasing,
/// with ψ = e^{-λ} the mesh-characterizing function.
#[derive(Clone)]
pub struct MeshCharFn {
    name: String,
    lambda: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    max_psi_prime: f64,
}

impl fmt::Debug for MeshCharFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeshCharFn")
            .field("name", &self.name)
            .field("max_psi_prime", &self.max_psi_prime)
            .finish()
    }
}

const PSI_SAMPLES: usize = 10_000;

impl MeshCharFn {
    /// Linear λ(t) = 2t ln N; max|ψ'| = 2 ln N.
    pub fn shishkin(n: usize) -> Self {
        let ln_n = (n as f64).ln();
        Self {
            name: "shishkin".into(),
            lambda: Arc::new(move |t| 2.0 * t * ln_n),
            max_psi_prime: 2.0 * ln_n,
        }
    }

    /// ψ(t) = 1 − 2t(1 − 1/N), i.e. λ(t) = −ln(1 − 2(1 − 1/N)t); max|ψ'| ≤ 2.
    pub fn bakhvalov_shishkin(n: usize) -> Self {
        let c = 2.0 * (1.0 - 1.0 / n as f64);
        Self {
            name: "bakhvalov-shishkin".into(),
            lambda: Arc::new(move |t| -(-c * t).ln_1p()),
            max_psi_prime: c,
        }
    }

    /// User-supplied λ; max|ψ'| is estimated from 10⁴ samples.
    pub fn custom<F>(name: impl Into<String>, lambda: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let step = 0.5 / PSI_SAMPLES as f64;
        let mut max_d: f64 = 0.0;
        let mut prev = (-lambda(0.0)).exp();
        for j in 1..=PSI_SAMPLES {
            let cur = (-lambda(j as f64 * step)).exp();
            max_d = max_d.max((cur - prev).abs() / step);
            prev = cur;
        }
        Self {
            name: name.into(),
            lambda: Arc::new(lambda),
            max_psi_prime: max_d,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn lambda(&self, t: f64) -> f64 {
        (self.lambda)(t)
    }

    pub fn psi(&self, t: f64) -> f64 {
        (-self.lambda(t)).exp()
    }

    pub fn max_psi_prime(&self) -> f64 {
        self.max_psi_prime
    }

    /// λ(0) = 0 and λ(1/2) = ln N within a root-finder-scale tolerance.
    pub fn check(&self, n: usize) -> Result<(), MeshError> {
        let l0 = self.lambda(0.0);
        let lh = self.lambda(0.5);
        let ln_n = (n as f64).ln();
        if l0.abs() > 1e-12 || (lh - ln_n).abs() > 1e-12 * ln_n.max(1.0) {
            return Err(MeshError::InvalidParameter(format!(
                "mesh-generating function {} must map [0,1/2] onto [0, ln N]: λ(0)={l0}, λ(1/2)={lh}, ln N={ln_n}",
                self.name
            )));
        }
        Ok(())
    }
}

/// Shishkin-type mesh: `x_i = (με/γ) λ(i/N)` for `i <= N/2`, uniform on
/// `[x_{N/2}, 1]`. Falls back to the uniform mesh when `(με/γ) ln N >= 1/2`,
/// exactly as the Shishkin transition point clamps.
pub fn shishkin_type(spec: &LayerSpec, n: usize, charfn: &MeshCharFn) -> Result<Mesh1D, MeshError> {
    spec.validate()?;
    require_even(n, 4)?;
    charfn.check(n)?;
    if spec.side == super::LayerSide::Both {
        return Err(MeshError::InvalidParameter(
            "shishkin_type is defined for a single layer; mirror the result for a right layer"
                .into(),
        ));
    }
    let label = MeshLabel::new(format!("shishkin-type:{}", charfn.name()), spec.side)
        .param("eps", spec.eps)
        .param("gamma", spec.gamma)
        .param("mu", spec.mu)
        .param("N", n as f64)
        .param("max_psi_prime", charfn.max_psi_prime());
    place(spec, label, |s, _| {
        let width = s.width();
        let k = n / 2;
        if width * (n as f64).ln() >= 0.5 {
            return Ok((
                uniform_points(0.0, 1.0, n),
                vec!["transition clamped at 1/2; uniform mesh".into()],
            ));
        }
        let mut pts: Vec<f64> = (0..=k)
            .map(|i| width * charfn.lambda(i as f64 / n as f64))
            .collect();
        pts[0] = 0.0;
        if let Some(i) = pts.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(MeshError::NotMonotone { index: i + 1 });
        }
        let sigma = pts[k];
        pts.extend(uniform_points(sigma, 1.0, n - k).into_iter().skip(1));
        Ok((pts, Vec::new()))
    })
}

/// Bakhvalov–Shishkin mesh, `x_i = -(με/γ) ln(1 - 2(1 - 1/N) i/N)` on the
/// fine part.
pub fn bakhvalov_shishkin(spec: &LayerSpec, n: usize) -> Result<Mesh1D, MeshError> {
    if spec.side == super::LayerSide::Both {
        // half construction on [0, 1/2] with the half-interval rescaling
        require_even(n, 8)?;
        let label = MeshLabel::new("bakhvalov-shishkin", spec.side)
            .param("eps", spec.eps)
            .param("gamma", spec.gamma)
            .param("mu", spec.mu)
            .param("N", n as f64);
        return place(spec, label, |s, _| {
            let left = LayerSpec {
                side: super::LayerSide::Left,
                ..*s
            };
            let m = bakhvalov_shishkin(&left, n / 2)?;
            Ok((m.points().to_vec(), m.label().warnings.clone()))
        });
    }
    let mut mesh = shishkin_type(spec, n, &MeshCharFn::bakhvalov_shishkin(n))?;
    mesh.label_mut().family = "bakhvalov-shishkin".into();
    Ok(mesh)
}
