//! Mesh generated by an implicitly defined function of Lambert-W type.

use serde::{Deserialize, Serialize};

use super::{place, Half, LayerSpec, Mesh1D, MeshError, MeshLabel};
use crate::roots::{newton_bisect, RootError, ROOT_MAX_ITER, ROOT_TOL};

/// Which sign of the exponent the implicit relation
/// `ξ − exp(±γξ/(με)) + 1 − 2t = 0` uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LambertForm {
    /// `exp(−γξ/(με))`: monotone with ξ(0) = 0 and a root for every t.
    #[default]
    Decaying,
    /// `exp(+γξ/(με))` as literally printed; has no positive root once
    /// γ/(με) > 1, which is reported as a bracket failure.
    Literal,
}

/// Lambert-type mesh with the default (decaying) relation.
pub fn lambert_mesh(spec: &LayerSpec, n: usize) -> Result<Mesh1D, MeshError> {
    lambert_mesh_with(spec, n, LambertForm::Decaying)
}

/// Solves the implicit relation at `t = i/N` for every node and rescales so
/// that `x_N = 1` exactly. The label records the largest root residual.
pub fn lambert_mesh_with(
    spec: &LayerSpec,
    n: usize,
    form: LambertForm,
) -> Result<Mesh1D, MeshError> {
    spec.validate()?;
    if n < 4 {
        return Err(MeshError::InvalidCount {
            n,
            reason: "need at least 4 cells".into(),
        });
    }
    if spec.side == super::LayerSide::Both && !n.is_multiple_of(2) {
        return Err(MeshError::InvalidCount {
            n,
            reason: "must be even for layers at both ends".into(),
        });
    }
    let label = MeshLabel::new(
        match form {
            LambertForm::Decaying => "lambert",
            LambertForm::Literal => "lambert-literal",
        },
        spec.side,
    )
    .param("eps", spec.eps)
    .param("gamma", spec.gamma)
    .param("mu", spec.mu)
    .param("N", n as f64);
    let worst = std::cell::Cell::new(0.0f64);
    let mut mesh = place(spec, label, |s, half| {
        let m = match half {
            Half::Full => n,
            Half::Half => n / 2,
        };
        let a = s.gamma / (s.mu * s.eps);
        let mut xi = Vec::with_capacity(m + 1);
        for i in 0..=m {
            let t = i as f64 / m as f64;
            let root = lambert_root(a, t, form).map_err(|source| MeshError::Root { t, source })?;
            worst.set(worst.get().max(root.1));
            xi.push(root.0);
        }
        let end = xi[m];
        let mut pts: Vec<f64> = xi.iter().map(|x| x / end).collect();
        pts[m] = 1.0;
        if let Some(i) = pts.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(MeshError::NotMonotone { index: i + 1 });
        }
        Ok((pts, Vec::new()))
    })?;
    mesh.label_mut()
        .params
        .push(("max_residual".into(), worst.get()));
    Ok(mesh)
}

/// Residual of the implicit relation.
pub(crate) fn lambert_residual(a: f64, t: f64, xi: f64, form: LambertForm) -> f64 {
    match form {
        LambertForm::Decaying => xi - (-a * xi).exp() + 1.0 - 2.0 * t,
        LambertForm::Literal => xi - (a * xi).exp() + 1.0 - 2.0 * t,
    }
}

/// Root ξ(t) and its residual. The bracket `[0, 2t]` contains the root of
/// the decaying form for every t in [0, 1].
fn lambert_root(a: f64, t: f64, form: LambertForm) -> Result<(f64, f64), RootError> {
    if t == 0.0 {
        return Ok((0.0, 0.0));
    }
    let f = |x: f64| match form {
        LambertForm::Decaying => {
            let e = (-a * x).exp();
            (x - e + 1.0 - 2.0 * t, 1.0 + a * e)
        }
        LambertForm::Literal => {
            let e = (a * x).exp();
            (x - e + 1.0 - 2.0 * t, 1.0 - a * e)
        }
    };
    let r = newton_bisect(f, 0.0, 2.0 * t, ROOT_TOL, ROOT_MAX_ITER)?;
    Ok((r.x, lambert_residual(a, t, r.x, form).abs()))
}
