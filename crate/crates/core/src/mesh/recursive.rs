//! Recursively defined meshes: Gartland, Gartland-type and Durán–Lombardi.

use serde::{Deserialize, Serialize};

use super::{place, Half, LayerSpec, Mesh1D, MeshError, MeshLabel};

const MAX_POINTS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GartlandVariant {
    /// `h_i = min(H, εH e^{γx_i/(2ε)}, e h_{i-1})`; locally quasi-equidistant.
    #[default]
    Gartland,
    /// Drops the `e h_{i-1}` cap; point count independent of ε.
    GartlandType,
}

/// Gartland's recursion from `x_0 = 0`, `x_1 = εH` (clamped to H).
///
/// The last point is set to 1. When the leftover cell would be shorter than
/// `h_prev / e`, the last two cells are replaced by two equal halves of their
/// union, which keeps the local ratio bound.
pub fn gartland(
    spec: &LayerSpec,
    coarse_h: f64,
    variant: GartlandVariant,
) -> Result<Mesh1D, MeshError> {
    spec.validate()?;
    if !(coarse_h > 0.0 && coarse_h < 1.0) {
        return Err(MeshError::InvalidParameter(format!(
            "coarse step H must lie in (0, 1), got {coarse_h}"
        )));
    }
    let family = match variant {
        GartlandVariant::Gartland => "gartland",
        GartlandVariant::GartlandType => "gartland-type",
    };
    let label = MeshLabel::new(family, spec.side)
        .param("eps", spec.eps)
        .param("gamma", spec.gamma)
        .param("H", coarse_h);
    place(spec, label, |s, half| {
        let big_h = match half {
            Half::Full => coarse_h,
            Half::Half => (2.0 * coarse_h).min(0.5),
        };
        let mut pts = vec![0.0, (s.eps * big_h).min(big_h)];
        loop {
            let x = *pts.last().unwrap();
            if x >= 1.0 {
                break;
            }
            let h_prev = x - pts[pts.len() - 2];
            let mut h = big_h.min(s.eps * big_h * (s.gamma * x / (2.0 * s.eps)).exp());
            if variant == GartlandVariant::Gartland {
                h = h.min(std::f64::consts::E * h_prev);
            }
            let next = x + h;
            if next >= 1.0 - 1e-9 * big_h {
                let rest = 1.0 - x;
                if rest < h_prev / std::f64::consts::E && pts.len() > 2 {
                    let x0 = pts[pts.len() - 2];
                    let n = pts.len();
                    pts[n - 1] = 0.5 * (x0 + 1.0);
                }
                pts.push(1.0);
                break;
            }
            pts.push(next);
            if pts.len() > MAX_POINTS {
                return Err(MeshError::TooManyPoints { limit: MAX_POINTS });
            }
        }
        let n = pts.len();
        pts[n - 1] = 1.0;
        Ok((pts, Vec::new()))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DuranLombardiVariant {
    /// `x_1 = κHε`, `x_{i+1} = x_i (1 + κH)`.
    #[default]
    Geometric,
    /// Uniform steps `κHε` up to `i = ⌊1/(κH)⌋ + 1`, geometric afterwards.
    InitialUniform,
}

/// Durán–Lombardi mesh. The final point is set to 1 and merged into the
/// previous cell when the leftover is shorter than half the previous cell.
pub fn duran_lombardi(
    spec: &LayerSpec,
    coarse_h: f64,
    kappa: f64,
    variant: DuranLombardiVariant,
) -> Result<Mesh1D, MeshError> {
    spec.validate()?;
    if !(coarse_h > 0.0 && kappa > 0.0) {
        return Err(MeshError::InvalidParameter(
            "H and kappa must be positive".into(),
        ));
    }
    if kappa * coarse_h >= 1.0 {
        return Err(MeshError::InvalidParameter(format!(
            "kappa*H must be below 1, got {}",
            kappa * coarse_h
        )));
    }
    let family = match variant {
        DuranLombardiVariant::Geometric => "duran-lombardi",
        DuranLombardiVariant::InitialUniform => "duran-lombardi-uniform-start",
    };
    let label = MeshLabel::new(family, spec.side)
        .param("eps", spec.eps)
        .param("H", coarse_h)
        .param("kappa", kappa);
    place(spec, label, |s, half| {
        let big_h = match half {
            Half::Full => coarse_h,
            Half::Half => 2.0 * coarse_h,
        };
        let g = kappa * big_h;
        if g >= 1.0 {
            return Err(MeshError::InvalidParameter(
                "kappa*H too large for a two-sided mesh".into(),
            ));
        }
        let uniform_until = match variant {
            DuranLombardiVariant::Geometric => 1,
            DuranLombardiVariant::InitialUniform => (1.0 / g).floor() as usize + 1,
        };
        let mut pts = vec![0.0];
        let mut i = 0usize;
        loop {
            let x = pts[i];
            let next = if i < uniform_until {
                (i + 1) as f64 * g * s.eps
            } else {
                x + g * x
            };
            if next >= 1.0 {
                let rest = 1.0 - x;
                let prev = if i > 0 { x - pts[i - 1] } else { f64::INFINITY };
                if rest < 0.5 * prev && i > 1 {
                    pts.pop();
                }
                pts.push(1.0);
                break;
            }
            pts.push(next);
            i += 1;
            if pts.len() > MAX_POINTS {
                return Err(MeshError::TooManyPoints { limit: MAX_POINTS });
            }
        }
        Ok((pts, Vec::new()))
    })
}

#[cfg(test)]
mod tests {
    use super::super::{diagnostics, LayerSide};
    use super::*;

    fn left(eps: f64) -> LayerSpec {
        LayerSpec::new(eps, 1.0, 1.0, LayerSide::Left).unwrap()
    }

    #[test]
    fn gartland_large_eps_uniform() {
        let m = gartland(&left(1.0), 1.0 / 16.0, GartlandVariant::Gartland).unwrap();
        assert_eq!(m.n_cells(), 16);
        assert!(m.is_uniform(1e-12));
        let m = gartland(&left(3.0), 1.0 / 16.0, GartlandVariant::GartlandType).unwrap();
        assert!(m.is_uniform(1e-12));
    }

    #[test]
    fn gartland_ratio_bounded_by_e() {
        for &eps in &[1e-2, 1e-4, 1e-8] {
            let m = gartland(&left(eps), 1.0 / 64.0, GartlandVariant::Gartland).unwrap();
            let d = diagnostics(&m, None).unwrap();
            assert!(
                d.local_ratio <= std::f64::consts::E + 1e-12,
                "eps={eps}: {}",
                d.local_ratio
            );
        }
    }

    #[test]
    fn h_out_of_range_rejected() {
        assert!(gartland(&left(1e-3), 1.0, GartlandVariant::Gartland).is_err());
        assert!(duran_lombardi(&left(1e-3), 0.5, 2.0, DuranLombardiVariant::Geometric).is_err());
    }

    #[test]
    fn duran_lombardi_geometric_ratio() {
        let (h, k) = (1.0 / 32.0, 1.0);
        let m = duran_lombardi(&left(1e-6), h, k, DuranLombardiVariant::Geometric).unwrap();
        let sp = m.spacings();
        // cells 2.. up to the last two are geometric
        for w in sp[1..sp.len() - 2].windows(2) {
            assert!((w[1] / w[0] - (1.0 + k * h)).abs() < 1e-9);
        }
    }

    #[test]
    fn duran_lombardi_uniform_start_at_eps_one() {
        let (h, k) = (1.0 / 20.0, 1.0);
        let m = duran_lombardi(&left(1.0), h, k, DuranLombardiVariant::InitialUniform).unwrap();
        assert!((m.n_cells() as f64 - 1.0 / (k * h)).abs() <= 1.0);
    }
}
