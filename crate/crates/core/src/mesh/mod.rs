//! Layer-adapted meshes on [0, 1].
//!
//! Every constructor builds the mesh for a layer at `x = 0` and then places
//! it according to [`LayerSide`]: `Right` reflects it, `Both` joins two
//! half-meshes built on [0, 1/2] (with the half-interval rescaling applied to
//! ε, N and H).

mod bakhvalov;
mod diagnostics;
mod equidistribute;
mod lambert;
mod recursive;
mod shishkin;
mod system;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::roots::RootError;

pub use bakhvalov::{bakhvalov_original, bakhvalov_type, BakhvalovMesh};
pub use diagnostics::{diagnostics, MeshDiagnostics};
pub use equidistribute::{bakhvalov_monitor, equidistribute, Equidistributed, DEFAULT_MONITOR_K};
pub use lambert::{lambert_mesh, lambert_mesh_with, LambertForm};
pub use recursive::{duran_lombardi, gartland, DuranLombardiVariant, GartlandVariant};
pub use shishkin::{bakhvalov_shishkin, shishkin, shishkin_type, MeshCharFn};
pub use system::{system_shishkin, SystemShishkin};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MeshError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid cell count {n}: {reason}")]
    InvalidCount { n: usize, reason: String },
    #[error("mesh points not strictly increasing at index {index}")]
    NotMonotone { index: usize },
    #[error("mesh endpoints must be exactly 0 and 1 (got {first}, {last})")]
    Endpoints { first: f64, last: f64 },
    #[error("root finding failed at t = {t}: {source}")]
    Root {
        t: f64,
        #[source]
        source: RootError,
    },
    #[error("recursive mesh exceeded {limit} points")]
    TooManyPoints { limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LayerSide {
    Left,
    Right,
    Both,
}

impl fmt::Display for LayerSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LayerSide::Left => "left",
            LayerSide::Right => "right",
            LayerSide::Both => "both",
        })
    }
}

impl std::str::FromStr for LayerSide {
    type Err = MeshError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "left" => Ok(Self::Left),
            "right" => Ok(Self::Right),
            "both" => Ok(Self::Both),
            other => Err(MeshError::InvalidParameter(format!(
                "unknown side {other:?}"
            ))),
        }
    }
}

/// Layer term `exp(-γ x / ε)` the mesh is built for, and the method order
/// parameter μ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub eps: f64,
    pub gamma: f64,
    pub mu: f64,
    pub side: LayerSide,
}

impl LayerSpec {
    pub fn new(eps: f64, gamma: f64, mu: f64, side: LayerSide) -> Result<Self, MeshError> {
        let spec = Self {
            eps,
            gamma,
            mu,
            side,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), MeshError> {
        for (name, v) in [("eps", self.eps), ("gamma", self.gamma), ("mu", self.mu)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(MeshError::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Layer width scale `μ ε / γ`.
    pub fn width(&self) -> f64 {
        self.mu * self.eps / self.gamma
    }

    fn with_eps(&self, eps: f64) -> Self {
        Self { eps, ..*self }
    }
}

/// Family tag plus the parameters a mesh was built with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshLabel {
    pub family: String,
    pub side: LayerSide,
    pub params: Vec<(String, f64)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl MeshLabel {
    pub fn new(family: impl Into<String>, side: LayerSide) -> Self {
        Self {
            family: family.into(),
            side,
            params: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn param(mut self, name: &str, value: f64) -> Self {
        self.params.push((name.to_string(), value));
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == name).map(|&(_, v)| v)
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }
}

impl fmt::Display for MeshLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}", self.family, self.side)?;
        for (k, v) in &self.params {
            write!(f, ",{k}={v}")?;
        }
        f.write_str("]")
    }
}

/// Strictly increasing partition of [0, 1] with cached spacings.
#[derive(Debug, Clone)]
pub struct Mesh1D {
    points: Vec<f64>,
    spacings: Vec<f64>,
    label: MeshLabel,
    // points this mesh was reflected from; 1 - (1 - x) is not exact for
    // x < 1/2, so the pre-image is kept to make `mirror` an exact involution
    reflected_from: Option<Arc<(Vec<f64>, MeshLabel)>>,
}

impl PartialEq for Mesh1D {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points && self.label == other.label
    }
}

impl Mesh1D {
    /// Validates and wraps a point list.
    pub fn new(points: Vec<f64>, label: MeshLabel) -> Result<Self, MeshError> {
        if points.len() < 2 || points[0] != 0.0 || *points.last().unwrap() != 1.0 {
            return Err(MeshError::Endpoints {
                first: points.first().copied().unwrap_or(f64::NAN),
                last: points.last().copied().unwrap_or(f64::NAN),
            });
        }
        let spacings: Vec<f64> = points.windows(2).map(|w| w[1] - w[0]).collect();
        if let Some(i) = spacings.iter().position(|&h| !(h > 0.0)) {
            return Err(MeshError::NotMonotone { index: i + 1 });
        }
        Ok(Self {
            points,
            spacings,
            label,
            reflected_from: None,
        })
    }

    pub fn uniform(n: usize) -> Result<Self, MeshError> {
        if n == 0 {
            return Err(MeshError::InvalidCount {
                n,
                reason: "need at least one cell".into(),
            });
        }
        Self::new(
            uniform_points(0.0, 1.0, n),
            MeshLabel::new("uniform", LayerSide::Left).param("N", n as f64),
        )
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// `spacings()[i - 1] = x_i - x_{i-1}`.
    pub fn spacings(&self) -> &[f64] {
        &self.spacings
    }

    /// Spacing `h_i = x_i - x_{i-1}` for `1 <= i <= N`.
    pub fn h(&self, i: usize) -> f64 {
        self.spacings[i - 1]
    }

    /// Number of cells N.
    pub fn n_cells(&self) -> usize {
        self.spacings.len()
    }

    pub fn label(&self) -> &MeshLabel {
        &self.label
    }

    pub fn label_mut(&mut self) -> &mut MeshLabel {
        &mut self.label
    }

    pub fn is_uniform(&self, rtol: f64) -> bool {
        let h0 = 1.0 / self.n_cells() as f64;
        self.spacings.iter().all(|&h| (h - h0).abs() <= rtol * h0)
    }

    /// Reflection `x -> 1 - x`, reversing the point order. Exact involution.
    pub fn mirror(&self) -> Mesh1D {
        if let Some(src) = &self.reflected_from {
            let (points, label) = (src.0.clone(), src.1.clone());
            let spacings = points.windows(2).map(|w| w[1] - w[0]).collect();
            return Mesh1D {
                points,
                spacings,
                label,
                reflected_from: None,
            };
        }
        let n = self.points.len();
        let mut points: Vec<f64> = (0..n).map(|j| 1.0 - self.points[n - 1 - j]).collect();
        points[0] = 0.0;
        points[n - 1] = 1.0;
        let spacings = points.windows(2).map(|w| w[1] - w[0]).collect();
        let mut label = self.label.clone();
        label.side = match label.side {
            LayerSide::Left => LayerSide::Right,
            LayerSide::Right => LayerSide::Left,
            LayerSide::Both => LayerSide::Both,
        };
        Mesh1D {
            points,
            spacings,
            label,
            reflected_from: Some(Arc::new((self.points.clone(), self.label.clone()))),
        }
    }

    /// Each cell split into `k` equal parts; nested refinement.
    pub fn refine(&self, k: usize) -> Mesh1D {
        let mut pts = Vec::with_capacity(self.n_cells() * k + 1);
        for w in self.points.windows(2) {
            for j in 0..k {
                pts.push(w[0] + (w[1] - w[0]) * j as f64 / k as f64);
            }
        }
        pts.push(1.0);
        let label = self.label.clone().param("refined", k as f64);
        Mesh1D::new(pts, label).expect("refinement of a valid mesh is valid")
    }

    /// CSV `i,x_i,h_i` (h_0 is written as 0).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,x_i,h_i\n");
        for (i, x) in self.points.iter().enumerate() {
            let h = if i == 0 { 0.0 } else { self.spacings[i - 1] };
            out.push_str(&format!("{i},{x:.17e},{h:.17e}\n"));
        }
        out
    }
}

/// `n + 1` equally spaced points from `a` to `b`, endpoints exact.
pub(crate) fn uniform_points(a: f64, b: f64, n: usize) -> Vec<f64> {
    let mut pts: Vec<f64> = (0..=n)
        .map(|i| a + (b - a) * (i as f64 / n as f64))
        .collect();
    pts[0] = a;
    pts[n] = b;
    pts
}

pub(crate) fn require_even(n: usize, min: usize) -> Result<(), MeshError> {
    if n < min || !n.is_multiple_of(2) {
        return Err(MeshError::InvalidCount {
            n,
            reason: format!("must be even and at least {min}"),
        });
    }
    Ok(())
}

/// How a left-layer builder is rescaled to produce a half mesh on [0, 1/2].
pub(crate) enum Half {
    Full,
    /// Build on [0, 1] with doubled ε (and halved N or doubled H); the
    /// caller then scales by 1/2.
    Half,
}

/// Places a left-layer construction on the requested side.
///
/// `build` receives the effective ε and whether it should build the half
/// mesh; it returns points on [0, 1] with the layer at 0.
pub(crate) fn place<F>(spec: &LayerSpec, label: MeshLabel, build: F) -> Result<Mesh1D, MeshError>
where
    F: Fn(&LayerSpec, Half) -> Result<(Vec<f64>, Vec<String>), MeshError>,
{
    match spec.side {
        LayerSide::Left | LayerSide::Right => {
            let (pts, warnings) = build(spec, Half::Full)?;
            let mut label = label;
            label.side = LayerSide::Left;
            label.warnings.extend(warnings);
            let mesh = Mesh1D::new(pts, label)?;
            Ok(if spec.side == LayerSide::Right {
                mesh.mirror()
            } else {
                mesh
            })
        }
        LayerSide::Both => {
            let half_spec = spec.with_eps(2.0 * spec.eps);
            let (half, warnings) = build(&half_spec, Half::Half)?;
            let m = half.len() - 1;
            let mut pts = Vec::with_capacity(2 * m + 1);
            pts.extend(half.iter().map(|x| 0.5 * x));
            // right half: reflected, exact for x >= 1/2
            pts.extend(half[..m].iter().rev().map(|x| 1.0 - 0.5 * x));
            let mut label = label;
            label.warnings.extend(warnings);
            Mesh1D::new(pts, label)
        }
    }
}
