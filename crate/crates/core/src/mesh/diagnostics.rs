use serde::{Deserialize, Serialize};

use super::{Mesh1D, MeshError};
use crate::quadrature::integrate_cell;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshDiagnostics {
    pub n_cells: usize,
    pub min_h: f64,
    pub max_h: f64,
    /// `max h_i / h_{i±1}` over adjacent cells; 1 for a uniform mesh.
    pub local_ratio: f64,
    /// `max_k ∫_{x_{k-1}}^{x_k} g` when an envelope g was supplied.
    pub quality: Option<f64>,
    /// Cells whose quadrature missed the 1e-10 relative tolerance.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unconverged_cells: Vec<usize>,
}

pub fn diagnostics(
    mesh: &Mesh1D,
    envelope: Option<&dyn Fn(f64) -> f64>,
) -> Result<MeshDiagnostics, MeshError> {
    let h = mesh.spacings();
    let min_h = h.iter().copied().fold(f64::INFINITY, f64::min);
    let max_h = h.iter().copied().fold(0.0, f64::max);
    let local_ratio = h
        .windows(2)
        .map(|w| (w[0] / w[1]).max(w[1] / w[0]))
        .fold(1.0, f64::max);
    let mut unconverged_cells = Vec::new();
    let quality = envelope.map(|g| {
        let mut q: f64 = 0.0;
        for (k, w) in mesh.points().windows(2).enumerate() {
            let r = integrate_cell(g, w[0], w[1]);
            if !r.converged {
                unconverged_cells.push(k + 1);
            }
            q = q.max(r.value);
        }
        q
    });
    if let Some(q) = quality {
        if !q.is_finite() {
            return Err(MeshError::InvalidParameter(
                "envelope is not integrable".into(),
            ));
        }
    }
    Ok(MeshDiagnostics {
        n_cells: mesh.n_cells(),
        min_h,
        max_h,
        local_ratio,
        quality,
        unconverged_cells,
    })
}

impl MeshDiagnostics {
    /// Comment-line footer for CSV output.
    pub fn to_footer(&self) -> String {
        let mut s = format!(
            "# n_cells={}\n# min_h={:.6e}\n# max_h={:.6e}\n# local_ratio={:.6e}\n",
            self.n_cells, self.min_h, self.max_h, self.local_ratio
        );
        if let Some(q) = self.quality {
            s.push_str(&format!("# quality={q:.6e}\n"));
        }
        if !self.unconverged_cells.is_empty() {
            s.push_str(&format!(
                "# quadrature_unconverged_cells={:?}\n",
                self.unconverged_cells
            ));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::super::{shishkin, LayerSide, LayerSpec};
    use super::*;

    #[test]
    fn uniform_mesh_unit_envelope() {
        let m = Mesh1D::uniform(32).unwrap();
        let d = diagnostics(&m, Some(&|_| 1.0)).unwrap();
        assert!((d.quality.unwrap() - 1.0 / 32.0).abs() < 1e-15);
        assert!((d.local_ratio - 1.0).abs() < 1e-12);
        assert!(d.quality.unwrap() >= d.max_h - 1e-15);
    }

    #[test]
    fn shishkin_ratio_jumps_at_transition() {
        let spec = LayerSpec::new(1e-8, 1.0, 2.0, LayerSide::Left).unwrap();
        let m = shishkin(&spec, 64).unwrap();
        let d = diagnostics(&m, None).unwrap();
        let expected = m.h(33) / m.h(32);
        assert!((d.local_ratio - expected).abs() <= 1e-9 * expected);
        assert!(d.local_ratio > 1e5);
    }
}
