use serde::{Deserialize, Serialize};

use crate::mesh::Mesh1D;

/// Coefficients of the difference operators at an interior node, acting on
/// `(u_{i−1}, u_i, u_{i+1})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffOps {
    pub plus: [f64; 3],
    pub minus: [f64; 3],
    pub central: [f64; 3],
    /// `D⁺D⁻ = 2(D⁺ − D⁻)/(h_i + h_{i+1})`.
    pub second: [f64; 3],
}

impl DiffOps {
    pub fn apply(stencil: &[f64; 3], u: [f64; 3]) -> f64 {
        stencil[0] * u[0] + stencil[1] * u[1] + stencil[2] * u[2]
    }
}

/// Stencils at node `1 <= i <= N−1`.
pub fn diff_ops(mesh: &Mesh1D, i: usize) -> DiffOps {
    assert!(i >= 1 && i < mesh.n_cells(), "node {i} is not interior");
    let (hl, hr) = (mesh.h(i), mesh.h(i + 1));
    let hs = hl + hr;
    DiffOps {
        plus: [0.0, -1.0 / hr, 1.0 / hr],
        minus: [-1.0 / hl, 1.0 / hl, 0.0],
        central: [-1.0 / hs, 0.0, 1.0 / hs],
        second: [
            2.0 / (hl * hs),
            -2.0 / (hl * hs) - 2.0 / (hr * hs),
            2.0 / (hr * hs),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{LayerSide, MeshLabel};

    fn graded() -> Mesh1D {
        Mesh1D::new(
            vec![0.0, 0.01, 0.05, 0.2, 0.6, 1.0],
            MeshLabel::new("test", LayerSide::Left),
        )
        .unwrap()
    }

    #[test]
    fn exact_on_linears() {
        let m = graded();
        let p = m.points();
        for i in 1..m.n_cells() {
            let d = diff_ops(&m, i);
            let u = [p[i - 1], p[i], p[i + 1]];
            for s in [&d.plus, &d.minus, &d.central] {
                assert!((DiffOps::apply(s, u) - 1.0).abs() < 1e-12);
            }
            assert!(DiffOps::apply(&d.second, u).abs() < 1e-10);
        }
    }

    #[test]
    fn second_difference_exact_on_quadratics() {
        let m = graded();
        let p = m.points();
        for i in 1..m.n_cells() {
            let d = diff_ops(&m, i);
            let u = [p[i - 1].powi(2), p[i].powi(2), p[i + 1].powi(2)];
            assert!((DiffOps::apply(&d.second, u) - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn uniform_classical() {
        let m = Mesh1D::uniform(4).unwrap();
        let d = diff_ops(&m, 2);
        assert!((d.second[0] - 16.0).abs() < 1e-12 && (d.second[1] + 32.0).abs() < 1e-12);
        assert!((d.central[2] - 2.0).abs() < 1e-12);
    }
}
