use super::{diff_ops, DiscreteOperator, DiscretizeError, Scheme};
use crate::linalg::{BlockTridiag, DenseMatrix};
use crate::mesh::Mesh1D;
use crate::problems::SystemProblem;
use crate::quadrature::GAUSS2;

/// Assembles `scheme` for `problem` on `mesh`. IAS has its own entry point
/// because of its extra preconditions; passing it here forwards to it.
pub fn assemble(
    problem: &SystemProblem,
    mesh: &Mesh1D,
    scheme: Scheme,
) -> Result<DiscreteOperator, DiscretizeError> {
    match scheme {
        Scheme::SimpleUpwind | Scheme::MidpointUpwind => upwind(problem, mesh, scheme),
        Scheme::Central => {
            let d = DenseMatrix::from_diagonal(problem.diffusion());
            central_kernel(problem, mesh, Scheme::Central, |_, _| Ok(d.clone()))
        }
        Scheme::Ias => super::ias_assemble(problem, mesh),
        Scheme::GalerkinFem => galerkin(problem, mesh),
    }
}

/// Empty operator with identity boundary rows.
pub(super) fn skeleton(problem: &SystemProblem, mesh: &Mesh1D, scheme: Scheme) -> DiscreteOperator {
    let (n, m) = (mesh.n_cells(), problem.m());
    let mut op = BlockTridiag::zeros(n + 1, m);
    op.diag_mut()[0] = DenseMatrix::identity(m);
    op.diag_mut()[n] = DenseMatrix::identity(m);
    let mut rhs = vec![0.0; (n + 1) * m];
    rhs[..m].copy_from_slice(problem.g0());
    rhs[n * m..].copy_from_slice(problem.g1());
    DiscreteOperator {
        op,
        rhs,
        mesh: mesh.clone(),
        scheme,
        problem: problem.name.clone(),
        warnings: Vec::new(),
    }
}

/// Rows `−D_i D⁺D⁻u + B D⁰u + A u = f` at every interior node, with the
/// diffusion matrix `D_i` supplied per node (diag(E) for the central
/// scheme, the fitted matrix for IAS).
pub(super) fn central_kernel<F>(
    problem: &SystemProblem,
    mesh: &Mesh1D,
    scheme: Scheme,
    mut diffusion: F,
) -> Result<DiscreteOperator, DiscretizeError>
where
    F: FnMut(usize, Option<&DenseMatrix>) -> Result<DenseMatrix, DiscretizeError>,
{
    let mut out = skeleton(problem, mesh, scheme);
    let (n, m) = (mesh.n_cells(), problem.m());
    let pts = mesh.points();
    for i in 1..n {
        let x = pts[i];
        let ops = diff_ops(mesh, i);
        let (s, c) = (ops.second, ops.central);
        let b = problem.b().map(|b| b.eval(x));
        let a = problem.a().eval(x);
        let d = diffusion(i, b.as_ref())?;
        let mut lo = DenseMatrix::zeros(m, m);
        let mut di = DenseMatrix::zeros(m, m);
        let mut up = DenseMatrix::zeros(m, m);
        for k in 0..m {
            for j in 0..m {
                let bkj = b.as_ref().map_or(0.0, |b| b[(k, j)]);
                lo[(k, j)] = -d[(k, j)] * s[0] + bkj * c[0];
                di[(k, j)] = -d[(k, j)] * s[1] + a[(k, j)];
                up[(k, j)] = -d[(k, j)] * s[2] + bkj * c[2];
            }
        }
        out.op.lower_mut()[i - 1] = lo;
        out.op.diag_mut()[i] = di;
        out.op.upper_mut()[i] = up;
        out.rhs[i * m..(i + 1) * m].copy_from_slice(&problem.f().eval(x));
    }
    Ok(out)
}

/// Simple upwind: `b_kk` with D⁻ where `b_kk > 0` and D⁺ otherwise, chosen
/// per node; off-diagonal convection with D⁰.
///
/// Midpoint upwind: on the upwind cell `[x_{i−1}, x_i]` (or `[x_i, x_{i+1}]`
/// when `b_kk < 0`) all convection and reaction coefficients and f are taken
/// at the cell midpoint, convection uses the one-sided difference over that
/// cell and the reaction term averages the two nodal values.
fn upwind(
    problem: &SystemProblem,
    mesh: &Mesh1D,
    scheme: Scheme,
) -> Result<DiscreteOperator, DiscretizeError> {
    let bc = problem.b().ok_or_else(|| DiscretizeError::Incompatible {
        scheme,
        reason: "upwinding needs a convection term".into(),
    })?;
    let mut out = skeleton(problem, mesh, scheme);
    let (n, m) = (mesh.n_cells(), problem.m());
    let pts = mesh.points();
    let d = problem.diffusion();
    let mut seen_sign = vec![(false, false); m];
    for i in 1..n {
        let ops = diff_ops(mesh, i);
        let b_node = bc.eval(pts[i]);
        let mut lo = DenseMatrix::zeros(m, m);
        let mut di = DenseMatrix::zeros(m, m);
        let mut up = DenseMatrix::zeros(m, m);
        for k in 0..m {
            let forward = b_node[(k, k)] < 0.0;
            if forward {
                seen_sign[k].1 = true;
            } else {
                seen_sign[k].0 = true;
            }
            let one_sided = if forward { ops.plus } else { ops.minus };
            let s = ops.second;
            lo[(k, k)] = -d[k] * s[0];
            di[(k, k)] = -d[k] * s[1];
            up[(k, k)] = -d[k] * s[2];
            let (rhs, b, a, weights) = match scheme {
                Scheme::SimpleUpwind => {
                    let x = pts[i];
                    (
                        problem.f().eval(x)[k],
                        b_node.clone(),
                        problem.a().eval(x),
                        [0.0, 1.0, 0.0],
                    )
                }
                _ => {
                    let xm = if forward {
                        0.5 * (pts[i] + pts[i + 1])
                    } else {
                        0.5 * (pts[i - 1] + pts[i])
                    };
                    let w = if forward {
                        [0.0, 0.5, 0.5]
                    } else {
                        [0.5, 0.5, 0.0]
                    };
                    (
                        problem.f().eval(xm)[k],
                        bc.eval(xm),
                        problem.a().eval(xm),
                        w,
                    )
                }
            };
            for j in 0..m {
                let conv = if j == k || scheme == Scheme::MidpointUpwind {
                    one_sided
                } else {
                    ops.central
                };
                lo[(k, j)] += b[(k, j)] * conv[0] + a[(k, j)] * weights[0];
                di[(k, j)] += b[(k, j)] * conv[1] + a[(k, j)] * weights[1];
                up[(k, j)] += b[(k, j)] * conv[2] + a[(k, j)] * weights[2];
            }
            out.rhs[i * m + k] = rhs;
        }
        out.op.lower_mut()[i - 1] = lo;
        out.op.diag_mut()[i] = di;
        out.op.upper_mut()[i] = up;
    }
    for (k, &(pos, neg)) in seen_sign.iter().enumerate() {
        if pos && neg {
            out.warnings.push(format!(
                "b_{0}{0} changes sign on the mesh; upwind direction chosen per node",
                k + 1
            ));
        }
    }
    Ok(out)
}

/// Linear elements, 2-point Gauss per cell (exact for constant
/// coefficients); rows are the Galerkin equations at interior nodes.
fn galerkin(problem: &SystemProblem, mesh: &Mesh1D) -> Result<DiscreteOperator, DiscretizeError> {
    let mut out = skeleton(problem, mesh, Scheme::GalerkinFem);
    let (n, m) = (mesh.n_cells(), problem.m());
    let pts = mesh.points();
    let d = problem.diffusion();
    for c in 0..n {
        let (xl, xr) = (pts[c], pts[c + 1]);
        let h = xr - xl;
        let dphi = [-1.0 / h, 1.0 / h];
        let mut k_loc = [
            [DenseMatrix::zeros(m, m), DenseMatrix::zeros(m, m)],
            [DenseMatrix::zeros(m, m), DenseMatrix::zeros(m, m)],
        ];
        let mut f_loc = [vec![0.0; m], vec![0.0; m]];
        for (ta, row) in k_loc.iter_mut().enumerate() {
            for (tb, blk) in row.iter_mut().enumerate() {
                for k in 0..m {
                    blk[(k, k)] += d[k] * dphi[ta] * dphi[tb] * h;
                }
            }
        }
        for &xi in &GAUSS2 {
            let x = 0.5 * (xl + xr) + 0.5 * h * xi;
            let w = 0.5 * h;
            let phi = [(xr - x) / h, (x - xl) / h];
            let a = problem.a().eval(x);
            let b = problem.b().map(|b| b.eval(x));
            let f = problem.f().eval(x);
            for ta in 0..2 {
                for tb in 0..2 {
                    let blk = &mut k_loc[ta][tb];
                    for k in 0..m {
                        for j in 0..m {
                            let conv = b.as_ref().map_or(0.0, |b| b[(k, j)] * dphi[tb]);
                            blk[(k, j)] += w * phi[ta] * (conv + a[(k, j)] * phi[tb]);
                        }
                    }
                }
                for k in 0..m {
                    f_loc[ta][k] += w * f[k] * phi[ta];
                }
            }
        }
        for ta in 0..2 {
            let g = c + ta;
            if g == 0 || g == n {
                continue;
            }
            for tb in 0..2 {
                let col = c + tb;
                let target = if col + 1 == g {
                    &mut out.op.lower_mut()[g - 1]
                } else if col == g {
                    &mut out.op.diag_mut()[g]
                } else {
                    &mut out.op.upper_mut()[g]
                };
                *target = target.add(&k_loc[ta][tb]);
            }
            for k in 0..m {
                out.rhs[g * m + k] += f_loc[ta][k];
            }
        }
    }
    Ok(out)
}
