//! Safeguarded scalar root finding.

/// Absolute residual tolerance used by every mesh construction.
pub const ROOT_TOL: f64 = 1e-12;
pub const ROOT_MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RootError {
    #[error("no sign change on [{lo}, {hi}] (f = {flo:e}, {fhi:e})")]
    NoSignChange {
        lo: f64,
        hi: f64,
        flo: f64,
        fhi: f64,
    },
    #[error(
        "root finder stalled after {iterations} iterations at x = {x} (residual {residual:e})"
    )]
    NoConvergence {
        iterations: usize,
        x: f64,
        residual: f64,
    },
}

/// Newton's method kept inside a sign-change bracket; falls back to
/// bisection whenever the Newton step leaves the bracket or fails to halve
/// the residual.
///
/// `f` returns the value and derivative. Terminates when `|f(x)| <= tol`, or
/// when the bracket has shrunk to adjacent floating-point numbers (the best
/// attainable root, reported with its residual).
pub fn newton_bisect<F>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
    max_iter: usize,
) -> Result<Root, RootError>
where
    F: FnMut(f64) -> (f64, f64),
{
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let (fa, _) = f(a);
    let (fb, _) = f(b);
    if fa.abs() <= tol {
        return Ok(Root {
            x: a,
            residual: fa.abs(),
            iterations: 0,
        });
    }
    if fb.abs() <= tol {
        return Ok(Root {
            x: b,
            residual: fb.abs(),
            iterations: 0,
        });
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(RootError::NoSignChange {
            lo: a,
            hi: b,
            flo: fa,
            fhi: fb,
        });
    }
    let rising = fb > 0.0;
    let mut x = 0.5 * (a + b);
    let mut last_abs = f64::INFINITY;
    for it in 1..=max_iter {
        let (fx, dfx) = f(x);
        if fx.abs() <= tol {
            return Ok(Root {
                x,
                residual: fx.abs(),
                iterations: it,
            });
        }
        if (fx > 0.0) == rising {
            b = x;
        } else {
            a = x;
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            // bracket exhausted at floating-point resolution
            return Ok(Root {
                x,
                residual: fx.abs(),
                iterations: it,
            });
        }
        let newton = x - fx / dfx;
        x = if dfx != 0.0 && newton > a && newton < b && fx.abs() <= 0.5 * last_abs {
            newton
        } else {
            mid
        };
        last_abs = fx.abs();
    }
    let (fx, _) = f(x);
    Err(RootError::NoConvergence {
        iterations: max_iter,
        x,
        residual: fx.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = newton_bisect(
            |x| (x * x - 2.0, 2.0 * x),
            0.0,
            2.0,
            ROOT_TOL,
            ROOT_MAX_ITER,
        )
        .unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rejects_missing_bracket() {
        let err = newton_bisect(|x| (x * x + 1.0, 2.0 * x), -1.0, 1.0, ROOT_TOL, 50).unwrap_err();
        assert!(matches!(err, RootError::NoSignChange { .. }));
    }

    #[test]
    fn survives_flat_derivative() {
        // derivative vanishes at the root; Newton alone would crawl
        let r = newton_bisect(
            |x| (x.powi(3), 3.0 * x * x),
            -1.0,
            0.5,
            1e-30,
            ROOT_MAX_ITER,
        )
        .unwrap();
        assert!(r.x.abs() < 1e-9);
    }

    #[test]
    fn decreasing_function() {
        let r = newton_bisect(|x| (1.0 - x, -1.0), 0.0, 3.0, ROOT_TOL, ROOT_MAX_ITER).unwrap();
        assert!((r.x - 1.0).abs() < 1e-12);
    }
}
