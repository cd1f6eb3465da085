//! Adaptive Gauss–Kronrod quadrature for cell integrals of layer functions.

use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// 7-point Gauss weights on the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Two-point Gauss–Legendre nodes on [-1, 1]; weights are both 1.
pub const GAUSS2: [f64; 2] = [-0.577_350_269_189_625_8, 0.577_350_269_189_625_8];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive G7–K15 quadrature over the union of the consecutive
/// intervals given by `breaks`.
///
/// Bisects the piece with the largest error estimate until the total
/// estimate is below `max(atol, rtol * |I|)` or `max_pieces` is reached.
pub fn integrate_breaks<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    rtol: f64,
    atol: f64,
    max_pieces: usize,
) -> QuadResult {
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut err = 0.0;
    for w in breaks.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (v, e) = gk15(&f, w[0], w[1]);
        total += v;
        err += e;
        heap.push(Piece {
            a: w[0],
            b: w[1],
            value: v,
            error: e,
        });
    }
    while err > atol.max(rtol * total.abs()) && heap.len() < max_pieces {
        let Some(p) = heap.pop() else { break };
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            heap.push(p);
            break;
        }
        let (v1, e1) = gk15(&f, p.a, m);
        let (v2, e2) = gk15(&f, m, p.b);
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.error;
        heap.push(Piece {
            a: p.a,
            b: m,
            value: v1,
            error: e1,
        });
        heap.push(Piece {
            a: m,
            b: p.b,
            value: v2,
            error: e2,
        });
    }
    // re-sum to shed accumulated cancellation in the running totals
    let value: f64 = heap.iter().map(|p| p.value).sum();
    let error: f64 = heap.iter().map(|p| p.error).sum();
    QuadResult {
        value,
        error,
        converged: error <= atol.max(rtol * value.abs()),
    }
}

/// Breakpoints on `[a, b]` refined geometrically toward both ends, so that
/// features of width down to `(b - a) * 2^-levels` sitting at an endpoint
/// are seen by the first quadrature pass.
pub fn graded_breaks(a: f64, b: f64, levels: u32) -> Vec<f64> {
    let h = b - a;
    let mut left = Vec::with_capacity(levels as usize + 1);
    let mut right = Vec::with_capacity(levels as usize + 1);
    let mut frac = 0.25;
    for _ in 0..levels {
        left.push(a + h * frac);
        right.push(b - h * frac);
        frac *= 0.5;
    }
    let mut pts = Vec::with_capacity(2 * levels as usize + 3);
    pts.push(a);
    pts.extend(left.iter().rev());
    pts.push(a + 0.5 * h);
    pts.extend(right.iter());
    pts.push(b);
    pts.dedup();
    pts
}

/// Default relative tolerance for cell integrals.
pub const CELL_RTOL: f64 = 1e-10;
/// Geometric pre-refinement depth per cell endpoint (features down to ~1e-9
/// of the cell width).
pub const CELL_LEVELS: u32 = 30;

/// Integral of `f` over one mesh cell, robust to exponential layers pinned
/// at either endpoint of the cell.
pub fn integrate_cell<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> QuadResult {
    integrate_breaks(
        f,
        &graded_breaks(a, b, CELL_LEVELS),
        CELL_RTOL,
        1e-300,
        4000,
    )
}
