use serde::{Deserialize, Serialize};

use super::{ProblemError, ReferenceSolution};
use crate::mesh::{LayerSide, LayerSpec, MeshError};

/// One exponential layer term `e^{−rate·d/eps}`, d the distance to the side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayerTerm {
    pub side: LayerSide,
    pub rate: f64,
    pub eps: f64,
}

impl LayerTerm {
    pub fn new(side: LayerSide, rate: f64, eps: f64) -> Self {
        Self { side, rate, eps }
    }

    fn decay(&self, x: f64) -> f64 {
        let e = |d: f64| (-self.rate * d / self.eps).exp();
        match self.side {
            LayerSide::Left => e(x),
            LayerSide::Right => e(1.0 - x),
            LayerSide::Both => e(x) + e(1.0 - x),
        }
    }

    fn distance(&self, x: f64) -> f64 {
        match self.side {
            LayerSide::Left => x,
            LayerSide::Right => 1.0 - x,
            LayerSide::Both => x.min(1.0 - x),
        }
    }
}

/// Bound `1 + Σ_t ε_t^{−k} e^{−β_t d_t(x)/ε_t}` on the k-th derivative,
/// shared by all components.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LayerEnvelope {
    pub terms: Vec<LayerTerm>,
}

impl LayerEnvelope {
    pub fn new(terms: Vec<LayerTerm>) -> Self {
        Self { terms }
    }

    /// `e^{−κx/ε} + e^{−κ(1−x)/ε}` per ε, the reaction–diffusion form.
    pub fn reaction_diffusion(kappa: f64, eps: &[f64]) -> Self {
        Self::new(
            eps.iter()
                .map(|&e| LayerTerm::new(LayerSide::Both, kappa, e))
                .collect(),
        )
    }

    pub fn eval(&self, x: f64, k: u32) -> f64 {
        1.0 + self
            .terms
            .iter()
            .map(|t| t.eps.powi(-(k as i32)) * t.decay(x))
            .sum::<f64>()
    }

    /// Combined layer location.
    pub fn side(&self) -> Option<LayerSide> {
        let mut left = false;
        let mut right = false;
        for t in &self.terms {
            match t.side {
                LayerSide::Left => left = true,
                LayerSide::Right => right = true,
                LayerSide::Both => {
                    left = true;
                    right = true;
                }
            }
        }
        match (left, right) {
            (true, true) => Some(LayerSide::Both),
            (true, false) => Some(LayerSide::Left),
            (false, true) => Some(LayerSide::Right),
            (false, false) => None,
        }
    }

    /// Smallest decay rate over all terms.
    pub fn min_rate(&self) -> Option<f64> {
        self.terms.iter().map(|t| t.rate).reduce(f64::min)
    }

    /// Distinct ε values in ascending order.
    pub fn eps_list(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.terms.iter().map(|t| t.eps).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// Single-layer mesh spec resolving the thinnest layer.
    pub fn layer_spec(&self, mu: f64) -> Result<LayerSpec, MeshError> {
        let (eps, gamma, side) = match (self.eps_list().first(), self.min_rate(), self.side()) {
            (Some(&e), Some(g), Some(s)) => (e, g, s),
            _ => {
                return Err(MeshError::InvalidParameter(
                    "problem has no layer terms".into(),
                ))
            }
        };
        LayerSpec::new(eps, gamma, mu, side)
    }

    /// Length scale at x: ε/β inside a layer, half the distance to it
    /// outside, so a difference stencil never reaches into a layer.
    fn local_scale(&self, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let (d, w) = (t.distance(x), t.eps / t.rate);
                if d <= LAYER_WIDTHS * w {
                    w
                } else {
                    0.5 * d
                }
            })
            .fold(1.0, f64::min)
    }
}

const LAYER_WIDTHS: f64 = 40.0;
const SAMPLES_PER_WIDTH: f64 = 50.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeFit {
    /// Minimal C with `|u_i^{(k)}(x)| ≤ C·envelope(x, k)` on the samples.
    pub c: f64,
    pub at_x: f64,
    pub component: usize,
    pub samples: usize,
}

/// Fits the envelope constant by sampling central finite differences of
/// the reference. Inside each layer the sample spacing and difference step
/// are `ε/(50β)`; away from layers the samples are 1/1000 apart and the
/// difference step is 1/50 of the distance scale `min(1, d/2)`.
pub fn envelope_check(
    reference: &ReferenceSolution,
    env: &LayerEnvelope,
    k: u32,
) -> Result<EnvelopeFit, ProblemError> {
    if k > 2 {
        return Err(ProblemError::Unsupported("derivatives above second order"));
    }
    let mut xs: Vec<f64> = (0..=1000).map(|i| i as f64 / 1000.0).collect();
    for t in &env.terms {
        let step = t.eps / (t.rate * SAMPLES_PER_WIDTH);
        let width = LAYER_WIDTHS * t.eps / t.rate;
        let count = (width / step).ceil() as usize;
        for j in 0..=count {
            let d = (j as f64 * step).min(1.0);
            match t.side {
                LayerSide::Left => xs.push(d),
                LayerSide::Right => xs.push(1.0 - d),
                LayerSide::Both => {
                    xs.push(d);
                    xs.push(1.0 - d);
                }
            }
        }
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let m = reference.m();
    let (mut lo, mut mid, mut hi) = (vec![0.0; m], vec![0.0; m], vec![0.0; m]);
    let mut fit = EnvelopeFit {
        c: 0.0,
        at_x: 0.0,
        component: 0,
        samples: xs.len(),
    };
    for &x0 in &xs {
        let delta = env.local_scale(x0) / SAMPLES_PER_WIDTH;
        let x = x0.clamp(delta, 1.0 - delta);
        reference.eval_into(x, &mut mid);
        if k > 0 {
            reference.eval_into(x - delta, &mut lo);
            reference.eval_into(x + delta, &mut hi);
        }
        let bound = env.eval(x, k);
        if !(bound > 0.0) {
            return Err(ProblemError::Invalid(format!(
                "envelope vanishes at x = {x}"
            )));
        }
        for c in 0..m {
            let d = match k {
                0 => mid[c],
                1 => (hi[c] - lo[c]) / (2.0 * delta),
                _ => (hi[c] - 2.0 * mid[c] + lo[c]) / (delta * delta),
            };
            let r = d.abs() / bound;
            if r > fit.c {
                fit.c = r;
                fit.at_x = x;
                fit.component = c;
            }
        }
    }
    Ok(fit)
}
