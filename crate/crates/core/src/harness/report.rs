use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::discretize::Scheme;

pub const CSV_HEADER: &str = "family,scheme,N,eps,err_max,err_energy,Q,rate_raw,rate_corrected";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    #[default]
    Max,
    Energy,
}

/// Reference decay used for C* = max_N E(N)/target(N).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateTarget {
    NInv,
    NInvLogN,
    NInvSquared,
    NInvLogNSquared,
}

impl RateTarget {
    pub fn value(&self, n: usize) -> f64 {
        let n = n as f64;
        match self {
            RateTarget::NInv => 1.0 / n,
            RateTarget::NInvLogN => n.ln() / n,
            RateTarget::NInvSquared => 1.0 / (n * n),
            RateTarget::NInvLogNSquared => (n.ln() / n).powi(2),
        }
    }

    pub fn for_order(order: u32, log_factor: bool) -> Self {
        match (order, log_factor) {
            (1, false) => RateTarget::NInv,
            (1, true) => RateTarget::NInvLogN,
            (_, false) => RateTarget::NInvSquared,
            (_, true) => RateTarget::NInvLogNSquared,
        }
    }
}

/// `log(E₁/E₂) / log(N₂/N₁)`.
pub fn raw_rate(n1: usize, e1: f64, n2: usize, e2: f64) -> Option<f64> {
    (e1 > 0.0 && e2 > 0.0).then(|| (e1 / e2).ln() / (n2 as f64 / n1 as f64).ln())
}

/// Rate against `ℓ(N) = N⁻¹ ln N`: `log(E₁/E₂) / log(ℓ(N₁)/ℓ(N₂))`, so that
/// `E = ℓ` gives 1 and `E = ℓ²` gives 2.
pub fn corrected_rate(n1: usize, e1: f64, n2: usize, e2: f64) -> Option<f64> {
    let l = |n: usize| (n as f64).ln() / n as f64;
    (e1 > 0.0 && e2 > 0.0 && n1 > 1 && n2 > 1).then(|| (e1 / e2).ln() / (l(n1) / l(n2)).ln())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub family: String,
    pub scheme: Scheme,
    #[serde(rename = "N")]
    pub n: usize,
    pub eps: Vec<f64>,
    pub err_max: Option<f64>,
    pub err_energy: Option<f64>,
    #[serde(rename = "Q")]
    pub quality: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl ErrorRecord {
    pub fn error(&self, norm: Norm) -> Option<f64> {
        match norm {
            Norm::Max => self.err_max,
            Norm::Energy => self.err_energy,
        }
    }
}

/// Uniform-over-ε error at one N and the rates to the next N.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformPoint {
    #[serde(rename = "N")]
    pub n: usize,
    pub error: Option<f64>,
    pub rate_raw: Option<f64>,
    pub rate_corrected: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub family: String,
    pub scheme: Scheme,
    pub norm: Norm,
    pub target: RateTarget,
    #[serde(rename = "N_list")]
    pub n_list: Vec<usize>,
    pub eps_list: Vec<Vec<f64>>,
    pub records: Vec<ErrorRecord>,
    pub uniform: Vec<UniformPoint>,
    /// `max_N E(N, ε)/target(N)` for each ε.
    pub c_star: Vec<Option<f64>>,
    pub c_star_ratio: Option<f64>,
    /// Increases of E(N) with N; below 5% they are tolerated.
    pub inversions: Vec<String>,
    pub failures: usize,
}

impl ConvergenceReport {
    /// Records must be ordered N-major, ε-minor.
    pub fn from_records(
        family: String,
        scheme: Scheme,
        norm: Norm,
        target: RateTarget,
        n_list: Vec<usize>,
        eps_list: Vec<Vec<f64>>,
        records: Vec<ErrorRecord>,
    ) -> Self {
        let ne = eps_list.len();
        let cell = |ni: usize, ei: usize| records[ni * ne + ei].error(norm);
        let errs: Vec<Option<f64>> = (0..n_list.len())
            .map(|ni| {
                let col: Vec<Option<f64>> = (0..ne).map(|ei| cell(ni, ei)).collect();
                if col.is_empty() || col.iter().any(|e| e.is_none()) {
                    None
                } else {
                    col.into_iter().flatten().reduce(f64::max)
                }
            })
            .collect();
        let mut uniform = Vec::with_capacity(n_list.len());
        let mut inversions = Vec::new();
        for (j, &n) in n_list.iter().enumerate() {
            let (mut raw, mut cor) = (None, None);
            if let (Some(e1), Some(e2), Some(&n2)) = (
                errs[j],
                errs.get(j + 1).copied().flatten(),
                n_list.get(j + 1),
            ) {
                raw = raw_rate(n, e1, n2, e2);
                cor = corrected_rate(n, e1, n2, e2);
                if e2 > e1 {
                    let rel = e2 / e1 - 1.0;
                    inversions.push(format!(
                        "E({n2}) exceeds E({n}) by {:.1}%{}",
                        100.0 * rel,
                        if rel < 0.05 { " (tolerated)" } else { "" }
                    ));
                }
            }
            uniform.push(UniformPoint {
                n,
                error: errs[j],
                rate_raw: raw,
                rate_corrected: cor,
            });
        }
        let c_star: Vec<Option<f64>> = (0..ne)
            .map(|ei| {
                let mut best: Option<f64> = None;
                for (ni, &n) in n_list.iter().enumerate() {
                    let e = cell(ni, ei)?;
                    let c = e / target.value(n);
                    best = Some(best.map_or(c, |b| b.max(c)));
                }
                best
            })
            .collect();
        let c_star_ratio =
            if c_star.iter().all(|c| c.is_some_and(|v| v > 0.0)) && !c_star.is_empty() {
                let v: Vec<f64> = c_star.iter().flatten().copied().collect();
                let max = v.iter().copied().fold(0.0, f64::max);
                let min = v.iter().copied().fold(f64::INFINITY, f64::min);
                Some(max / min)
            } else {
                None
            };
        let failures = records.iter().filter(|r| r.failure.is_some()).count();
        Self {
            family,
            scheme,
            norm,
            target,
            n_list,
            eps_list,
            records,
            uniform,
            c_star,
            c_star_ratio,
            inversions,
            failures,
        }
    }

    pub fn uniform_errors(&self) -> Vec<Option<f64>> {
        self.uniform.iter().map(|u| u.error).collect()
    }

    /// Rates for consecutive pairs whose coarser N is at least `n_min`.
    pub fn rates_from(&self, n_min: usize, corrected: bool) -> Vec<Option<f64>> {
        self.uniform
            .iter()
            .take(self.uniform.len().saturating_sub(1))
            .filter(|u| u.n >= n_min)
            .map(|u| {
                if corrected {
                    u.rate_corrected
                } else {
                    u.rate_raw
                }
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        let ne = self.eps_list.len();
        for (i, r) in self.records.iter().enumerate() {
            let u = i.checked_div(ne).and_then(|k| self.uniform.get(k));
            let eps = r
                .eps
                .iter()
                .map(|e| format!("{e:e}"))
                .collect::<Vec<_>>()
                .join(";");
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{}",
                r.family,
                r.scheme,
                r.n,
                eps,
                num(r.err_max),
                num(r.err_energy),
                num(r.quality),
                num(u.and_then(|u| u.rate_raw)),
                num(u.and_then(|u| u.rate_corrected)),
            );
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(s).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn emit(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Csv => self.to_csv(),
            ReportFormat::Json => self.to_json(),
        }
    }

    /// Writes the document; I/O failures are returned.
    pub fn write_to(
        &self,
        format: ReportFormat,
        path: &std::path::Path,
    ) -> Result<(), HarnessError> {
        std::fs::write(path, self.emit(format))?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

fn num(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6e}")).unwrap_or_default()
}
