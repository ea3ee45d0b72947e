//! Estimator output shared by every method.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::spectral::SpectralInterval;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    LejaHutchpp,
    Hutchinson,
    Slq,
    ExactDense,
    ExactBand,
    ExactAnalytic,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::LejaHutchpp,
        Method::Hutchinson,
        Method::Slq,
        Method::ExactDense,
        Method::ExactBand,
        Method::ExactAnalytic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::LejaHutchpp => "leja-hutchpp",
            Method::Hutchinson => "hutchinson",
            Method::Slq => "slq",
            Method::ExactDense => "exact-dense",
            Method::ExactBand => "exact-band",
            Method::ExactAnalytic => "exact-analytic",
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Method::ExactDense | Method::ExactBand | Method::ExactAnalytic)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method '{s}'")))
    }
}

/// How per-probe contributions are summed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionMode {
    /// In probe order; results are bitwise reproducible.
    #[default]
    Sequential,
    /// Rayon tree reduction; the last bits may depend on scheduling.
    Parallel,
}

/// Polynomial degrees (or Lanczos steps) over all actions of a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub min: usize,
    pub median: f64,
    pub max: usize,
}

impl DegreeStats {
    pub fn from_degrees(degrees: &[usize]) -> Self {
        if degrees.is_empty() {
            return Self::default();
        }
        let mut d = degrees.to_vec();
        d.sort_unstable();
        let k = d.len();
        let median = if k % 2 == 1 { d[k / 2] as f64 } else { 0.5 * (d[k / 2 - 1] + d[k / 2]) as f64 };
        Self { min: d[0], median, max: d[k - 1] }
    }
}

/// Result of a log-determinant computation.
///
/// `estimate` is always assembled as `n_log_sigma + trace_estimate`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogDetReport<T = f64> {
    pub method: Method,
    pub estimate: T,
    /// `tr log(Q/σ)`.
    pub trace_estimate: T,
    pub n_log_sigma: T,
    pub sigma: T,
    pub n: usize,
    /// Probe vectors drawn (`m_vec`, or `n_v` for SLQ).
    pub queries: usize,
    pub degrees: DegreeStats,
    pub matvecs_total: usize,
    pub seed: Option<u64>,
    pub wall_time: f64,
    pub reduction: ReductionMode,
    pub interval: Option<SpectralInterval<T>>,
    /// Taylor expansion point used for the divided differences.
    pub scaling: Option<T>,
    pub warnings: Vec<String>,
}

impl<T: crate::Scalar> LogDetReport<T> {
    /// Report for a value computed without sampling or normalization.
    pub fn exact(method: Method, n: usize, value: T, wall_time: f64) -> Self {
        Self {
            method,
            estimate: value,
            trace_estimate: value,
            n_log_sigma: T::zero(),
            sigma: T::one(),
            n,
            queries: 0,
            degrees: DegreeStats::default(),
            matvecs_total: 0,
            seed: None,
            wall_time,
            reduction: ReductionMode::Sequential,
            interval: None,
            scaling: None,
            warnings: Vec::new(),
        }
    }

    pub fn has_warnings(&self) -> bool {
        !self.warnings.is_empty()
    }
}
