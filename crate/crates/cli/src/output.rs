//! Rendering of estimate results.

use std::fmt::Write as _;

use clap::ValueEnum;
use leja_logdet::{Method, ReductionMode, Report};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Settings after defaults and flags have been combined.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub matrix: String,
    pub method: Method,
    pub queries: usize,
    pub probes: usize,
    pub slq_degree: usize,
    pub tol: f64,
    pub max_degree: usize,
    pub s_val: String,
    pub bounds: String,
    pub seed: u64,
    pub reduction: ReductionMode,
    pub exact: Option<Method>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateOutput {
    pub config: ResolvedConfig,
    pub n: usize,
    pub nnz: usize,
    pub report: Report,
    pub exact: Option<f64>,
    pub rel_error: Option<f64>,
}

const CSV_HEADER: &str = "method,n,nnz,estimate,trace_estimate,n_log_sigma,sigma,queries,degree_min,degree_median,\
                          degree_max,matvecs,seed,wall_time,exact,rel_error,warnings";

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl EstimateOutput {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Format::Csv => format!("{CSV_HEADER}\n{}\n", self.csv_row()),
            Format::Table => self.table(),
        }
    }

    fn csv_row(&self) -> String {
        let r = &self.report;
        [
            r.method.to_string(),
            self.n.to_string(),
            self.nnz.to_string(),
            r.estimate.to_string(),
            r.trace_estimate.to_string(),
            r.n_log_sigma.to_string(),
            r.sigma.to_string(),
            r.queries.to_string(),
            r.degrees.min.to_string(),
            r.degrees.median.to_string(),
            r.degrees.max.to_string(),
            r.matvecs_total.to_string(),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
            r.wall_time.to_string(),
            opt(self.exact),
            opt(self.rel_error),
            csv_field(&r.warnings.join("; ")),
        ]
        .join(",")
    }

    fn table(&self) -> String {
        let r = &self.report;
        let mut rows: Vec<(&str, String)> = vec![
            ("matrix", self.config.matrix.clone()),
            ("n", self.n.to_string()),
            ("nnz", self.nnz.to_string()),
            ("method", r.method.to_string()),
            ("log det", format!("{:.12e}", r.estimate)),
            ("trace part", format!("{:.12e}", r.trace_estimate)),
            ("n log sigma", format!("{:.12e}", r.n_log_sigma)),
            ("sigma", r.sigma.to_string()),
        ];
        if let Some(iv) = &r.interval {
            rows.push(("interval", format!("[{:e}, {:e}] ({:?})", iv.lambda_min, iv.lambda_max, iv.method)));
        }
        if let Some(s) = r.scaling {
            rows.push(("scaling s", s.to_string()));
        }
        if !r.method.is_exact() {
            rows.push(("queries", r.queries.to_string()));
            rows.push(("degree min/med/max", format!("{}/{}/{}", r.degrees.min, r.degrees.median, r.degrees.max)));
            rows.push(("matvecs", r.matvecs_total.to_string()));
        }
        rows.push(("wall time [s]", format!("{:.6}", r.wall_time)));
        if let Some(e) = self.exact {
            rows.push(("exact", format!("{e:.12e}")));
        }
        if let Some(e) = self.rel_error {
            rows.push(("rel error", format!("{e:.3e}")));
        }
        for w in &r.warnings {
            rows.push(("warning", w.clone()));
        }
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        out
    }
}
