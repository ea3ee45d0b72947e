//! Matrix sources and exact reference values.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use leja_logdet::oracle::{dense_logdet_cholesky_capped, DenseMatrix};
use leja_logdet::sparse::load_matrix_market;
use leja_logdet::{band_logdet_cholesky, gen_gmrf_grid, gen_pentadiagonal, gmrf_grid_logdet_analytic, Csr, Method};

/// Band factorizations above this many stored entries are not attempted.
const BAND_STORAGE_CAP: usize = 50_000_000;
/// Band factorizations above this many flops are not attempted.
const BAND_FLOP_CAP: f64 = 5e10;

/// `pentadiagonal:N[:SEED]` or `gmrf:G:THETA`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GenSpec {
    Pentadiagonal { n: usize, seed: u64 },
    Gmrf { g: usize, theta: f64 },
}

impl FromStr for GenSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str, what: &str| p.parse::<f64>().map_err(|_| format!("bad {what} '{p}' in '{s}'"));
        let count = |p: &str, what: &str| p.parse::<usize>().map_err(|_| format!("bad {what} '{p}' in '{s}'"));
        match parts.as_slice() {
            ["pentadiagonal", n] => Ok(GenSpec::Pentadiagonal { n: count(n, "size")?, seed: 0 }),
            ["pentadiagonal", n, seed] => Ok(GenSpec::Pentadiagonal {
                n: count(n, "size")?,
                seed: seed.parse().map_err(|_| format!("bad seed '{seed}' in '{s}'"))?,
            }),
            ["gmrf", g, theta] => Ok(GenSpec::Gmrf { g: count(g, "grid side")?, theta: num(theta, "theta")? }),
            _ => Err(format!("unknown generator '{s}'; expected pentadiagonal:N[:SEED] or gmrf:G:THETA")),
        }
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenSpec::Pentadiagonal { n, seed } => write!(f, "pentadiagonal:{n}:{seed}"),
            GenSpec::Gmrf { g, theta } => write!(f, "gmrf:{g}:{theta}"),
        }
    }
}

impl GenSpec {
    pub fn build(&self) -> Result<Csr> {
        Ok(match *self {
            GenSpec::Pentadiagonal { n, seed } => gen_pentadiagonal(n, seed)?,
            GenSpec::Gmrf { g, theta } => gen_gmrf_grid(g, theta)?,
        })
    }

    pub fn gmrf(&self) -> Option<(usize, f64)> {
        match *self {
            GenSpec::Gmrf { g, theta } => Some((g, theta)),
            GenSpec::Pentadiagonal { .. } => None,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Source {
    File(PathBuf),
    Generated(GenSpec),
}

impl Source {
    pub fn load(&self) -> Result<Csr> {
        match self {
            Source::File(path) => {
                load_matrix_market(path).with_context(|| format!("reading {}", path.display()))
            }
            Source::Generated(spec) => spec.build(),
        }
    }

    pub fn gmrf(&self) -> Option<(usize, f64)> {
        match self {
            Source::Generated(spec) => spec.gmrf(),
            Source::File(_) => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Source::File(path) => path.display().to_string(),
            Source::Generated(spec) => spec.to_string(),
        }
    }
}

fn band_feasible(q: &Csr) -> bool {
    let (n, bw) = (q.dim(), q.bandwidth());
    n.saturating_mul(bw + 1) <= BAND_STORAGE_CAP && n as f64 * (bw * bw) as f64 <= BAND_FLOP_CAP
}

/// The cheapest exact method that applies to `q`, if any.
pub fn best_oracle(q: &Csr, gmrf: Option<(usize, f64)>, dense_cap: usize) -> Option<Method> {
    if matches!(gmrf, Some((g, _)) if g * g == q.dim()) {
        Some(Method::ExactAnalytic)
    } else if band_feasible(q) {
        Some(Method::ExactBand)
    } else if q.dim() <= dense_cap {
        Some(Method::ExactDense)
    } else {
        None
    }
}

pub fn exact_logdet(q: &Csr, method: Method, gmrf: Option<(usize, f64)>, dense_cap: usize) -> Result<f64> {
    Ok(match method {
        Method::ExactAnalytic => {
            let (g, theta) = gmrf.ok_or_else(|| anyhow!("the analytic oracle needs a gmrf:G:THETA matrix"))?;
            gmrf_grid_logdet_analytic(g, theta)?
        }
        Method::ExactBand => band_logdet_cholesky(q, q.bandwidth())?,
        Method::ExactDense => dense_logdet_cholesky_capped(&DenseMatrix::from_csr(q), dense_cap)?,
        other => bail!("{other} is not an exact method"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_generators() {
        assert_eq!("pentadiagonal:100".parse(), Ok(GenSpec::Pentadiagonal { n: 100, seed: 0 }));
        assert_eq!("pentadiagonal:100:7".parse(), Ok(GenSpec::Pentadiagonal { n: 100, seed: 7 }));
        assert_eq!("gmrf:8:-0.2".parse(), Ok(GenSpec::Gmrf { g: 8, theta: -0.2 }));
        assert!("gmrf:8".parse::<GenSpec>().is_err());
        assert!("tridiagonal:4".parse::<GenSpec>().is_err());
    }

    #[test]
    fn oracle_choice() {
        let q = gen_gmrf_grid(5, -0.1).unwrap();
        assert_eq!(best_oracle(&q, Some((5, -0.1)), 4000), Some(Method::ExactAnalytic));
        assert_eq!(best_oracle(&q, None, 4000), Some(Method::ExactBand));
    }
}
