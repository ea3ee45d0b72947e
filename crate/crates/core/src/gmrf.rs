//! Maximum-likelihood scan for the lattice GMRF parameter `θ`.
//!
//! For `x ~ N(0, Q(θ)⁻¹)` on `n = g²` sites,
//! `2 log p(x | θ) = log det Q(θ) - xᵀ Q(θ) x - n log(2π)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::oracle::{gmrf_grid_logdet_analytic, BandCholesky};
use crate::random::{seeded_rng, standard_normal};
use crate::scalar::Scalar;
use crate::sparse::gen_gmrf_grid;
use crate::spectral::{gershgorin_bounds, EpsFloor};
use crate::trace::{hutchpp_logdet, LejaOptions};

/// Largest grid side the Cholesky sampler accepts.
pub const SAMPLER_MAX_SIDE: usize = 64;

/// Draws `x ~ N(0, Q(θ)⁻¹)` by solving `Lᵀ x = z` with `Q = LLᵀ`.
pub fn sample_gmrf<T: Scalar>(g: usize, theta: T, seed: u64) -> Result<Vec<T>> {
    if g > SAMPLER_MAX_SIDE {
        return Err(Error::InvalidArgument(format!(
            "sampling a {g}x{g} grid exceeds the Cholesky sampler limit of {SAMPLER_MAX_SIDE}; \
             use the analytic log-determinant curve instead"
        )));
    }
    let q = gen_gmrf_grid(g, theta)?;
    let factor = BandCholesky::factor(&q, g)?;
    let z: Vec<T> = standard_normal(&mut seeded_rng(seed), g * g);
    factor.solve_transposed(&z)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LikelihoodRow<T = f64> {
    pub theta: T,
    pub loglik: T,
    pub logdet_est: T,
    pub quadform: T,
}

/// Log-likelihood of `x` at every `θ` in `grid`, with `log det Q(θ)` from
/// Léja–Hutch++ over Gershgorin bounds (whose lower end is `1 - 4|θ|`).
///
/// The same `seed` is used at every `θ`, so the probe vectors are shared and
/// the curve is smooth in `θ`. Values with `|θ| >= 1/4` lie outside the
/// parameter space; their rows carry `-inf` for `logdet_est` and `loglik`.
pub fn likelihood_curve<T: Scalar>(
    x: &[T],
    g: usize,
    grid: &[T],
    m_vec: usize,
    seed: u64,
    opts: &LejaOptions<T>,
) -> Result<Vec<LikelihoodRow<T>>> {
    let n = g * g;
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.len() });
    }
    let n_log_2pi = T::from_count(n) * (T::lit(2.0) * T::PI()).ln();
    grid.iter()
        .map(|&theta| {
            if !(theta.abs() < T::lit(0.25)) {
                let quadform = quadform_unchecked(x, g, theta);
                let loglik = T::neg_infinity();
                return Ok(LikelihoodRow { theta, loglik, logdet_est: T::neg_infinity(), quadform });
            }
            let q = gen_gmrf_grid(g, theta)?;
            let bounds = gershgorin_bounds(&q, EpsFloor::default())?;
            let logdet_est = hutchpp_logdet(&q, m_vec, seed, &bounds, opts)?.estimate;
            let quadform = dot(x, &q.matvec(x)?);
            let loglik = T::lit(0.5) * (logdet_est - quadform - n_log_2pi);
            Ok(LikelihoodRow { theta, loglik, logdet_est, quadform })
        })
        .collect()
}

/// `xᵀ Q(θ) x` for any `θ`, straight from the lattice stencil.
fn quadform_unchecked<T: Scalar>(x: &[T], g: usize, theta: T) -> T {
    let mut coupling = T::zero();
    for r in 0..g {
        for c in 0..g {
            let i = r * g + c;
            if c + 1 < g {
                coupling = coupling + x[i] * x[i + 1];
            }
            if r + 1 < g {
                coupling = coupling + x[i] * x[i + g];
            }
        }
    }
    dot(x, x) + T::lit(2.0) * theta * coupling
}

/// `(θ, log det Q(θ))` from the closed-form spectrum; needs no sample.
/// Values with `|θ| >= 1/4` get `-inf`.
pub fn analytic_logdet_curve<T: Scalar>(g: usize, grid: &[T]) -> Result<Vec<(T, T)>> {
    grid.iter()
        .map(|&theta| {
            if !(theta.abs() < T::lit(0.25)) {
                return Ok((theta, T::neg_infinity()));
            }
            Ok((theta, gmrf_grid_logdet_analytic(g, theta)?))
        })
        .collect()
}

/// `θ` of the row with the largest log-likelihood (first one on ties).
pub fn argmax_theta<T: Scalar>(rows: &[LikelihoodRow<T>]) -> Option<T> {
    rows.iter()
        .fold(None::<&LikelihoodRow<T>>, |best, r| match best {
            Some(b) if b.loglik >= r.loglik => Some(b),
            _ => Some(r),
        })
        .map(|r| r.theta)
}

/// `start, start + step, …` up to `stop` inclusive (within half a step),
/// rounded to 12 decimals so that e.g. `-0.25` comes out exact.
pub fn theta_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(stop >= start) {
        return Err(Error::InvalidArgument(format!("bad grid {start}:{step}:{stop}")));
    }
    let count = ((stop - start) / step + 0.5).floor() as usize + 1;
    Ok((0..count).map(|k| ((start + step * k as f64) * 1e12).round() / 1e12).collect())
}
