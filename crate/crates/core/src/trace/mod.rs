//! Log-determinant estimators built on `log det Q = n log σ + tr log(Q/σ)`.
//!
//! `Q/σ` is never formed. Actions run on `Q` itself and each quadratic form is
//! corrected with `vᵀ log(Q/σ) v = vᵀ log(Q) v - log(σ) ‖v‖²`.

mod hutchpp;
mod slq;

pub use hutchpp::{hutchinson_logdet, hutchpp_logdet};
pub use slq::slq_logdet;

use rayon::prelude::*;

use crate::action::{log_matvec, ActionOptions, ActionResult, LogInterpolant};
use crate::divdiff::{ScalingChoice, TaylorOptions};
use crate::error::Result;
use crate::linalg::dot;
use crate::report::ReductionMode;
use crate::scalar::Scalar;
use crate::sparse::LinearOperator;
use crate::spectral::SpectralInterval;

/// The shift `σ` with `Q̃ = Q/σ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Normalization<T> {
    pub sigma: T,
    pub scaled: bool,
}

impl<T: Scalar> Normalization<T> {
    /// `[λmin/σ, λmax/σ]`.
    pub fn scaled_interval(&self, interval: &SpectralInterval<T>) -> SpectralInterval<T> {
        SpectralInterval {
            lambda_min: interval.lambda_min / self.sigma,
            lambda_max: interval.lambda_max / self.sigma,
            method: interval.method,
        }
    }
}

/// `σ = λmin` when `λmin < 1`, otherwise `σ = 1`.
pub fn normalize<T: Scalar>(interval: &SpectralInterval<T>) -> Normalization<T> {
    if interval.lambda_min < T::one() {
        Normalization { sigma: interval.lambda_min, scaled: true }
    } else {
        Normalization { sigma: T::one(), scaled: false }
    }
}

/// Settings shared by the Léja-based estimators.
#[derive(Clone, Copy, Debug)]
pub struct LejaOptions<T> {
    pub action: ActionOptions<T>,
    pub scaling: ScalingChoice<T>,
    pub taylor: TaylorOptions<T>,
    pub reduction: ReductionMode,
}

impl<T: Scalar> Default for LejaOptions<T> {
    fn default() -> Self {
        Self {
            action: ActionOptions::default(),
            scaling: ScalingChoice::OptimalCenter,
            taylor: TaylorOptions::default(),
            reduction: ReductionMode::Sequential,
        }
    }
}

/// Applies `log(Q)` to each vector. Vectors are independent, so they are
/// processed in parallel; the order of the results matches the input.
fn run_actions<T: Scalar, O: LinearOperator<T>>(
    op: &O,
    vectors: &[Vec<T>],
    interp: &LogInterpolant<T>,
    opts: &ActionOptions<T>,
) -> Result<Vec<ActionResult<T>>> {
    vectors.par_iter().map(|v| log_matvec(op, v, interp, opts)).collect()
}

fn reduce<T: Scalar>(terms: &[T], mode: ReductionMode) -> T {
    match mode {
        ReductionMode::Sequential => terms.iter().fold(T::zero(), |acc, &t| acc + t),
        ReductionMode::Parallel => terms.par_iter().copied().reduce(T::zero, |a, b| a + b),
    }
}

/// `uᵀ log(Q/σ) v` from `y = log(Q) v`.
fn shifted_form<T: Scalar>(u: &[T], y: &[T], v: &[T], log_sigma: T) -> T {
    dot(u, y) - log_sigma * dot(u, v)
}

fn action_warnings<T: Scalar>(label: &str, results: &[ActionResult<T>], warnings: &mut Vec<String>) {
    for (i, r) in results.iter().enumerate() {
        if !r.converged {
            warnings.push(format!(
                "{label} action {i} did not converge: degree {} with error estimate {:e}",
                r.degree_used, r.error_estimate
            ));
        }
    }
}

/// Re-validates an interval whose fields may have been set directly.
fn check_interval<T: Scalar>(interval: &SpectralInterval<T>) -> Result<()> {
    SpectralInterval::new(interval.lambda_min, interval.lambda_max, interval.method).map(|_| ())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::BoundsMethod;

    fn iv(lo: f64, hi: f64) -> SpectralInterval<f64> {
        SpectralInterval::new(lo, hi, BoundsMethod::Supplied).unwrap()
    }

    #[test]
    fn normalization_examples() {
        let n = normalize(&iv(0.12, 1.88));
        assert_eq!(n, Normalization { sigma: 0.12, scaled: true });
        let s = n.scaled_interval(&iv(0.12, 1.88));
        assert_eq!(s.lambda_min, 1.0);
        assert!((s.lambda_max - 15.666666666666666).abs() < 1e-12);

        assert_eq!(normalize(&iv(2.0, 5.0)), Normalization { sigma: 1.0, scaled: false });

        let n = normalize(&iv(0.5, 0.8));
        assert_eq!(n.sigma, 0.5);
        let s = n.scaled_interval(&iv(0.5, 0.8));
        assert_eq!((s.lambda_min, s.lambda_max), (1.0, 1.6));
    }

    #[test]
    fn reductions_agree_closely() {
        let terms: Vec<f64> = (0..1000).map(|k| (k as f64).sin()).collect();
        let a = reduce(&terms, ReductionMode::Sequential);
        let b = reduce(&terms, ReductionMode::Parallel);
        assert!((a - b).abs() < 1e-12);
    }
}
