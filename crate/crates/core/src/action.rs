//! `log(Q) v` by Newton interpolation at mapped Léja points.
//!
//! With `B = (Q - cI)/γ`, whose spectrum lies in `[-2, 2]`, the recurrence is
//!
//! ```text
//! w_0 = v,              P_0 = d_0 w_0
//! w_{m+1} = (B - ξ_m I) w_m,   P_{m+1} = P_m + d_{m+1} w_{m+1}
//! ```
//!
//! and stops once `e_m = |d_m| · ‖w_m‖₂` falls below `tol · ‖v‖₂`.

use crate::divdiff::{divided_differences_log, DividedDiffs, ScalingChoice, TaylorOptions};
use crate::error::{Error, Result};
use crate::leja::LejaSequence;
use crate::linalg::norm2;
use crate::scalar::Scalar;
use crate::sparse::LinearOperator;
use crate::spectral::{map_params, MapParams, SpectralInterval};

/// Polynomial approximation of `log` on a spectral interval.
#[derive(Clone, Debug)]
pub enum LogInterpolant<T> {
    /// The interval collapsed to the point `c`; the operator acts as `log(c) I`.
    Degenerate { c: T },
    Newton(DividedDiffs<T>),
}

impl<T: Scalar> LogInterpolant<T> {
    /// Divided differences for up to `max_degree` steps on `interval`.
    pub fn build(
        interval: &SpectralInterval<T>,
        scaling: ScalingChoice<T>,
        taylor: &TaylorOptions<T>,
        max_degree: usize,
    ) -> Result<Self> {
        let mp = map_params(interval);
        if mp.is_degenerate() {
            return Ok(LogInterpolant::Degenerate { c: mp.c });
        }
        let seq = LejaSequence::from_pool(max_degree + 1)?;
        Ok(LogInterpolant::Newton(divided_differences_log(&seq, &mp, scaling, taylor)?))
    }

    pub fn map(&self) -> MapParams<T> {
        match self {
            LogInterpolant::Degenerate { c } => MapParams { c: *c, gamma: T::zero() },
            LogInterpolant::Newton(dd) => dd.map,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, LogInterpolant::Degenerate { .. })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ActionOptions<T> {
    /// Stopping tolerance relative to `‖v‖₂`.
    pub tol: T,
    pub max_degree: usize,
    /// Run exactly this many steps, ignoring the stopping rule.
    pub force_degree: Option<usize>,
}

impl<T: Scalar> Default for ActionOptions<T> {
    fn default() -> Self {
        Self { tol: T::lit(1e-7), max_degree: 400, force_degree: None }
    }
}

#[derive(Clone, Debug)]
pub struct ActionResult<T> {
    pub vector: Vec<T>,
    pub degree_used: usize,
    /// Last `e_m`.
    pub error_estimate: T,
    pub matvecs: usize,
    pub converged: bool,
    /// `e_0, …, e_m`.
    pub estimates: Vec<T>,
}

/// Approximates `log(Q) v`.
pub fn log_matvec<T: Scalar, O: LinearOperator<T>>(
    op: &O,
    v: &[T],
    interp: &LogInterpolant<T>,
    opts: &ActionOptions<T>,
) -> Result<ActionResult<T>> {
    let n = op.dim();
    if v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: v.len() });
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite { step: 0 });
    }

    let dd = match interp {
        LogInterpolant::Degenerate { c } => {
            let lc = c.ln();
            return Ok(ActionResult {
                vector: v.iter().map(|&x| lc * x).collect(),
                degree_used: 0,
                error_estimate: T::zero(),
                matvecs: 0,
                converged: true,
                estimates: vec![T::zero()],
            });
        }
        LogInterpolant::Newton(dd) => dd,
    };

    let available = dd.len() - 1;
    let max_degree = opts.max_degree.min(available);
    if let Some(k) = opts.force_degree {
        if k > available {
            return Err(Error::InvalidArgument(format!(
                "forced degree {k} exceeds the {available} available divided differences"
            )));
        }
    }

    let c = dd.map.c;
    let inv_gamma = dd.map.gamma.recip();
    let tol_abs = opts.tol * norm2(v);
    let mut w = v.to_vec();
    let mut qw = vec![T::zero(); n];
    let mut p: Vec<T> = w.iter().map(|&x| dd.coeffs[0] * x).collect();
    let mut err = dd.coeffs[0].abs() * norm2(&w);
    let mut estimates = vec![err];
    let mut m = 0;

    loop {
        let done = match opts.force_degree {
            Some(k) => m >= k,
            None => err <= tol_abs || m >= max_degree,
        };
        if done {
            break;
        }
        op.apply(&w, &mut qw);
        let xi = dd.nodes[m];
        for (wi, &qi) in w.iter_mut().zip(&qw) {
            *wi = (qi - c * *wi) * inv_gamma - xi * *wi;
        }
        m += 1;
        let d = dd.coeffs[m];
        for (pi, &wi) in p.iter_mut().zip(&w) {
            *pi = *pi + d * wi;
        }
        err = d.abs() * norm2(&w);
        if !err.is_finite() {
            return Err(Error::NonFinite { step: m });
        }
        estimates.push(err);
    }

    Ok(ActionResult {
        vector: p,
        degree_used: m,
        error_estimate: err,
        matvecs: m,
        converged: err <= tol_abs,
        estimates,
    })
}
