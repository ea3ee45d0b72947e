//! One-call front end: bounds, method dispatch and timing.

use std::time::Instant;

use crate::action::ActionOptions;
use crate::divdiff::{ScalingChoice, TaylorOptions};
use crate::error::{Error, Result};
use crate::oracle::{band_logdet_cholesky, dense_logdet_cholesky_capped, gmrf_grid_logdet_analytic, DenseMatrix};
use crate::report::{LogDetReport, Method, ReductionMode};
use crate::scalar::Scalar;
use crate::sparse::CsrMatrix;
use crate::spectral::{gershgorin_bounds, lanczos_bounds, BoundsMethod, EpsFloor, KrylovOptions, SpectralInterval};
use crate::trace::{hutchinson_logdet, hutchpp_logdet, slq_logdet, LejaOptions};

/// Where the spectral interval comes from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundsSpec<T> {
    Gershgorin(EpsFloor<T>),
    Lanczos(KrylovOptions<T>),
    Supplied { lambda_min: T, lambda_max: T },
}

impl<T: Scalar> BoundsSpec<T> {
    pub fn compute(&self, q: &CsrMatrix<T>) -> Result<SpectralInterval<T>> {
        match *self {
            BoundsSpec::Gershgorin(floor) => gershgorin_bounds(q, floor),
            BoundsSpec::Lanczos(opts) => lanczos_bounds(q, &opts),
            BoundsSpec::Supplied { lambda_min, lambda_max } => {
                SpectralInterval::new(lambda_min, lambda_max, BoundsMethod::Supplied)
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EstimateSettings<T> {
    pub method: Method,
    /// `m_vec` for Hutch++ and Hutchinson.
    pub queries: usize,
    /// `n_v` for SLQ.
    pub probes: usize,
    /// `m_l` for SLQ.
    pub slq_degree: usize,
    pub tol: T,
    pub max_degree: usize,
    pub scaling: ScalingChoice<T>,
    pub taylor: TaylorOptions<T>,
    pub bounds: BoundsSpec<T>,
    pub seed: u64,
    pub reduction: ReductionMode,
    pub dense_cap: usize,
    /// Grid side and `θ` when the matrix is the lattice GMRF, enabling the
    /// closed-form oracle.
    pub gmrf: Option<(usize, T)>,
}

impl<T: Scalar> Default for EstimateSettings<T> {
    fn default() -> Self {
        Self {
            method: Method::LejaHutchpp,
            queries: 12,
            probes: 30,
            slq_degree: 40,
            tol: T::lit(1e-7),
            max_degree: 400,
            scaling: ScalingChoice::OptimalCenter,
            taylor: TaylorOptions::default(),
            bounds: BoundsSpec::Gershgorin(EpsFloor::default()),
            seed: 0,
            reduction: ReductionMode::Sequential,
            dense_cap: crate::oracle::DEFAULT_DENSE_CAP,
            gmrf: None,
        }
    }
}

impl<T: Scalar> EstimateSettings<T> {
    pub fn leja_options(&self) -> LejaOptions<T> {
        LejaOptions {
            action: ActionOptions { tol: self.tol, max_degree: self.max_degree, force_degree: None },
            scaling: self.scaling,
            taylor: self.taylor,
            reduction: self.reduction,
        }
    }
}

/// Runs `s.method` on `q`. The reported wall time includes bound estimation.
pub fn estimate_logdet<T: Scalar>(q: &CsrMatrix<T>, s: &EstimateSettings<T>) -> Result<LogDetReport<T>> {
    let start = Instant::now();
    let n = q.dim();
    let mut report = match s.method {
        Method::LejaHutchpp => {
            let interval = s.bounds.compute(q)?;
            hutchpp_logdet(q, s.queries, s.seed, &interval, &s.leja_options())?
        }
        Method::Hutchinson => {
            let interval = s.bounds.compute(q)?;
            hutchinson_logdet(q, s.queries, s.seed, &interval, &s.leja_options())?
        }
        Method::Slq => slq_logdet(q, s.slq_degree, s.probes, s.seed, s.reduction)?,
        Method::ExactDense => {
            if n > s.dense_cap {
                return Err(Error::TooLarge { n, cap: s.dense_cap });
            }
            let value = dense_logdet_cholesky_capped(&DenseMatrix::from_csr(q), s.dense_cap)?;
            LogDetReport::exact(Method::ExactDense, n, value, 0.0)
        }
        Method::ExactBand => {
            let value = band_logdet_cholesky(q, q.bandwidth())?;
            LogDetReport::exact(Method::ExactBand, n, value, 0.0)
        }
        Method::ExactAnalytic => {
            let (g, theta) = s.gmrf.ok_or_else(|| {
                Error::InvalidArgument("exact-analytic needs a lattice GMRF matrix (gmrf:G:THETA)".into())
            })?;
            if g * g != n {
                return Err(Error::DimensionMismatch { expected: g * g, found: n });
            }
            LogDetReport::exact(Method::ExactAnalytic, n, gmrf_grid_logdet_analytic(g, theta)?, 0.0)
        }
    };
    report.wall_time = start.elapsed().as_secs_f64();
    Ok(report)
}
