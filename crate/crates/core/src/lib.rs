//! Log-determinants of sparse symmetric positive definite matrices.
//!
//! `log det Q = tr log Q` is estimated by combining a randomized trace
//! estimator (Hutch++ or Hutchinson) with matrix-free actions `log(Q) v`
//! computed by Newton interpolation at fast Léja points. Stochastic Lanczos
//! quadrature and exact Cholesky-based values are provided as baselines.
//!
//! ```
//! use leja_logdet::{estimate_logdet, gen_pentadiagonal, EstimateSettings};
//!
//! let q = gen_pentadiagonal::<f64>(500, 1).unwrap();
//! let report = estimate_logdet(&q, &EstimateSettings::default()).unwrap();
//! assert!(report.estimate > 0.0);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod action;
pub mod divdiff;
pub mod error;
pub mod estimate;
pub mod gmrf;
pub mod leja;
pub mod linalg;
pub mod oracle;
pub mod random;
pub mod report;
pub mod scalar;
pub mod sparse;
pub mod spectral;
pub mod trace;

pub use action::{log_matvec, ActionOptions, ActionResult, LogInterpolant};
pub use divdiff::{divided_differences_log, DividedDiffs, ScalingChoice, TaylorOptions};
pub use error::{Error, Result};
pub use estimate::{estimate_logdet, BoundsSpec, EstimateSettings};
pub use leja::{generate_fast_leja, LejaSequence};
pub use oracle::{band_logdet_cholesky, dense_logdet_cholesky, gmrf_grid_logdet_analytic, BandCholesky, DenseMatrix};
pub use report::{DegreeStats, LogDetReport, Method, ReductionMode};
pub use scalar::Scalar;
pub use sparse::{gen_gmrf_grid, gen_pentadiagonal, CsrMatrix, LinearOperator};
pub use spectral::{gershgorin_bounds, lanczos_bounds, map_params, BoundsMethod, EpsFloor, MapParams, SpectralInterval};
pub use trace::{hutchinson_logdet, hutchpp_logdet, normalize, slq_logdet, LejaOptions, Normalization};

/// Double-precision aliases.
pub type Csr = CsrMatrix<f64>;
pub type Interval = SpectralInterval<f64>;
pub type Report = LogDetReport<f64>;
pub type Settings = EstimateSettings<f64>;
pub type Dense = DenseMatrix<f64>;

/// Single-precision aliases.
pub type Csr32 = CsrMatrix<f32>;
pub type Report32 = LogDetReport<f32>;
