use std::time::Instant;

use super::{action_warnings, check_interval, normalize, reduce, run_actions, shifted_form, LejaOptions};
use crate::action::{ActionResult, LogInterpolant};
use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, orthonormal_basis};
use crate::random::{rademacher, seeded_rng};
use crate::report::{DegreeStats, LogDetReport, Method};
use crate::scalar::Scalar;
use crate::sparse::LinearOperator;
use crate::spectral::SpectralInterval;

/// Relative threshold on the `R` diagonal below which sketch directions are dropped.
const RANK_DROP_TOL: f64 = 1e-12;

struct Setup<T> {
    interp: LogInterpolant<T>,
    sigma: T,
    log_sigma: T,
    warnings: Vec<String>,
}

fn setup<T: Scalar>(interval: &SpectralInterval<T>, opts: &LejaOptions<T>) -> Result<Setup<T>> {
    check_interval(interval)?;
    let norm = normalize(interval);
    let interp = LogInterpolant::build(interval, opts.scaling, &opts.taylor, opts.action.max_degree)?;
    let mut warnings = Vec::new();
    if let LogInterpolant::Newton(dd) = &interp {
        if dd.truncated {
            warnings.push(format!(
                "divided differences: Taylor series stopped after {} terms with last term {:e}",
                dd.terms_used, dd.last_term_norm
            ));
        }
    }
    Ok(Setup { interp, sigma: norm.sigma, log_sigma: norm.sigma.ln(), warnings })
}

struct Assembly<'a, T> {
    method: Method,
    n: usize,
    queries: usize,
    seed: u64,
    interval: &'a SpectralInterval<T>,
    opts: &'a LejaOptions<T>,
    start: Instant,
}

impl<T: Scalar> Assembly<'_, T> {
    fn finish(self, setup: Setup<T>, trace: T, actions: &[&ActionResult<T>]) -> LogDetReport<T> {
        let n_log_sigma = T::from_count(self.n) * setup.log_sigma;
        let degrees: Vec<usize> = actions.iter().map(|r| r.degree_used).collect();
        let scaling = match &setup.interp {
            LogInterpolant::Newton(dd) => Some(dd.scaling),
            LogInterpolant::Degenerate { .. } => None,
        };
        LogDetReport {
            method: self.method,
            estimate: n_log_sigma + trace,
            trace_estimate: trace,
            n_log_sigma,
            sigma: setup.sigma,
            n: self.n,
            queries: self.queries,
            degrees: DegreeStats::from_degrees(&degrees),
            matvecs_total: actions.iter().map(|r| r.matvecs).sum(),
            seed: Some(self.seed),
            wall_time: self.start.elapsed().as_secs_f64(),
            reduction: self.opts.reduction,
            interval: Some(*self.interval),
            scaling,
            warnings: setup.warnings,
        }
    }
}

/// `tr log(Q/σ)` when the interval has collapsed to the point `c`.
fn degenerate_trace<T: Scalar>(n: usize, c: T, log_sigma: T) -> T {
    T::from_count(n) * (c.ln() - log_sigma)
}

/// Hutch++ estimate of `log det Q` with Léja-interpolated actions.
///
/// With `k = m_vec / 3`, a Rademacher sketch `S` of `k` columns gives
/// `Y = log(Q̃) S` and an orthonormal basis `A` of its range. The estimate is
/// `n log σ + tr(Aᵀ log(Q̃) A) + mean_j u_jᵀ log(Q̃) u_j`, where
/// `u_j = (I - AAᵀ) g_j` for `m_vec - 2k` fresh Rademacher `g_j`.
///
/// If the interval has collapsed to a point the trace is `n log(c/σ)` and no
/// vectors are drawn.
pub fn hutchpp_logdet<T: Scalar, O: LinearOperator<T>>(
    op: &O,
    m_vec: usize,
    seed: u64,
    interval: &SpectralInterval<T>,
    opts: &LejaOptions<T>,
) -> Result<LogDetReport<T>> {
    if m_vec < 3 {
        return Err(Error::InvalidArgument(format!("Hutch++ needs at least 3 queries, got {m_vec}")));
    }
    let start = Instant::now();
    let n = op.dim();
    let mut setup = setup(interval, opts)?;
    let asm = Assembly { method: Method::LejaHutchpp, n, queries: m_vec, seed, interval, opts, start };
    if let LogInterpolant::Degenerate { c } = setup.interp {
        let trace = degenerate_trace(n, c, setup.log_sigma);
        return Ok(asm.finish(setup, trace, &[]));
    }

    let k = m_vec / 3;
    let r = m_vec - 2 * k;
    let mut rng = seeded_rng(seed);
    let sketch: Vec<Vec<T>> = (0..k).map(|_| rademacher(&mut rng, n)).collect();
    let probes: Vec<Vec<T>> = (0..r).map(|_| rademacher(&mut rng, n)).collect();

    let sketch_actions = run_actions(op, &sketch, &setup.interp, &opts.action)?;
    let y: Vec<Vec<T>> = sketch_actions
        .iter()
        .zip(&sketch)
        .map(|(res, s)| res.vector.iter().zip(s).map(|(&a, &b)| a - setup.log_sigma * b).collect())
        .collect();
    let basis = orthonormal_basis(&y, T::lit(RANK_DROP_TOL));

    let basis_actions = run_actions(op, &basis, &setup.interp, &opts.action)?;
    let det_terms: Vec<T> = basis
        .iter()
        .zip(&basis_actions)
        .map(|(a, res)| shifted_form(a, &res.vector, a, setup.log_sigma))
        .collect();

    let projected: Vec<Vec<T>> = probes
        .iter()
        .map(|g| {
            let mut u = g.clone();
            for a in &basis {
                let h = dot(a, &u);
                axpy(-h, a, &mut u);
            }
            u
        })
        .collect();
    let residual_actions = run_actions(op, &projected, &setup.interp, &opts.action)?;
    let res_terms: Vec<T> = projected
        .iter()
        .zip(&residual_actions)
        .map(|(u, res)| shifted_form(u, &res.vector, u, setup.log_sigma))
        .collect();

    let deterministic = reduce(&det_terms, opts.reduction);
    let residual = reduce(&res_terms, opts.reduction) / T::from_count(r);

    action_warnings("sketch", &sketch_actions, &mut setup.warnings);
    action_warnings("basis", &basis_actions, &mut setup.warnings);
    action_warnings("residual", &residual_actions, &mut setup.warnings);
    let all: Vec<&ActionResult<T>> =
        sketch_actions.iter().chain(&basis_actions).chain(&residual_actions).collect();
    Ok(asm.finish(setup, deterministic + residual, &all))
}

/// Plain Hutchinson estimate `n log σ + mean_j v_jᵀ log(Q̃) v_j` over
/// `m_vec` Rademacher vectors.
pub fn hutchinson_logdet<T: Scalar, O: LinearOperator<T>>(
    op: &O,
    m_vec: usize,
    seed: u64,
    interval: &SpectralInterval<T>,
    opts: &LejaOptions<T>,
) -> Result<LogDetReport<T>> {
    if m_vec == 0 {
        return Err(Error::InvalidArgument("Hutchinson needs at least 1 query".into()));
    }
    let start = Instant::now();
    let n = op.dim();
    let mut setup = setup(interval, opts)?;
    let asm = Assembly { method: Method::Hutchinson, n, queries: m_vec, seed, interval, opts, start };
    if let LogInterpolant::Degenerate { c } = setup.interp {
        let trace = degenerate_trace(n, c, setup.log_sigma);
        return Ok(asm.finish(setup, trace, &[]));
    }

    let mut rng = seeded_rng(seed);
    let probes: Vec<Vec<T>> = (0..m_vec).map(|_| rademacher(&mut rng, n)).collect();
    let actions = run_actions(op, &probes, &setup.interp, &opts.action)?;
    let terms: Vec<T> = probes
        .iter()
        .zip(&actions)
        .map(|(v, res)| shifted_form(v, &res.vector, v, setup.log_sigma))
        .collect();
    let trace = reduce(&terms, opts.reduction) / T::from_count(m_vec);
    action_warnings("probe", &actions, &mut setup.warnings);
    let all: Vec<&ActionResult<T>> = actions.iter().collect();
    Ok(asm.finish(setup, trace, &all))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::CsrMatrix;
    use crate::spectral::BoundsMethod;

    fn iv(lo: f64, hi: f64) -> SpectralInterval<f64> {
        SpectralInterval::new(lo, hi, BoundsMethod::Supplied).unwrap()
    }

    #[test]
    fn identity_is_exactly_zero() {
        let q = CsrMatrix::<f64>::identity(10);
        let r = hutchpp_logdet(&q, 9, 3, &iv(1.0, 1.0), &Default::default()).unwrap();
        assert_eq!(r.estimate, 0.0);
        assert_eq!(r.matvecs_total, 0);
        let r = hutchinson_logdet(&q, 4, 3, &iv(1.0, 1.0), &Default::default()).unwrap();
        assert_eq!(r.estimate, 0.0);
    }

    #[test]
    fn constant_diagonal_uses_closed_form() {
        let q = CsrMatrix::from_diagonal(&[2.0; 100]);
        let r = hutchpp_logdet(&q, 12, 0, &iv(2.0, 2.0), &Default::default()).unwrap();
        assert!((r.estimate - 100.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn small_matrix_captured_by_sketch() {
        let q = CsrMatrix::from_diagonal(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        let mut opts = LejaOptions::default();
        opts.action.tol = 1e-10;
        let r = hutchpp_logdet(&q, 30, 7, &iv(1.0, 5.0), &opts).unwrap();
        assert!((r.estimate - 120f64.ln()).abs() < 1e-6, "{}", r.estimate);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn normalization_applied_below_one() {
        let q = CsrMatrix::from_diagonal(&[0.25, 0.5, 0.75]);
        let mut opts = LejaOptions::default();
        opts.action.tol = 1e-12;
        let r = hutchpp_logdet(&q, 18, 1, &iv(0.25, 0.75), &opts).unwrap();
        assert_eq!(r.sigma, 0.25);
        assert_eq!(r.estimate, r.n_log_sigma + r.trace_estimate);
        assert!((r.estimate - (0.25f64 * 0.5 * 0.75).ln()).abs() < 1e-9);
    }

    #[test]
    fn query_count_validation() {
        let q = CsrMatrix::<f64>::identity(3);
        assert!(hutchpp_logdet(&q, 2, 0, &iv(1.0, 1.0), &Default::default()).is_err());
        assert!(hutchinson_logdet(&q, 0, 0, &iv(1.0, 1.0), &Default::default()).is_err());
    }
}
