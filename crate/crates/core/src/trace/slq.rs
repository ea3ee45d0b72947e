use std::time::Instant;

use rand::SeedableRng;
use rayon::prelude::*;

use super::reduce;
use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, norm2, scale_in_place, tridiagonal_eigen};
use crate::random::{rademacher, SeededRng};
use crate::report::{DegreeStats, LogDetReport, Method, ReductionMode};
use crate::scalar::Scalar;
use crate::sparse::LinearOperator;

struct Quadrature<T> {
    value: T,
    steps: usize,
}

/// `‖v‖² e_1ᵀ log(T) e_1` from `m_l` Lanczos steps with full reorthogonalization.
fn lanczos_quadrature<T: Scalar, O: LinearOperator<T>>(op: &O, v: &[T], m_l: usize) -> Result<Quadrature<T>> {
    let n = op.dim();
    let v_norm = norm2(v);
    let mut q = v.to_vec();
    scale_in_place(v_norm.recip(), &mut q);
    let mut basis = vec![q];
    let mut alphas = Vec::with_capacity(m_l);
    let mut betas: Vec<T> = Vec::with_capacity(m_l);
    let mut w = vec![T::zero(); n];
    let breakdown_tol = T::lit(100.0) * T::epsilon();

    for j in 0..m_l {
        op.apply(&basis[j], &mut w);
        // First Rayleigh quotient from the unscaled probe, which is exact for
        // multiples of the identity.
        let alpha = if j == 0 {
            let mut av = vec![T::zero(); n];
            op.apply(v, &mut av);
            dot(v, &av) / dot(v, v)
        } else {
            dot(&basis[j], &w)
        };
        axpy(-alpha, &basis[j], &mut w);
        if j > 0 {
            axpy(-betas[j - 1], &basis[j - 1], &mut w);
        }
        for b in &basis {
            let h = dot(b, &w);
            axpy(-h, b, &mut w);
        }
        alphas.push(alpha);
        if j + 1 == m_l {
            break;
        }
        let beta = norm2(&w);
        let prev = betas.last().copied().unwrap_or_else(T::zero);
        if beta <= breakdown_tol * (alpha.abs() + prev) {
            break;
        }
        betas.push(beta);
        let mut next = w.clone();
        scale_in_place(beta.recip(), &mut next);
        basis.push(next);
    }

    let steps = alphas.len();
    let eig = tridiagonal_eigen(&alphas, &betas[..steps - 1]);
    let mut sum = T::zero();
    for (&theta, &tau) in eig.values.iter().zip(&eig.first_components) {
        if !(theta > T::zero()) {
            return Err(Error::NotPositiveDefinite { row: 0, pivot: theta.as_f64() });
        }
        sum = sum + tau * tau * theta.ln();
    }
    Ok(Quadrature { value: dot(v, v) * sum, steps })
}

/// Stochastic Lanczos quadrature over `n_v` Rademacher probes of `m_l` steps.
///
/// Probe `i` is drawn from stream `i` of the generator seeded with `seed`, so
/// probes are independent of evaluation order. No normalization is applied.
pub fn slq_logdet<T: Scalar, O: LinearOperator<T>>(
    op: &O,
    m_l: usize,
    n_v: usize,
    seed: u64,
    reduction: ReductionMode,
) -> Result<LogDetReport<T>> {
    if m_l == 0 || n_v == 0 {
        return Err(Error::InvalidArgument("SLQ needs at least one step and one probe".into()));
    }
    let start = Instant::now();
    let n = op.dim();
    let probe = |i: usize| {
        let mut rng = SeededRng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let v: Vec<T> = rademacher(&mut rng, n);
        lanczos_quadrature(op, &v, m_l)
    };
    let quads: Vec<Quadrature<T>> = (0..n_v).into_par_iter().map(probe).collect::<Result<_>>()?;
    let values: Vec<T> = quads.iter().map(|q| q.value).collect();
    let trace = reduce(&values, reduction) / T::from_count(n_v);
    let steps: Vec<usize> = quads.iter().map(|q| q.steps).collect();

    Ok(LogDetReport {
        method: Method::Slq,
        estimate: T::zero() + trace,
        trace_estimate: trace,
        n_log_sigma: T::zero(),
        sigma: T::one(),
        n,
        queries: n_v,
        degrees: DegreeStats::from_degrees(&steps),
        matvecs_total: steps.iter().sum(),
        seed: Some(seed),
        wall_time: start.elapsed().as_secs_f64(),
        reduction,
        interval: None,
        scaling: None,
        warnings: Vec::new(),
    })
}
