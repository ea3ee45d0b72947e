//! Spectral interval estimation and the affine map `ξ ∈ [-2, 2] ↦ c + γξ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{conjugate_gradient, dot, norm2, tridiagonal_eigen};
use crate::random::{rademacher, seeded_rng};
use crate::scalar::Scalar;
use crate::sparse::{CsrMatrix, LinearOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundsMethod {
    Gershgorin,
    Lanczos,
    /// Bounds known in closed form and passed in by the caller.
    Supplied,
}

/// `[lambda_min, lambda_max]` with `0 < lambda_min <= lambda_max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralInterval<T> {
    pub lambda_min: T,
    pub lambda_max: T,
    pub method: BoundsMethod,
}

impl<T: Scalar> SpectralInterval<T> {
    pub fn new(lambda_min: T, lambda_max: T, method: BoundsMethod) -> Result<Self> {
        if !(lambda_min.is_finite() && lambda_max.is_finite())
            || !(lambda_min > T::zero())
            || lambda_min > lambda_max
        {
            return Err(Error::InvalidArgument(format!(
                "spectral interval [{lambda_min}, {lambda_max}] must satisfy 0 < min <= max"
            )));
        }
        Ok(Self { lambda_min, lambda_max, method })
    }

    pub fn condition_number(&self) -> T {
        self.lambda_max / self.lambda_min
    }

    pub fn contains(&self, x: T) -> bool {
        self.lambda_min <= x && x <= self.lambda_max
    }
}

/// Center `c` and quarter-width `gamma` of the map `ξ ↦ c + γξ` taking
/// `[-2, 2]` onto the spectral interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MapParams<T> {
    pub c: T,
    pub gamma: T,
}

impl<T: Scalar> MapParams<T> {
    /// True when the interval has collapsed to rounding level and the
    /// operator is treated as `c I`.
    pub fn is_degenerate(&self) -> bool {
        self.gamma <= T::lit(4.0) * T::epsilon() * self.c.abs()
    }

    pub fn lower(&self) -> T {
        self.c - (self.gamma + self.gamma)
    }

    pub fn upper(&self) -> T {
        self.c + (self.gamma + self.gamma)
    }

    #[inline]
    pub fn map(&self, xi: T) -> T {
        self.c + self.gamma * xi
    }
}

pub fn map_params<T: Scalar>(interval: &SpectralInterval<T>) -> MapParams<T> {
    let half = T::lit(0.5);
    let quarter = T::lit(0.25);
    MapParams {
        c: (interval.lambda_min + interval.lambda_max) * half,
        gamma: (interval.lambda_max - interval.lambda_min) * quarter,
    }
}

/// Positive floor substituted for a non-positive Gershgorin lower bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EpsFloor<T> {
    Absolute(T),
    /// Fraction of the Gershgorin upper bound.
    RelativeToMax(T),
}

impl<T: Scalar> Default for EpsFloor<T> {
    fn default() -> Self {
        EpsFloor::RelativeToMax(T::lit(1e-8))
    }
}

/// Gershgorin enclosure in one pass over the stored entries:
/// `[max(floor, min_i(a_ii - r_i)), max_i(a_ii + r_i)]` with `r_i = Σ_{j≠i} |a_ij|`.
pub fn gershgorin_bounds<T: Scalar>(
    q: &CsrMatrix<T>,
    floor: EpsFloor<T>,
) -> Result<SpectralInterval<T>> {
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for i in 0..q.dim() {
        let (cols, vals) = q.row(i);
        let mut center = T::zero();
        let mut radius = T::zero();
        for (&j, &v) in cols.iter().zip(vals) {
            if j == i {
                center = v;
            } else {
                radius = radius + v.abs();
            }
        }
        lo = lo.min(center - radius);
        hi = hi.max(center + radius);
    }
    if !(hi > T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "Gershgorin upper bound {hi} is not positive; matrix is not SPD"
        )));
    }
    let eps = match floor {
        EpsFloor::Absolute(e) => e,
        EpsFloor::RelativeToMax(r) => r * hi,
    };
    SpectralInterval::new(lo.max(eps).min(hi), hi, BoundsMethod::Gershgorin)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KrylovOptions<T> {
    /// Stop once successive Ritz values differ by at most `tol · |ritz|`.
    pub tol: T,
    pub max_iter: usize,
    pub seed: u64,
    /// Iteration cap for each inner CG solve in shift-invert mode.
    pub cg_max_iter: usize,
}

impl<T: Scalar> Default for KrylovOptions<T> {
    fn default() -> Self {
        Self { tol: T::lit(1e-8), max_iter: 200, seed: 0, cg_max_iter: 10_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RitzValue<T> {
    pub value: T,
    pub iterations: usize,
    pub converged: bool,
    /// The Krylov space became invariant; `value` is then exact up to rounding.
    pub breakdown: bool,
}

/// Plain Lanczos (no reorthogonalization) tracking the largest Ritz value.
fn lanczos_largest<T, F>(n: usize, mut apply: F, opts: &KrylovOptions<T>) -> Result<RitzValue<T>>
where
    T: Scalar,
    F: FnMut(&[T], &mut [T]) -> Result<()>,
{
    if n == 0 {
        return Err(Error::InvalidArgument("empty operator".into()));
    }
    let mut rng = seeded_rng(opts.seed);
    let mut v: Vec<T> = rademacher(&mut rng, n);
    let inv = T::one() / norm2(&v);
    v.iter_mut().for_each(|x| *x = *x * inv);
    let mut v_prev = vec![T::zero(); n];
    let mut w = vec![T::zero(); n];
    let mut alphas = Vec::new();
    let mut betas: Vec<T> = Vec::new();
    let mut beta_prev = T::zero();
    let mut ritz = T::zero();
    let breakdown_tol = T::lit(100.0) * T::epsilon();

    for j in 1..=opts.max_iter.max(1) {
        apply(&v, &mut w)?;
        for (wi, &pi) in w.iter_mut().zip(&v_prev) {
            *wi = *wi - beta_prev * pi;
        }
        let alpha = dot(&v, &w);
        for (wi, &vi) in w.iter_mut().zip(&v) {
            *wi = *wi - alpha * vi;
        }
        alphas.push(alpha);
        let eig = tridiagonal_eigen(&alphas, &betas);
        let next = *eig.values.last().expect("non-empty tridiagonal");
        if j > 1 && (next - ritz).abs() <= opts.tol * next.abs() {
            return Ok(RitzValue { value: next, iterations: j, converged: true, breakdown: false });
        }
        ritz = next;
        let beta = norm2(&w);
        if beta <= breakdown_tol * (alpha.abs() + beta_prev) {
            return Ok(RitzValue { value: ritz, iterations: j, converged: true, breakdown: true });
        }
        betas.push(beta);
        std::mem::swap(&mut v_prev, &mut v);
        let inv = T::one() / beta;
        for (vi, &wi) in v.iter_mut().zip(&w) {
            *vi = wi * inv;
        }
        beta_prev = beta;
    }
    Ok(RitzValue { value: ritz, iterations: opts.max_iter.max(1), converged: false, breakdown: false })
}

/// Largest eigenvalue by Lanczos from a seeded Rademacher start vector.
pub fn lanczos_lambda_max<T: Scalar, O: LinearOperator<T>>(
    op: &O,
    opts: &KrylovOptions<T>,
) -> RitzValue<T> {
    lanczos_largest(op.dim(), |x, y| {
        op.apply(x, y);
        Ok(())
    }, opts)
    .expect("plain products cannot fail")
}

/// Smallest eigenvalue as `1/μ`, where `μ` is the largest eigenvalue of `Q⁻¹`
/// found by Lanczos. Each `Q⁻¹ x` is a CG solve to relative residual `tol/10`.
pub fn shift_invert_lambda_min<T: Scalar, O: LinearOperator<T>>(
    op: &O,
    opts: &KrylovOptions<T>,
) -> Result<RitzValue<T>> {
    let cg_tol = opts.tol / T::lit(10.0);
    let mu = lanczos_largest(op.dim(), |x, y| {
        let sol = conjugate_gradient(op, x, cg_tol, opts.cg_max_iter)?;
        y.copy_from_slice(&sol.x);
        Ok(())
    }, opts)?;
    Ok(RitzValue { value: mu.value.recip(), ..mu })
}

/// `[λmin, λmax]` from shift-invert Lanczos and plain Lanczos.
pub fn lanczos_bounds<T: Scalar, O: LinearOperator<T>>(
    op: &O,
    opts: &KrylovOptions<T>,
) -> Result<SpectralInterval<T>> {
    let hi = lanczos_lambda_max(op, opts).value;
    let lo = shift_invert_lambda_min(op, opts)?.value;
    SpectralInterval::new(lo.min(hi), hi, BoundsMethod::Lanczos)
}
