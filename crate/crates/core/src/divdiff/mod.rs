//! Divided differences of the logarithm at mapped Léja nodes.
//!
//! The coefficients are read off the first column of `log(Q_m)`, where
//! `Q_m = cI + γ Q̂_m` and `Q̂_m` is lower bidiagonal with the Léja points on
//! its diagonal and ones below it. Writing `log(Q_m) = log(s) I + log(I + W)`
//! with `W = (Q_m - sI)/s` and expanding `log(I + W)` as a Taylor series keeps
//! the computation free of the cancellation that hits the classical recursion
//! when the high-order differences become small.
//!
//! The result holds divided differences of `g(ξ) = log(c + γξ)` at the
//! `ξ`-nodes, i.e. `d_k = γ^k · log[z_0, …, z_k]`.

mod reference;

pub use reference::{reference_divided_differences, reference_scaled_divided_differences};

use num_traits::{Num, Signed};

use crate::error::{Error, Result};
use crate::leja::LejaSequence;
use crate::scalar::Scalar;
use crate::spectral::MapParams;

/// How the Taylor expansion point `s` is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScalingChoice<T> {
    /// `s = c`, the minimax-optimal choice.
    OptimalCenter,
    /// `s = λmax / 2`, the smallest value for which the series converges.
    HalfLambdaMax,
    Explicit(T),
}

impl<T: Scalar> ScalingChoice<T> {
    /// Resolves `s` for the given map; requires `s >= λmax / 2`.
    pub fn resolve(&self, mp: &MapParams<T>) -> Result<T> {
        let half_max = mp.upper() * T::lit(0.5);
        match *self {
            ScalingChoice::OptimalCenter => Ok(mp.c),
            ScalingChoice::HalfLambdaMax => Ok(half_max),
            ScalingChoice::Explicit(s) if s >= half_max && s.is_finite() => Ok(s),
            ScalingChoice::Explicit(s) => Err(Error::InvalidArgument(format!(
                "scaling value {s} is below λmax/2 = {half_max}; the Taylor series would diverge"
            ))),
        }
    }
}

/// `max(|λmin/s - 1|, |λmax/s - 1|)`, the largest `|z/s - 1|` over the interval.
///
/// Generic over any signed ordered field, so exact rationals work too.
pub fn taylor_deviation<T>(lambda_min: T, lambda_max: T, s: T) -> T
where
    T: Clone + Num + Signed + PartialOrd,
{
    let lo = (lambda_min / s.clone() - T::one()).abs();
    let hi = (lambda_max / s - T::one()).abs();
    if lo > hi {
        lo
    } else {
        hi
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TaylorOptions<T> {
    /// Stop once the k-th term's max-norm is below `tol · (|log s| + 1)`.
    pub tol: T,
    pub max_terms: usize,
}

impl<T: Scalar> Default for TaylorOptions<T> {
    fn default() -> Self {
        Self { tol: T::lit(1e-16), max_terms: 100_000 }
    }
}

#[derive(Clone, Debug)]
pub struct DividedDiffs<T> {
    pub coeffs: Vec<T>,
    /// The `ξ`-nodes the coefficients belong to.
    pub nodes: Vec<T>,
    pub map: MapParams<T>,
    pub scaling: T,
    pub terms_used: usize,
    /// The term cap was hit before the tolerance was met.
    pub truncated: bool,
    pub last_term_norm: T,
}

impl<T> DividedDiffs<T> {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Stable divided differences of `log(c + γξ)` at the points of `seq`.
pub fn divided_differences_log<T: Scalar>(
    seq: &LejaSequence<T>,
    mp: &MapParams<T>,
    scaling: ScalingChoice<T>,
    opts: &TaylorOptions<T>,
) -> Result<DividedDiffs<T>> {
    if mp.is_degenerate() {
        return Err(Error::DegenerateMap);
    }
    let nodes = seq.points().to_vec();
    let m = nodes.len();
    if let Some(k) = nodes.iter().position(|&xi| !(mp.map(xi) > T::zero())) {
        return Err(Error::InvalidArgument(format!(
            "mapped node {k} = {} is not positive",
            mp.map(nodes[k])
        )));
    }
    let s = scaling.resolve(mp)?;
    let log_s = s.ln();

    // W = (cI + γQ̂ - sI)/s is lower bidiagonal.
    let shift = mp.c - s;
    let diag: Vec<T> = nodes.iter().map(|&xi| (shift + mp.gamma * xi) / s).collect();
    let sub = mp.gamma / s;

    let mut coeffs = vec![T::zero(); m];
    coeffs[0] = log_s;
    let mut col = vec![T::zero(); m];
    col[0] = T::one();
    let threshold = opts.tol * (log_s.abs() + T::one());
    let mut last_norm = T::infinity();
    let mut terms = 0;
    let mut converged = false;

    for k in 1..=opts.max_terms {
        // col <- W col; entries beyond index k are still zero.
        let top = k.min(m - 1);
        for i in (1..=top).rev() {
            col[i] = diag[i] * col[i] + sub * col[i - 1];
        }
        col[0] = diag[0] * col[0];

        let kf = T::from_count(k);
        let sign = if k % 2 == 1 { T::one() } else { -T::one() };
        let mut norm = T::zero();
        for (d, &w) in coeffs.iter_mut().zip(&col).take(top + 1) {
            let term = w / kf;
            *d = *d + sign * term;
            norm = norm.max(term.abs());
        }
        terms = k;
        last_norm = norm;
        if !norm.is_finite() {
            return Err(Error::NonFinite { step: k });
        }
        if norm <= threshold {
            converged = true;
            break;
        }
    }

    Ok(DividedDiffs {
        coeffs,
        nodes,
        map: *mp,
        scaling: s,
        terms_used: terms,
        truncated: !converged,
        last_term_norm: last_norm,
    })
}

/// Classical divided-difference table `f[z_0..z_k]`, `k = 0..n-1`, in the
/// working precision of `T`. Kept as the baseline the Taylor scheme improves on.
pub fn newton_divided_differences<T: Scalar>(nodes: &[T], f: impl Fn(T) -> T) -> Result<Vec<T>> {
    check_distinct(nodes)?;
    let n = nodes.len();
    let mut table: Vec<T> = nodes.iter().map(|&z| f(z)).collect();
    let mut out = Vec::with_capacity(n);
    if n > 0 {
        out.push(table[0]);
    }
    for k in 1..n {
        for i in 0..n - k {
            table[i] = (table[i + 1] - table[i]) / (nodes[i + k] - nodes[i]);
        }
        out.push(table[0]);
    }
    Ok(out)
}

pub(crate) fn check_distinct<T: PartialEq>(nodes: &[T]) -> Result<()> {
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if nodes[i] == nodes[j] {
                return Err(Error::CoincidentNodes(i, j));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::leja::generate_fast_leja;

    fn seq(points: &[f64]) -> LejaSequence<f64> {
        // Léja prefixes are all we need; build them through the generator.
        let full = generate_fast_leja::<f64>(points.len()).unwrap();
        assert_eq!(full.points(), points);
        full
    }

    #[test]
    fn single_node_is_log() {
        let mp = MapParams { c: 2.0, gamma: 0.5 };
        let dd = divided_differences_log(&seq(&[2.0]), &mp, ScalingChoice::OptimalCenter, &Default::default())
            .unwrap();
        assert!((dd.coeffs[0] - 3f64.ln()).abs() < 1e-15);
        assert!(!dd.truncated);
    }

    #[test]
    fn two_nodes_first_difference() {
        let mp = MapParams { c: 2.0, gamma: 0.5 };
        let dd = divided_differences_log(&seq(&[2.0, -2.0]), &mp, ScalingChoice::OptimalCenter, &Default::default())
            .unwrap();
        assert!((dd.coeffs[0] - 3f64.ln()).abs() < 1e-15);
        assert!((dd.coeffs[1] - 3f64.ln() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn lemma_deviation_at_center() {
        let (lo, hi) = (0.3, 7.5);
        let c = 0.5 * (lo + hi);
        assert_eq!(taylor_deviation(lo, hi, c), (hi - lo) / (hi + lo));
    }

    #[test]
    fn degenerate_map_is_rejected() {
        let mp = MapParams { c: 1.0, gamma: 0.0 };
        let err = divided_differences_log(&seq(&[2.0]), &mp, ScalingChoice::OptimalCenter, &Default::default());
        assert!(matches!(err, Err(Error::DegenerateMap)));
    }

    #[test]
    fn explicit_scaling_must_reach_half_max() {
        let mp = MapParams { c: 2.0, gamma: 0.5 };
        assert!(ScalingChoice::Explicit(1.0).resolve(&mp).is_err());
        assert_eq!(ScalingChoice::Explicit(1.5).resolve(&mp).unwrap(), 1.5);
        assert_eq!(ScalingChoice::HalfLambdaMax.resolve(&mp).unwrap(), 1.5);
    }

    #[test]
    fn half_max_scaling_truncates() {
        let mp = MapParams { c: 2.0, gamma: 0.5 };
        let opts = TaylorOptions { tol: 1e-16, max_terms: 400 };
        let dd = divided_differences_log(&generate_fast_leja(8).unwrap(), &mp, ScalingChoice::HalfLambdaMax, &opts)
            .unwrap();
        assert!(dd.truncated);
        assert_eq!(dd.terms_used, 400);
        // alternating series at w = 1: the error is below the first omitted term
        assert!((dd.coeffs[0] - 3f64.ln()).abs() < 1.0 / 401.0);
    }

    #[test]
    fn naive_table_two_points() {
        let d = newton_divided_differences(&[3.0, 1.0], f64::ln).unwrap();
        assert!((d[0] - 3f64.ln()).abs() < 1e-15);
        assert!((d[1] - 3f64.ln() / 2.0).abs() < 1e-15);
        assert!(matches!(newton_divided_differences(&[1.0, 1.0], f64::ln), Err(Error::CoincidentNodes(0, 1))));
    }

    #[test]
    fn works_in_f32() {
        let mp = MapParams { c: 2.0f32, gamma: 0.5 };
        let dd = divided_differences_log(
            &generate_fast_leja::<f32>(2).unwrap(),
            &mp,
            ScalingChoice::OptimalCenter,
            &TaylorOptions { tol: 1e-8, max_terms: 1000 },
        )
        .unwrap();
        assert!((dd.coeffs[1] - 3f32.ln() / 4.0).abs() < 1e-6);
    }
}
