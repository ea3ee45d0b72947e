//! Small dense kernels: vector ops, symmetric tridiagonal eigenproblems and CG.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::LinearOperator;

#[inline]
pub fn dot<T: Scalar>(x: &[T], y: &[T]) -> T {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).fold(T::zero(), |acc, (&a, &b)| acc + a * b)
}

#[inline]
pub fn norm2<T: Scalar>(x: &[T]) -> T {
    dot(x, x).sqrt()
}

/// `y += alpha * x`
#[inline]
pub fn axpy<T: Scalar>(alpha: T, x: &[T], y: &mut [T]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = *yi + alpha * xi;
    }
}

#[inline]
pub fn scale_in_place<T: Scalar>(alpha: T, x: &mut [T]) {
    for xi in x.iter_mut() {
        *xi = *xi * alpha;
    }
}

/// Orthonormal basis for the span of `cols` by classical Gram-Schmidt with a
/// second orthogonalization pass. A column is dropped when its remaining norm
/// (the diagonal of `R` in `Y = AR`) is below `drop_tol` times the largest
/// input column norm. Column order is preserved.
pub fn orthonormal_basis<T: Scalar>(cols: &[Vec<T>], drop_tol: T) -> Vec<Vec<T>> {
    let scale = cols.iter().map(|c| norm2(c)).fold(T::zero(), T::max);
    let mut basis: Vec<Vec<T>> = Vec::with_capacity(cols.len());
    if scale.is_zero() {
        return basis;
    }
    for col in cols {
        let mut v = col.clone();
        for _ in 0..2 {
            for q in &basis {
                let h = dot(q, &v);
                axpy(-h, q, &mut v);
            }
        }
        let r = norm2(&v);
        if r > drop_tol * scale {
            scale_in_place(r.recip(), &mut v);
            basis.push(v);
        }
    }
    basis
}

/// Eigenvalues (ascending) of a symmetric tridiagonal matrix together with the
/// first component of each unit eigenvector.
#[derive(Clone, Debug)]
pub struct TridiagonalEigen<T> {
    pub values: Vec<T>,
    pub first_components: Vec<T>,
}

/// Implicit QL with Wilkinson shifts on the tridiagonal matrix with diagonal
/// `diag` and sub/super-diagonal `off` (`off.len() == diag.len() - 1`).
///
/// Only the first row of the accumulated rotation matrix is tracked, which is
/// all Gauss quadrature needs.
pub fn tridiagonal_eigen<T: Scalar>(diag: &[T], off: &[T]) -> TridiagonalEigen<T> {
    let n = diag.len();
    assert!(n == 0 || off.len() + 1 == n, "off-diagonal must have length n - 1");
    let mut d = diag.to_vec();
    let mut e: Vec<T> = off.iter().copied().chain(std::iter::once(T::zero())).take(n).collect();
    let mut z = vec![T::zero(); n];
    if n > 0 {
        z[0] = T::one();
    }
    let eps = T::epsilon();
    let two = T::lit(2.0);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 100 {
                // Converged as far as rounding allows.
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r.is_zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if deflated {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap_or(std::cmp::Ordering::Equal));
    TridiagonalEigen {
        values: order.iter().map(|&k| d[k]).collect(),
        first_components: order.iter().map(|&k| z[k]).collect(),
    }
}

/// Outcome of a conjugate-gradient solve.
#[derive(Clone, Debug)]
pub struct CgSolution<T> {
    pub x: Vec<T>,
    pub iterations: usize,
    pub relative_residual: T,
}

/// Unpreconditioned CG for SPD `a x = b`, stopping once `‖b - a x‖ ≤ rel_tol ‖b‖`.
pub fn conjugate_gradient<T: Scalar, O: LinearOperator<T>>(
    a: &O,
    b: &[T],
    rel_tol: T,
    max_iter: usize,
) -> Result<CgSolution<T>> {
    let n = a.dim();
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    let b_norm = norm2(b);
    let mut x = vec![T::zero(); n];
    if b_norm.is_zero() {
        return Ok(CgSolution { x, iterations: 0, relative_residual: T::zero() });
    }
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut ap = vec![T::zero(); n];
    let mut rr = dot(&r, &r);
    let target = rel_tol * b_norm;
    for it in 1..=max_iter {
        a.apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > T::zero()) {
            return Err(Error::NotPositiveDefinite { row: it, pivot: pap.as_f64() });
        }
        let alpha = rr / pap;
        axpy(alpha, &p, &mut x);
        axpy(-alpha, &ap, &mut r);
        let rr_new = dot(&r, &r);
        if rr_new.sqrt() <= target {
            return Ok(CgSolution { x, iterations: it, relative_residual: rr_new.sqrt() / b_norm });
        }
        let beta = rr_new / rr;
        for (pi, &ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
        rr = rr_new;
    }
    Err(Error::CgNotConverged { iterations: max_iter, residual: (rr.sqrt() / b_norm).as_f64() })
}
