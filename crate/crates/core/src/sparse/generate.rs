//! Synthetic SPD test matrices.

use super::CsrMatrix;
use crate::error::{Error, Result};
use crate::random::{seeded_rng, uniform};
use crate::scalar::Scalar;

/// Random symmetric pentadiagonal matrix `A + Aᵀ + nI`.
///
/// `A` has uniform `[0, 1)` entries on offsets `0, +1, +2, -1, -2`, drawn in
/// that order from the seeded stream. Off-diagonal magnitudes stay below 2 and
/// the diagonal lies in `[n, n + 2)`, so the result is strictly diagonally
/// dominant for `n >= 8` and SPD for every `n >= 3`.
pub fn gen_pentadiagonal<T: Scalar>(n: usize, seed: u64) -> Result<CsrMatrix<T>> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("pentadiagonal needs n >= 3, got {n}")));
    }
    let mut rng = seeded_rng(seed);
    let d0: Vec<T> = uniform(&mut rng, n);
    let up1: Vec<T> = uniform(&mut rng, n - 1);
    let up2: Vec<T> = uniform(&mut rng, n - 2);
    let lo1: Vec<T> = uniform(&mut rng, n - 1);
    let lo2: Vec<T> = uniform(&mut rng, n - 2);

    let shift = T::from_count(n);
    let mut row_ptr = Vec::with_capacity(n + 1);
    let mut col_idx = Vec::with_capacity(5 * n);
    let mut values = Vec::with_capacity(5 * n);
    row_ptr.push(0);
    for i in 0..n {
        if i >= 2 {
            col_idx.push(i - 2);
            values.push(up2[i - 2] + lo2[i - 2]);
        }
        if i >= 1 {
            col_idx.push(i - 1);
            values.push(up1[i - 1] + lo1[i - 1]);
        }
        col_idx.push(i);
        values.push(d0[i] + d0[i] + shift);
        if i + 1 < n {
            col_idx.push(i + 1);
            values.push(up1[i] + lo1[i]);
        }
        if i + 2 < n {
            col_idx.push(i + 2);
            values.push(up2[i] + lo2[i]);
        }
        row_ptr.push(col_idx.len());
    }
    CsrMatrix::from_raw_parts(n, row_ptr, col_idx, values)
}

/// Precision matrix of a `g x g` lattice GMRF with four nearest neighbours.
///
/// Node `(r, c)` has index `r * g + c`; the diagonal is 1 and every lattice
/// edge carries `theta`. The lattice is not periodic, so the spectrum is
/// `1 + 2θ(cos(iπ/(g+1)) + cos(jπ/(g+1)))` for `i, j = 1..=g`.
pub fn gen_gmrf_grid<T: Scalar>(g: usize, theta: T) -> Result<CsrMatrix<T>> {
    if g < 2 {
        return Err(Error::InvalidArgument(format!("GMRF grid needs g >= 2, got {g}")));
    }
    if !(theta.abs() < T::lit(0.25)) {
        return Err(Error::InvalidArgument(format!(
            "GMRF needs |theta| < 1/4 to stay SPD, got {theta}"
        )));
    }
    let n = g * g;
    let mut row_ptr = Vec::with_capacity(n + 1);
    let mut col_idx = Vec::with_capacity(5 * n);
    let mut values = Vec::with_capacity(5 * n);
    let coupled = !theta.is_zero();
    row_ptr.push(0);
    for r in 0..g {
        for c in 0..g {
            let k = r * g + c;
            let mut push = |j: usize, v: T| {
                col_idx.push(j);
                values.push(v);
            };
            if coupled && r > 0 {
                push(k - g, theta);
            }
            if coupled && c > 0 {
                push(k - 1, theta);
            }
            push(k, T::one());
            if coupled && c + 1 < g {
                push(k + 1, theta);
            }
            if coupled && r + 1 < g {
                push(k + g, theta);
            }
            row_ptr.push(col_idx.len());
        }
    }
    CsrMatrix::from_raw_parts(n, row_ptr, col_idx, values)
}
