//! Exact log-determinants: dense and banded Cholesky, and the closed-form
//! spectrum of the lattice GMRF precision matrix.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::CsrMatrix;

/// Largest order accepted by [`dense_logdet_cholesky`].
pub const DEFAULT_DENSE_CAP: usize = 4000;

/// Row-major square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn new(n: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: data.len() });
        }
        Ok(Self { n, data })
    }

    pub fn from_csr(q: &CsrMatrix<T>) -> Self {
        Self { n: q.dim(), data: q.to_dense() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    /// `max |a_ij - a_ji|` relative to `max |a_ij|`.
    pub fn relative_asymmetry(&self) -> T {
        let n = self.n;
        let scale = self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()));
        if scale.is_zero() {
            return T::zero();
        }
        let mut worst = T::zero();
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst / scale
    }
}

/// `2 Σ log L_ii` from a dense Cholesky factorization, for `n <= cap`.
pub fn dense_logdet_cholesky_capped<T: Scalar>(m: &DenseMatrix<T>, cap: usize) -> Result<T> {
    let n = m.n;
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    if m.relative_asymmetry() > T::lit(1e-12) {
        return Err(Error::InvalidStructure("matrix is not symmetric".into()));
    }
    let mut l = m.data.clone();
    let mut logdet = T::zero();
    for j in 0..n {
        let mut d = l[j * n + j];
        for k in 0..j {
            d = d - l[j * n + k] * l[j * n + k];
        }
        if !(d > T::zero()) {
            return Err(Error::NotPositiveDefinite { row: j, pivot: d.as_f64() });
        }
        let ljj = d.sqrt();
        l[j * n + j] = ljj;
        logdet = logdet + ljj.ln();
        for i in j + 1..n {
            let mut s = l[i * n + j];
            for k in 0..j {
                s = s - l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / ljj;
        }
    }
    Ok(logdet + logdet)
}

/// [`dense_logdet_cholesky_capped`] with [`DEFAULT_DENSE_CAP`].
pub fn dense_logdet_cholesky<T: Scalar>(m: &DenseMatrix<T>) -> Result<T> {
    dense_logdet_cholesky_capped(m, DEFAULT_DENSE_CAP)
}

/// Cholesky factor `L` of a banded SPD matrix, stored row by row as
/// `L[i][i - bandwidth ..= i]`.
#[derive(Clone, Debug)]
pub struct BandCholesky<T> {
    n: usize,
    bandwidth: usize,
    rows: Vec<T>,
}

impl<T: Scalar> BandCholesky<T> {
    /// Factorizes `q`, which must have no entries farther than `bandwidth`
    /// from the diagonal. Costs `O(n · bandwidth²)`.
    pub fn factor(q: &CsrMatrix<T>, bandwidth: usize) -> Result<Self> {
        let n = q.dim();
        let w = bandwidth + 1;
        let mut rows = vec![T::zero(); n * w];
        // Lower band of A, with A[i][j] at rows[i * w + (j + bandwidth - i)].
        for (i, j, v) in q.triplets() {
            if i.abs_diff(j) > bandwidth {
                return Err(Error::NotBanded { row: i, col: j, bandwidth });
            }
            if j <= i {
                rows[i * w + j + bandwidth - i] = v;
            }
        }
        let at = |i: usize, j: usize| i * w + j + bandwidth - i;
        for i in 0..n {
            let lo = i.saturating_sub(bandwidth);
            for j in lo..=i {
                let mut s = rows[at(i, j)];
                let k0 = lo.max(j.saturating_sub(bandwidth));
                for k in k0..j {
                    s = s - rows[at(i, k)] * rows[at(j, k)];
                }
                if i == j {
                    if !(s > T::zero()) {
                        return Err(Error::NotPositiveDefinite { row: i, pivot: s.as_f64() });
                    }
                    rows[at(i, i)] = s.sqrt();
                } else {
                    rows[at(i, j)] = s / rows[at(j, j)];
                }
            }
        }
        Ok(Self { n, bandwidth, rows })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    fn l(&self, i: usize, j: usize) -> T {
        self.rows[i * (self.bandwidth + 1) + j + self.bandwidth - i]
    }

    pub fn logdet(&self) -> T {
        let s = (0..self.n).fold(T::zero(), |acc, i| acc + self.l(i, i).ln());
        s + s
    }

    /// Solves `Lᵀ x = z`. For standard normal `z`, `x ~ N(0, A⁻¹)`.
    pub fn solve_transposed(&self, z: &[T]) -> Result<Vec<T>> {
        let n = self.n;
        if z.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: z.len() });
        }
        let mut x = z.to_vec();
        for i in (0..n).rev() {
            let hi = (i + self.bandwidth).min(n - 1);
            let mut s = x[i];
            for k in i + 1..=hi {
                s = s - self.l(k, i) * x[k];
            }
            x[i] = s / self.l(i, i);
        }
        Ok(x)
    }
}

/// `log det q` via banded Cholesky.
pub fn band_logdet_cholesky<T: Scalar>(q: &CsrMatrix<T>, bandwidth: usize) -> Result<T> {
    Ok(BandCholesky::factor(q, bandwidth)?.logdet())
}

fn check_theta<T: Scalar>(theta: T) -> Result<()> {
    if !(theta.abs() < T::lit(0.25)) {
        return Err(Error::InvalidArgument(format!("|theta| = {} must be below 1/4", theta.abs())));
    }
    Ok(())
}

/// `log det Q(θ)` of the `g × g` lattice with unit diagonal and `θ` coupling
/// between 4-neighbours (no wrap-around). Its eigenvalues are
/// `1 + 2θ(cos(iπ/(g+1)) + cos(jπ/(g+1)))`, `i, j = 1..g`.
pub fn gmrf_grid_logdet_analytic<T: Scalar>(g: usize, theta: T) -> Result<T> {
    check_theta(theta)?;
    let h = T::PI() / T::from_count(g + 1);
    let cosines: Vec<T> = (1..=g).map(|i| (T::from_count(i) * h).cos()).collect();
    let two_theta = theta + theta;
    let mut total = T::zero();
    for &ci in &cosines {
        let row = cosines.iter().fold(T::zero(), |acc, &cj| acc + (two_theta * (ci + cj)).ln_1p());
        total = total + row;
    }
    Ok(total)
}

/// Exact `(λmin, λmax)` of the lattice GMRF precision matrix.
pub fn gmrf_grid_extreme_eigenvalues<T: Scalar>(g: usize, theta: T) -> Result<(T, T)> {
    check_theta(theta)?;
    let spread = T::lit(4.0) * theta.abs() * (T::PI() / T::from_count(g + 1)).cos();
    Ok((T::one() - spread, T::one() + spread))
}
