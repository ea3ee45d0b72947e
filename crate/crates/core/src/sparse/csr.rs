use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Rows per matvec before rayon is used.
const PAR_ROWS: usize = 1 << 16;

/// Square linear operator applied through `y = A x`.
pub trait LinearOperator<T>: Sync {
    fn dim(&self) -> usize;

    /// Writes `A x` into `y`. Both slices must have length `dim()`.
    fn apply(&self, x: &[T], y: &mut [T]);
}

/// Immutable compressed-sparse-row matrix.
///
/// Column indices are strictly increasing within each row. Construction
/// checks exact symmetry of the stored pattern and values once and records
/// the result in [`CsrMatrix::symmetric_verified`].
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix<T> {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
    symmetric_verified: bool,
}

impl<T: Scalar> CsrMatrix<T> {
    /// Builds a matrix from raw CSR arrays, validating every structural invariant.
    pub fn from_raw_parts(
        n: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<T>,
    ) -> Result<Self> {
        if row_ptr.len() != n + 1 {
            return Err(Error::InvalidStructure(format!(
                "row_ptr has length {}, expected {}",
                row_ptr.len(),
                n + 1
            )));
        }
        if row_ptr[0] != 0 {
            return Err(Error::InvalidStructure("row_ptr[0] must be 0".into()));
        }
        if col_idx.len() != values.len() || row_ptr[n] != col_idx.len() {
            return Err(Error::InvalidStructure(format!(
                "row_ptr[n] = {}, col_idx has {}, values has {}",
                row_ptr[n],
                col_idx.len(),
                values.len()
            )));
        }
        for i in 0..n {
            let (lo, hi) = (row_ptr[i], row_ptr[i + 1]);
            if lo > hi {
                return Err(Error::InvalidStructure(format!("row_ptr decreases at row {i}")));
            }
            let cols = &col_idx[lo..hi];
            if let Some(&c) = cols.iter().find(|&&c| c >= n) {
                return Err(Error::InvalidStructure(format!("column {c} out of range in row {i}")));
            }
            if cols.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidStructure(format!(
                    "columns not strictly increasing in row {i}"
                )));
            }
        }
        Ok(Self::assemble(n, row_ptr, col_idx, values))
    }

    fn assemble(n: usize, row_ptr: Vec<usize>, col_idx: Vec<usize>, values: Vec<T>) -> Self {
        let mut m = Self { n, row_ptr, col_idx, values, symmetric_verified: false };
        m.symmetric_verified = m.max_asymmetry() == Some(T::zero());
        m
    }

    /// Builds a matrix from `(row, col, value)` triplets. Duplicates are summed.
    pub fn from_triplets<I>(n: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, T)>,
    {
        let mut entries: Vec<(usize, usize, T)> = triplets.into_iter().collect();
        if let Some(&(i, j, _)) = entries.iter().find(|&&(i, j, _)| i >= n || j >= n) {
            return Err(Error::InvalidStructure(format!(
                "entry ({i}, {j}) outside a {n}x{n} matrix"
            )));
        }
        entries.sort_unstable_by_key(|e| (e.0, e.1));

        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut values: Vec<T> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in entries {
            if last == Some((i, j)) {
                let prev = values.last_mut().expect("duplicate follows an entry");
                *prev = *prev + v;
            } else {
                col_idx.push(j);
                values.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self::assemble(n, row_ptr, col_idx, values))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![T::one(); n])
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let n = diag.len();
        Self::assemble(n, (0..=n).collect(), (0..n).collect(), diag.to_vec())
    }

    /// Builds a matrix from a row-major dense array, keeping nonzero entries only.
    pub fn from_dense(n: usize, data: &[T]) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: data.len() });
        }
        let triplets = data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, &v)| (k / n, k % n, v));
        Self::from_triplets(n, triplets)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn symmetric_verified(&self) -> bool {
        self.symmetric_verified
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[T]) {
        let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.col_idx[lo..hi], &self.values[lo..hi])
    }

    /// Stored value at `(i, j)`, zero when absent.
    pub fn get(&self, i: usize, j: usize) -> T {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map_or(T::zero(), |k| vals[k])
    }

    /// Iterates over stored `(row, col, value)` entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.n).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// Largest `|i - j|` over stored entries.
    pub fn bandwidth(&self) -> usize {
        self.triplets().map(|(i, j, _)| i.abs_diff(j)).max().unwrap_or(0)
    }

    /// `max |a_ij - a_ji|` over stored entries, or `None` when the sparsity
    /// pattern itself is not symmetric.
    pub fn max_asymmetry(&self) -> Option<T> {
        let mut worst = T::zero();
        for (i, j, v) in self.triplets() {
            let (cols, vals) = self.row(j);
            let k = cols.binary_search(&i).ok()?;
            worst = worst.max((v - vals[k]).abs());
        }
        Some(worst)
    }

    pub fn to_dense(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.n * self.n];
        for (i, j, v) in self.triplets() {
            out[i * self.n + j] = v;
        }
        out
    }

    /// Returns `Q v`.
    pub fn matvec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: v.len() });
        }
        let mut y = vec![T::zero(); self.n];
        self.apply(v, &mut y);
        Ok(y)
    }

    #[inline]
    fn row_dot(&self, i: usize, x: &[T]) -> T {
        let (cols, vals) = self.row(i);
        cols.iter().zip(vals).fold(T::zero(), |acc, (&j, &a)| acc + a * x[j])
    }
}

impl<T: Scalar> LinearOperator<T> for CsrMatrix<T> {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        // Each row is reduced sequentially, so the result does not depend on
        // how rows are distributed over threads.
        if self.n >= PAR_ROWS {
            y.par_iter_mut().enumerate().for_each(|(i, yi)| *yi = self.row_dot(i, x));
        } else {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = self.row_dot(i, x);
            }
        }
    }
}
