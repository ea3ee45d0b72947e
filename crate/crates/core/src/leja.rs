//! Fast Léja points on `[-2, 2]`.
//!
//! The first point is the right endpoint 2, the second is -2. Every later
//! point is the candidate maximizing `∏_k |ξ - ξ_k|`, where the candidates
//! are the midpoints of adjacent accepted points. Accepting a candidate
//! replaces it by the two midpoints it creates, so each step costs `O(j)`.

use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::MapParams;

/// Size of the process-wide precomputed pool.
pub const DEFAULT_POOL_SIZE: usize = 512;

#[derive(Clone, Debug, PartialEq)]
pub struct LejaSequence<T> {
    points: Vec<T>,
}

struct Candidate<T> {
    x: T,
    left: T,
    right: T,
    // Products are tracked as log sums to stay in range for long sequences.
    log_prod: T,
}

pub fn generate_fast_leja<T: Scalar>(count: usize) -> Result<LejaSequence<T>> {
    if count == 0 {
        return Err(Error::InvalidArgument("need at least one Léja point".into()));
    }
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let mut points = vec![two];
    if count == 1 {
        return Ok(LejaSequence { points });
    }
    points.push(-two);

    let log_prod = |x: T, pts: &[T]| pts.iter().map(|&p| (x - p).abs().ln()).sum::<T>();
    let mut candidates = vec![Candidate { x: T::zero(), left: -two, right: two, log_prod: T::zero() }];
    candidates[0].log_prod = log_prod(T::zero(), &points);

    while points.len() < count {
        let mut best = 0;
        for (k, cand) in candidates.iter().enumerate().skip(1) {
            let b = &candidates[best];
            if cand.log_prod > b.log_prod || (cand.log_prod == b.log_prod && cand.x < b.x) {
                best = k;
            }
        }
        let chosen = candidates.swap_remove(best);
        let x = chosen.x;
        points.push(x);
        for cand in &mut candidates {
            cand.log_prod = cand.log_prod + (cand.x - x).abs().ln();
        }
        for (left, right) in [(chosen.left, x), (x, chosen.right)] {
            let mid = (left + right) * half;
            candidates.push(Candidate { x: mid, left, right, log_prod: log_prod(mid, &points) });
        }
    }
    Ok(LejaSequence { points })
}

fn shared_pool() -> &'static LejaSequence<f64> {
    static POOL: OnceLock<LejaSequence<f64>> = OnceLock::new();
    POOL.get_or_init(|| generate_fast_leja(DEFAULT_POOL_SIZE).expect("pool size is positive"))
}

impl<T: Scalar> LejaSequence<T> {
    /// First `count` points, taken from the shared pool when it is long enough.
    pub fn from_pool(count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidArgument("need at least one Léja point".into()));
        }
        if count > DEFAULT_POOL_SIZE {
            return generate_fast_leja(count);
        }
        let points = shared_pool().points[..count].iter().map(|&p| T::lit(p)).collect();
        Ok(Self { points })
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Interpolation nodes `z_i = c + γ ξ_i`.
    pub fn map_nodes(&self, mp: &MapParams<T>) -> Vec<T> {
        self.points.iter().map(|&xi| mp.map(xi)).collect()
    }

    /// Writes one point per line in shortest round-trip decimal form.
    pub fn write_text(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = BufWriter::new(std::fs::File::create(path)?);
        for p in &self.points {
            writeln!(w, "{p}")?;
        }
        w.flush()?;
        Ok(())
    }
}
