//! Seeded randomness.
//!
//! Every stream in the crate comes from ChaCha8 seeded through
//! `SeedableRng::seed_from_u64`, so a `(seed, call order)` pair pins the output
//! on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::scalar::Scalar;

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent ±1 entries with probability 1/2 each.
pub fn rademacher<T: Scalar>(rng: &mut SeededRng, n: usize) -> Vec<T> {
    (0..n).map(|_| if rng.gen::<bool>() { T::one() } else { -T::one() }).collect()
}

pub fn standard_normal<T: Scalar>(rng: &mut SeededRng, n: usize) -> Vec<T> {
    (0..n).map(|_| T::lit(rng.sample::<f64, _>(StandardNormal))).collect()
}

/// Uniform on `[0, 1)`.
pub fn uniform<T: Scalar>(rng: &mut SeededRng, n: usize) -> Vec<T> {
    (0..n).map(|_| T::lit(rng.gen::<f64>())).collect()
}
