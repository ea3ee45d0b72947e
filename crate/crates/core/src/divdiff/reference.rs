//! Extended-precision divided differences of `log`, for use as a test oracle.
//!
//! Nodes are converted exactly to rationals, `log` is evaluated in binary
//! fixed point with `bits` fractional bits plus guard bits, and the divided
//! difference table is then formed in exact rational arithmetic. The only
//! error left is that of the logarithm values, amplified by the table.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::check_distinct;
use crate::error::{Error, Result};

const GUARD_BITS: u32 = 32;

/// `f[z_0..z_k]` for `f = log`, `k = 0..n-1`, rounded to `f64` at the end.
pub fn reference_divided_differences(nodes: &[f64], bits: u32) -> Result<Vec<f64>> {
    reference_scaled_divided_differences(nodes, 1.0, bits)
}

/// `γ^k · f[z_0..z_k]` for `f = log`, with the scaling applied before rounding.
pub fn reference_scaled_divided_differences(nodes: &[f64], gamma: f64, bits: u32) -> Result<Vec<f64>> {
    if bits == 0 {
        return Err(Error::InvalidArgument("working precision must be positive".into()));
    }
    check_distinct(nodes)?;
    let z = nodes
        .iter()
        .map(|&x| match BigRational::from_float(x) {
            Some(r) if x > 0.0 => Ok(r),
            _ => Err(Error::InvalidArgument(format!("node {x} must be finite and positive"))),
        })
        .collect::<Result<Vec<_>>>()?;
    let gamma = BigRational::from_float(gamma)
        .ok_or_else(|| Error::InvalidArgument(format!("gamma {gamma} is not finite")))?;

    let n = z.len();
    let mut table: Vec<BigRational> = z.iter().map(|x| log_rational(x, bits)).collect();
    let mut out = Vec::with_capacity(n);
    let mut power = BigRational::one();
    if n > 0 {
        out.push(to_f64(&table[0]));
    }
    for k in 1..n {
        for i in 0..n - k {
            table[i] = (&table[i + 1] - &table[i]) / (&z[i + k] - &z[i]);
        }
        power *= &gamma;
        out.push(to_f64(&(&table[0] * &power)));
    }
    Ok(out)
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `atanh(t) · 2^p` for fixed-point `t = t_fix / 2^p`, `0 <= t <= 1/3`.
fn atanh_fixed(t_fix: &BigInt, p: u32) -> BigInt {
    let t2 = (t_fix * t_fix) >> p;
    let mut pow = t_fix.clone();
    let mut sum = BigInt::zero();
    let mut denom = 1u32;
    while !pow.is_zero() {
        sum += &pow / BigInt::from(denom);
        pow = (&pow * &t2) >> p;
        denom += 2;
    }
    sum
}

/// `log(x)` to roughly `bits` fractional bits, returned as an exact dyadic rational.
fn log_rational(x: &BigRational, bits: u32) -> BigRational {
    let p = bits + GUARD_BITS;
    let (num, den) = (x.numer().abs(), x.denom().abs());
    // x = m · 2^k with m in [1, 2)
    let mut k = num.bits() as i64 - den.bits() as i64;
    let (mut a, mut b) = (num, den);
    if k >= 0 {
        b <<= k as usize;
    } else {
        a <<= (-k) as usize;
    }
    if a < b {
        a <<= 1;
        k -= 1;
    }
    // log m = 2 atanh((m - 1)/(m + 1)), with (m - 1)/(m + 1) in [0, 1/3)
    let t_fix = ((&a - &b) << p) / (&a + &b);
    let log_m = atanh_fixed(&t_fix, p) << 1;
    let ln2 = atanh_fixed(&((BigInt::one() << p) / BigInt::from(3)), p) << 1;
    let fixed = log_m + ln2 * BigInt::from(k);
    BigRational::new(fixed, BigInt::one() << p)
}
