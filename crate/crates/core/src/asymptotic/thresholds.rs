//! Thresholds `N(m)`, `N₀(m)`, `n(N, k)` and `n(N, r, j)`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::bigfloat::{pi, BigFloat};
use crate::error::{Error, Result};

const GUARD: u32 = 32;
const START_BITS: u32 = 128;
const MAX_BITS: u32 = 1 << 14;

/// `N(m)`: 9 for `m = 1`, otherwise `10 m ln m - m ln ln m`.
pub fn threshold_n(m: u32, prec: u32) -> Result<BigFloat> {
    if m == 0 {
        return Err(Error::Domain("N(m) needs m ≥ 1".into()));
    }
    if m == 1 {
        return Ok(BigFloat::from_u64(9, prec));
    }
    let p = prec + GUARD;
    let ln_m = BigFloat::from_u64(m as u64, p).ln();
    let v = &ln_m.mul_i64(10 * m as i64) - &ln_m.ln().mul_i64(m as i64);
    Ok(v.with_precision(prec))
}

/// Ceiling of a real given by `f(bits)`, accepted once the evaluations at
/// `p` and `p + 32` bits, widened by their difference, fall strictly between
/// the same two integers. Precision doubles until that happens.
fn certified_ceil(what: &str, f: impl Fn(u32) -> BigFloat) -> Result<BigInt> {
    let mut p = START_BITS;
    while p <= MAX_BITS {
        let lo = f(p);
        let hi = f(p + GUARD);
        let ulp = BigFloat::one(p).ldexp(lo.top_bit() - p as i64 + 2);
        let slack = &(&lo - &hi).abs().ldexp(1) + &ulp;
        let a = (&lo - &slack).ceil();
        let b = (&lo + &slack).ceil();
        if a == b && (&lo - &slack).floor() != a {
            return Ok(a);
        }
        p *= 2;
    }
    Err(Error::Config(format!(
        "could not certify the ceiling of {what} below {MAX_BITS} bits"
    )))
}

/// `N₀(m) = ⌈(N(m)/π)²⌉`, with the ceiling certified.
pub fn threshold_n0(m: u32) -> Result<u64> {
    threshold_n(m, 8)?;
    let c = certified_ceil("(N(m)/π)²", |p| {
        let q = &threshold_n(m, p).expect("m checked") / &pi(p);
        &q * &q
    })?;
    c.to_u64()
        .ok_or_else(|| Error::Domain(format!("N₀({m}) does not fit in 64 bits")))
}

/// `n(N, k)`: `max{N₀(N+1), 4k, k², ⌈k²π²/4⌉}` for `k > 0`,
/// `max{N₀(N+1), 4|k|}` for `k < 0`.
pub fn n_min(order: u32, k: i64) -> Result<u64> {
    if order == 0 {
        return Err(Error::Domain("expansion order N must be at least 1".into()));
    }
    if k == 0 {
        return Err(Error::Domain("shift k must be nonzero".into()));
    }
    let n0 = threshold_n0(order + 1)?;
    let a = k.unsigned_abs();
    if k < 0 {
        return Ok(n0.max(4 * a));
    }
    let quarter_pi_sq = certified_ceil("k²π²/4", |p| {
        let pk = pi(p).mul_i64(k);
        (&pk * &pk).ldexp(-2)
    })?
    .to_u64()
    .ok_or_else(|| Error::Domain(format!("k = {k} is too large")))?;
    Ok(n0.max(4 * a).max(a * a).max(quarter_pi_sq))
}

/// `n(N, r, j) = max_{0 ≤ m ≤ r} n(N, -(m+1)j)`.
pub fn n_min_diff(order: u32, r: u32, j: u64) -> Result<u64> {
    if j == 0 {
        return Err(Error::Domain("difference shift j must be at least 1".into()));
    }
    let mut best = 0;
    for m in 0..=r as u64 {
        let k = i64::try_from((m + 1) * j)
            .map_err(|_| Error::Domain("shift does not fit in 64 bits".into()))?;
        best = best.max(n_min(order, -k)?);
    }
    Ok(best)
}

/// `N₀(m) - k`. The threshold appears in one argument as a minimum over all
/// nonzero `k`, which is unbounded; this value for a single `k` is reported
/// for reference only and no check depends on it.
pub fn n1_non_normative(m: u32, k: i64) -> Result<i64> {
    Ok(threshold_n0(m)? as i64 - k)
}

/// `10 x^m e^{-x/2}`, which must stay below 1 for `x ≥ N(m)`.
pub fn lemma_2_1_value(m: u32, x: &BigFloat) -> BigFloat {
    let p = x.precision() + GUARD;
    let x = x.with_precision(p);
    let v = &x.powi(m as i64).mul_i64(10) * &(-x.ldexp(-1)).exp();
    v.with_precision(p - GUARD)
}
