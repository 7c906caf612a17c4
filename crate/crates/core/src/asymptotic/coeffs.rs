//! Expansion coefficients as exact π-Laurent polynomials.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::PiLaurent;
use crate::error::{Error, Result};

pub(crate) fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

pub(crate) fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn rational_pow(base: &BigRational, e: u32) -> BigRational {
    num_traits::pow(base.clone(), e as usize)
}

/// `A_k(t) = (k/2)^t Σ_{ℓ=0}^{⌊(t+1)/2⌋} (-1)^ℓ (t+1-ℓ)/(t+1-2ℓ)! · C(t+1, ℓ) · π^{t-2ℓ}/k^ℓ`,
/// the coefficient of `n^{-t/2}` in the expansion of `p̄(n + k)`.
pub fn coeff_a(k: i64, t: u32) -> Result<PiLaurent> {
    if k == 0 {
        return Err(Error::Domain("A_k(t) needs k ≠ 0".into()));
    }
    let kq = BigRational::from_integer(k.into());
    let lead = rational_pow(&(&kq / BigRational::from_integer(2.into())), t);
    let mut out = PiLaurent::zero();
    let t64 = t as u64;
    for l in 0..=t64.div_ceil(2) {
        let sign = if l % 2 == 0 { 1 } else { -1 };
        let num = BigInt::from(sign) * (t64 + 1 - l) * binomial(t64 + 1, l);
        let den = factorial(t64 + 1 - 2 * l) * num_traits::pow(BigInt::from(k), l as usize);
        let c = &lead * BigRational::new(num, den);
        out.add_term(c, t as i32 - 2 * l as i32);
    }
    Ok(out)
}

/// `Σ_{m=0}^{r} (-1)^m C(r, m) (m+1)^e`.
fn alternating_power_sum(r: u32, e: u64) -> BigInt {
    (0..=r as u64)
        .map(|m| {
            let term = binomial(r as u64, m) * num_traits::pow(BigInt::from(m + 1), e as usize);
            if m % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// `A_j(t, r) = (-1/2)^t Σ_ℓ C(t+1, ℓ) j^{t-ℓ} π^{t-2ℓ} (t+1-ℓ)/(t+1-2ℓ)!
///              · Σ_{m=0}^{r} (-1)^m C(r, m) (m+1)^{t-ℓ}`,
/// the coefficient of `n^{-t/2}` in the expansion of `Δ^r_j(p̄)(n - j)`.
///
/// For `r = 0` this is `A_{-j}(t)`.
pub fn coeff_a_diff(j: u64, t: u32, r: u32) -> Result<PiLaurent> {
    if j == 0 {
        return Err(Error::Domain("A_j(t, r) needs j ≥ 1".into()));
    }
    let t64 = t as u64;
    let lead = rational_pow(&BigRational::new((-1).into(), 2.into()), t);
    let mut out = PiLaurent::zero();
    // ℓ ≤ ⌊(t+1)/2⌋ ≤ t, so every exponent t - ℓ is non-negative
    for l in 0..=t64.div_ceil(2) {
        let num = binomial(t64 + 1, l)
            * num_traits::pow(BigInt::from(j), (t64 - l) as usize)
            * (t64 + 1 - l)
            * alternating_power_sum(r, t64 - l);
        let c = &lead * BigRational::new(num, factorial(t64 + 1 - 2 * l));
        out.add_term(c, t as i32 - 2 * l as i32);
    }
    Ok(out)
}

/// Stirling number of the second kind from
/// `m! {n, m} = Σ_{i=0}^{m} C(m, i) i^n (-1)^{m-i}`.
pub fn stirling2(n: u32, m: u32) -> BigUint {
    let sum: BigInt = (0..=m as u64)
        .map(|i| {
            let term = binomial(m as u64, i) * num_traits::pow(BigInt::from(i), n as usize);
            if (m as u64 - i).is_multiple_of(2) {
                term
            } else {
                -term
            }
        })
        .sum();
    let f = factorial(m as u64);
    assert!(
        (&sum % &f).is_zero(),
        "alternating sum not divisible by m!"
    );
    let q = sum / f;
    assert!(!q.is_negative());
    q.to_biguint().expect("non-negative")
}
