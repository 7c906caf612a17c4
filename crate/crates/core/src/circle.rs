//! Zuckerman's series for `p̄(n)`, truncated after the odd `k ≤ N`, with
//! Engel's bound on the truncation error:
//!
//! ```text
//! p̄(n) = 1/(2π) Σ_{k odd ≤ N} √k Σ_{(h,k)=1} ω(h,k)²/ω(2h,k) e^{-2πinh/k}
//!            · d/dn( sinh(π√n/k) / √n ) + R₂(n, N),
//! |R₂(n, N)| < N^{5/2} / (π n^{3/2}) · sinh(π√n/N).
//! ```
//!
//! Every phase is an exact rational multiple of `πi`, so the only rounding
//! happens when cosines and sines of those angles are evaluated.

use std::fmt;
use std::ops::{Div, Mul};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::bigfloat::{cos_sin_pi, pi, BigFloat};
use crate::error::{Error, Result};

/// Lowest precision the series evaluation accepts.
pub const PRECISION_FLOOR: u32 = 64;

/// Extra bits used by the second evaluation that estimates round-off.
pub const SLACK_EXTRA_BITS: u32 = 32;

/// `exp(πi · numerator/denominator)` with the exponent reduced into `(-1, 1]`
/// and in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    numerator: i64,
    denominator: i64,
}

impl RootOfUnity {
    /// `exp(πi · num/den)`, normalized.
    pub fn from_exponent(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = num.gcd(&den);
        if g > 1 {
            num /= g;
            den /= g;
        }
        // reduce modulo 2 into (-1, 1]
        let mut r = num.rem_euclid(2 * den);
        if r > den {
            r -= 2 * den;
        }
        RootOfUnity {
            numerator: i64::try_from(r).expect("root of unity numerator overflow"),
            denominator: i64::try_from(den).expect("root of unity denominator overflow"),
        }
    }

    pub fn one() -> Self {
        RootOfUnity {
            numerator: 0,
            denominator: 1,
        }
    }

    pub fn numerator(&self) -> i64 {
        self.numerator
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    pub fn inv(self) -> Self {
        Self::from_exponent(-(self.numerator as i128), self.denominator as i128)
    }

    pub fn pow(self, e: i64) -> Self {
        Self::from_exponent(self.numerator as i128 * e as i128, self.denominator as i128)
    }

    /// `(cos, sin)` of the angle at `prec` bits.
    pub fn to_complex(&self, prec: u32) -> (BigFloat, BigFloat) {
        cos_sin_pi(
            &BigInt::from(self.numerator),
            &BigInt::from(self.denominator),
            prec,
        )
    }
}

impl Mul for RootOfUnity {
    type Output = RootOfUnity;
    fn mul(self, other: Self) -> Self {
        let (a, b) = (self.numerator as i128, self.denominator as i128);
        let (c, d) = (other.numerator as i128, other.denominator as i128);
        Self::from_exponent(a * d + c * b, b * d)
    }
}

impl Div for RootOfUnity {
    type Output = RootOfUnity;
    fn div(self, other: Self) -> Self {
        let (a, b) = (self.numerator as i128, self.denominator as i128);
        let (c, d) = (other.numerator as i128, other.denominator as i128);
        Self::from_exponent(a * d - c * b, b * d)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp(πi·{}/{})", self.numerator, self.denominator)
    }
}

/// `ω(h, k) = exp(πi Σ_{r=1}^{k-1} (r/k)(hr/k - ⌊hr/k⌋ - 1/2))`.
///
/// Each summand is `r (hr mod k)/k² - r/(2k)`, so the exponent equals
/// `(4 Σ r (hr mod k) - k²(k - 1)) / (4k²)`, computed in integers. The sum
/// depends on `h` only modulo `k`.
pub fn omega(h: u64, k: u64) -> Result<RootOfUnity> {
    if k == 0 {
        return Err(Error::Domain("ω(h, k) needs k ≥ 1".into()));
    }
    let k = k as i128;
    let h = h as i128 % k;
    let s1: i128 = (1..k).map(|r| r * ((h * r) % k)).sum();
    Ok(RootOfUnity::from_exponent(4 * s1 - k * k * (k - 1), 4 * k * k))
}

/// The phase multiplying the `(h, k)` term of the series.
pub fn term_phase(n: u64, h: u64, k: u64) -> Result<RootOfUnity> {
    let w = omega(h, k)?;
    let w2 = omega((2 * h) % k, k)?;
    let kk = k as i128;
    let shift = RootOfUnity::from_exponent(-(2 * (n as i128 % kk) * h as i128 % (2 * kk)), kk);
    Ok(w.pow(2) / w2 * shift)
}

/// Working precision used when the caller has no preference:
/// `max(128, ⌈π√n / ln 2⌉ + 64)`.
pub fn default_precision(n: u64) -> u32 {
    let bits = (std::f64::consts::PI * (n as f64).sqrt() / std::f64::consts::LN_2).ceil() as u32;
    (bits + 64).max(128)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TruncatedSeries {
    pub n: u64,
    /// Truncation order `N`: odd `k` from 1 to `N` are summed.
    pub order: u64,
    pub value: BigFloat,
    /// Imaginary part left after assembling the complex sum; zero up to
    /// round-off.
    pub imag_residue: BigFloat,
    pub engel_bound: BigFloat,
    pub precision_bits: u32,
}

/// `N^{5/2} / (π n^{3/2}) · sinh(π√n / N)`.
pub fn engel_bound(n: u64, order: u64, prec: u32) -> BigFloat {
    let p = prec + 16;
    let pi = pi(p);
    let nf = BigFloat::from_u64(n, p);
    let of = BigFloat::from_u64(order, p);
    let sqrt_n = nf.sqrt();
    let sq_o = of.sqrt();
    let num = &(&of * &of) * &sq_o;
    let den = &(&pi * &nf) * &sqrt_n;
    let arg = &(&pi * &sqrt_n) / &of;
    (&(&num / &den) * &arg.sinh()).with_precision(prec)
}

/// `d/dn (sinh(π√n/k)/√n) = π cosh(π√n/k)/(2kn) - sinh(π√n/k)/(2n^{3/2})`.
///
/// The two terms cancel to relative order `(π√n/k)²` when `k ≫ √n`, so the
/// working precision is raised accordingly.
fn sinh_derivative(n: u64, k: u64, prec: u32) -> BigFloat {
    let ratio = k as f64 / (std::f64::consts::PI * (n as f64).sqrt());
    let lost = if ratio > 1.0 {
        (2.0 * ratio.log2()).ceil() as u32 + 2
    } else {
        0
    };
    let p = prec + 16 + lost;
    let pi = pi(p);
    let nf = BigFloat::from_u64(n, p);
    let sqrt_n = nf.sqrt();
    let kf = BigFloat::from_u64(k, p);
    let a = &(&pi * &sqrt_n) / &kf;
    let first = &(&pi * &a.cosh()) / &(&kf * &nf).ldexp(1);
    let second = &a.sinh() / &(&nf * &sqrt_n).ldexp(1);
    (&first - &second).with_precision(prec)
}

/// Truncated Zuckerman series and Engel's bound at `precision_bits`.
pub fn zuckerman_partial(n: u64, order: u64, precision_bits: u32) -> Result<TruncatedSeries> {
    if n == 0 {
        return Err(Error::Domain("the series is stated for n ≥ 1".into()));
    }
    if order == 0 {
        return Err(Error::Domain("truncation order N must be at least 1".into()));
    }
    if precision_bits < PRECISION_FLOOR {
        return Err(Error::Config(format!(
            "precision {precision_bits} is below the {PRECISION_FLOOR}-bit floor"
        )));
    }
    let p = precision_bits + 16;
    let mut re = BigFloat::zero(p);
    let mut im = BigFloat::zero(p);
    for k in (1..=order).step_by(2) {
        let mut sum_re = BigFloat::zero(p);
        let mut sum_im = BigFloat::zero(p);
        for h in 0..k {
            if h.gcd(&k) != 1 {
                continue;
            }
            let (c, s) = term_phase(n, h, k)?.to_complex(p);
            sum_re = &sum_re + &c;
            sum_im = &sum_im + &s;
        }
        let weight = &BigFloat::from_u64(k, p).sqrt() * &sinh_derivative(n, k, p);
        re = &re + &(&sum_re * &weight);
        im = &im + &(&sum_im * &weight);
    }
    let two_pi = pi(p).ldexp(1);
    Ok(TruncatedSeries {
        n,
        order,
        value: (&re / &two_pi).with_precision(precision_bits),
        imag_residue: (&im / &two_pi).with_precision(precision_bits),
        engel_bound: engel_bound(n, order, precision_bits),
        precision_bits,
    })
}

/// Outcome of [`certify`]: the rounded integer and the evidence behind it.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub n: u64,
    pub value: BigUint,
    pub order: u64,
    pub engel_bound: BigFloat,
    /// `|value_p - value_{p+32}|`, folded into the certification margin.
    pub slack: BigFloat,
    pub precision_bits: u32,
}

/// Largest truncation order tried by [`certify`].
pub fn order_cap(n: u64) -> u64 {
    (n as f64).sqrt().ceil() as u64 + 16
}

/// Recover `p̄(n)` by rounding the truncated series, for the smallest odd
/// `N ≤ ⌈√n⌉ + 16` with `engel_bound + slack < 1/2`.
pub fn certify(n: u64, precision_bits: u32) -> Result<Certificate> {
    if n == 0 {
        return Err(Error::Domain("the series is stated for n ≥ 1".into()));
    }
    if precision_bits < PRECISION_FLOOR {
        return Err(Error::Config(format!(
            "precision {precision_bits} is below the {PRECISION_FLOOR}-bit floor"
        )));
    }
    let half = BigFloat::one(precision_bits).ldexp(-1);
    let mut best: Option<(u64, BigFloat)> = None;
    for order in (1..=order_cap(n)).step_by(2) {
        let bound = engel_bound(n, order, precision_bits);
        if best.as_ref().is_none_or(|(_, b)| bound < *b) {
            best = Some((order, bound.clone()));
        }
        if bound >= half {
            continue;
        }
        let lo = zuckerman_partial(n, order, precision_bits)?;
        let hi = zuckerman_partial(n, order, precision_bits + SLACK_EXTRA_BITS)?;
        let slack = (&lo.value - &hi.value).abs().with_precision(precision_bits);
        if &bound + &slack < half {
            let rounded = lo.value.round();
            let value = rounded
                .to_biguint()
                .filter(|_| !rounded.is_negative())
                .ok_or_else(|| Error::Domain("series rounded to a negative value".into()))?;
            return Ok(Certificate {
                n,
                value,
                order,
                engel_bound: bound,
                slack,
                precision_bits,
            });
        }
    }
    let (best_order, best_bound) = best.expect("at least one order is scanned");
    Err(Error::CertificationFailed {
        n,
        best_order,
        best_bound: best_bound.to_f64(),
    })
}

/// Certified `p̄(n)`; see [`certify`].
pub fn certified_value(n: u64, precision_bits: u32) -> Result<BigUint> {
    certify(n, precision_bits).map(|c| c.value)
}

/// CSV row `n,N,value,engel_bound,certified` for a truncated evaluation.
pub fn csv_row(series: &TruncatedSeries, certified: Option<&BigUint>) -> [String; 5] {
    [
        series.n.to_string(),
        series.order.to_string(),
        series.value.to_string(),
        series.engel_bound.to_string(),
        certified.map(|v| v.to_string()).unwrap_or_default(),
    ]
}

pub const CSV_HEADER: [&str; 5] = ["n", "N", "value", "engel_bound", "certified"];

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    /// The defining sum of ω's exponent, evaluated term by term over ℚ.
    fn omega_exponent_direct(h: u64, k: u64) -> BigRational {
        let mut s = BigRational::zero();
        let half = BigRational::new(1.into(), 2.into());
        for r in 1..k {
            let hr = BigRational::new(BigInt::from(h * r), BigInt::from(k));
            let frac = &hr - BigRational::from_integer(hr.floor().to_integer());
            s += BigRational::new(BigInt::from(r), BigInt::from(k)) * (frac - &half);
        }
        s
    }

    fn reduce_mod_two(q: &BigRational) -> BigRational {
        let two = BigRational::from_integer(2.into());
        let mut r = q - (q / &two).floor() * &two;
        if r > BigRational::one() {
            r -= two;
        }
        r
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(0, 1).unwrap(), RootOfUnity::one());
        let w = omega(1, 3).unwrap();
        assert_eq!((w.numerator(), w.denominator()), (1, 18));
        let w = omega(2, 3).unwrap();
        assert_eq!((w.numerator(), w.denominator()), (-1, 18));
        assert!(matches!(omega(1, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn omega_matches_direct_rational_sum() {
        for k in 1..=50u64 {
            for h in 0..k {
                let direct = reduce_mod_two(&omega_exponent_direct(h, k));
                let w = omega(h, k).unwrap();
                let got = BigRational::new(w.numerator().into(), w.denominator().into());
                assert_eq!(got, direct, "h = {h}, k = {k}");
                assert_eq!(num_integer::gcd(w.numerator().abs(), w.denominator()), 1);
            }
        }
    }

    #[test]
    fn omega_is_periodic_in_h() {
        for k in 1..=30u64 {
            for h in 0..k {
                let direct = reduce_mod_two(&omega_exponent_direct(h, k));
                let shifted = reduce_mod_two(&omega_exponent_direct(h + k, k));
                let doubled = reduce_mod_two(&omega_exponent_direct(2 * h, k));
                assert_eq!(direct, shifted);
                assert_eq!(doubled, reduce_mod_two(&omega_exponent_direct((2 * h) % k, k)));
                assert_eq!(omega(h + 3 * k, k).unwrap(), omega(h, k).unwrap());
            }
        }
    }

    #[test]
    fn root_of_unity_has_unit_modulus() {
        for (n, d) in [(0i128, 1i128), (7, 3), (-5, 12), (1, 18), (-1, 18), (3, 1)] {
            let w = RootOfUnity::from_exponent(n, d);
            assert!(w.numerator() > -w.denominator() && w.numerator() <= w.denominator());
            let (c, s) = w.to_complex(128);
            let m = &(&c * &c) + &(&s * &s);
            assert!((&m - &BigFloat::one(128)).abs().top_bit() < -120);
        }
        assert_eq!(RootOfUnity::from_exponent(3, 1), RootOfUnity::from_exponent(1, 1));
        assert_eq!(RootOfUnity::from_exponent(-1, 1), RootOfUnity::from_exponent(1, 1));
    }

    #[test]
    fn single_term_closed_form() {
        let s = zuckerman_partial(1, 1, 128).unwrap();
        let p = 128;
        let pi = pi(p);
        // (π cosh π / 2 - sinh π / 2) / (2π)
        let expected = &(&(&pi * &pi.cosh()) - &pi.sinh()) / &pi.ldexp(2);
        assert!((&s.value - &expected).abs().top_bit() < -120);
        let err = (&s.value - &BigFloat::from_i64(2, p)).abs();
        assert!(err <= s.engel_bound);
        assert!(s.imag_residue.is_zero());
    }

    #[test]
    fn engel_bound_at_three_is_too_large() {
        let b = engel_bound(3, 1, 128);
        assert!((b.to_f64() - 7.0625).abs() < 0.01, "{}", b.to_f64());
        assert!(matches!(
            certify(3, 128),
            Err(Error::CertificationFailed { n: 3, .. })
        ));
    }

    #[test]
    fn precision_floor_is_enforced() {
        assert!(matches!(zuckerman_partial(5, 1, 63), Err(Error::Config(_))));
        assert!(matches!(certify(5, 32), Err(Error::Config(_))));
        assert!(zuckerman_partial(5, 1, 64).is_ok());
    }

    #[test]
    fn certification_fails_below_2160() {
        for n in [1u64, 3, 100, 1000, 2000] {
            match certify(n, default_precision(n)) {
                Err(Error::CertificationFailed { best_bound, .. }) => {
                    assert!(best_bound >= 0.5, "n = {n}, bound {best_bound}")
                }
                other => panic!("n = {n}: unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn default_precision_policy() {
        assert_eq!(default_precision(1), 128);
        // π·√10000 / ln 2 = 453.2
        assert_eq!(default_precision(10_000), 454 + 64);
    }
}
