//! Arbitrary-precision binary floating point.
//!
//! A [`BigFloat`] is `mantissa * 2^exponent` where the mantissa is an odd
//! integer of at most `precision` bits (or zero). Every arithmetic result is
//! rounded to nearest, ties to even. The representation is canonical, so two
//! values computed the same way at the same precision are bit-identical.
//!
//! Transcendental functions work in fixed point with guard bits and round
//! once at the end. They are accurate to a few ulps, not correctly rounded;
//! callers that need an error estimate evaluate at two precisions and
//! compare.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Smallest precision accepted by the constructors.
pub const MIN_PRECISION: u32 = 8;

#[derive(Clone, Debug)]
pub struct BigFloat {
    mantissa: BigInt,
    exponent: i64,
    precision: u32,
}

/// Round `mag` (a truncated magnitude, `sticky` set when nonzero bits were
/// dropped below it) to `prec` bits, half to even.
fn round_magnitude(mag: BigUint, exp: i64, prec: u32, sticky: bool) -> (BigUint, i64) {
    let bits = mag.bits();
    if bits <= prec as u64 {
        return (mag, exp);
    }
    let shift = bits - prec as u64;
    let mut q = &mag >> shift;
    let rem = &mag - (&q << shift);
    let half = BigUint::one() << (shift - 1);
    let up = match rem.cmp(&half) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => sticky || q.is_odd(),
    };
    let mut e = exp + shift as i64;
    if up {
        q += 1u32;
        if q.bits() > prec as u64 {
            q >>= 1;
            e += 1;
        }
    }
    (q, e)
}

fn bits_of(x: &BigInt) -> i64 {
    x.bits() as i64
}

fn pow10(e: u64) -> BigUint {
    num_traits::pow(BigUint::from(10u32), e as usize)
}

impl BigFloat {
    fn assemble(sign: Sign, mag: BigUint, exp: i64, prec: u32, sticky: bool) -> Self {
        assert!(prec >= MIN_PRECISION, "precision {prec} below {MIN_PRECISION}");
        if mag.is_zero() {
            return Self::zero(prec);
        }
        let (mut q, mut e) = round_magnitude(mag, exp, prec, sticky);
        let tz = q.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            q >>= tz;
            e += tz as i64;
        }
        BigFloat {
            mantissa: BigInt::from_biguint(sign, q),
            exponent: e,
            precision: prec,
        }
    }

    /// `mantissa * 2^exponent` rounded to `prec` bits.
    pub fn from_parts(mantissa: BigInt, exponent: i64, prec: u32) -> Self {
        let (sign, mag) = mantissa.into_parts();
        Self::assemble(sign, mag, exponent, prec, false)
    }

    pub fn zero(prec: u32) -> Self {
        BigFloat {
            mantissa: BigInt::zero(),
            exponent: 0,
            precision: prec,
        }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_parts(BigInt::from(v), 0, prec)
    }

    pub fn from_u64(v: u64, prec: u32) -> Self {
        Self::from_parts(BigInt::from(v), 0, prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Self::from_parts(v.clone(), 0, prec)
    }

    pub fn from_biguint(v: &BigUint, prec: u32) -> Self {
        Self::assemble(Sign::Plus, v.clone(), 0, prec, false)
    }

    /// Correctly rounded `num / den`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(!den.is_zero(), "division by zero");
        if num.is_zero() {
            return Self::zero(prec);
        }
        let sign = if num.sign() == den.sign() {
            Sign::Plus
        } else {
            Sign::Minus
        };
        let (q, exp, sticky) = div_magnitudes(num.magnitude(), den.magnitude(), prec);
        Self::assemble(sign, q, exp, prec, sticky)
    }

    pub fn from_rational(r: &num_rational::BigRational, prec: u32) -> Self {
        Self::from_ratio(r.numer(), r.denom(), prec)
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    /// Position of the leading bit: `2^(top-1) <= |x| < 2^top`.
    /// Zero reports `i64::MIN`.
    pub fn top_bit(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exponent + bits_of(&self.mantissa)
        }
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        if prec >= self.precision {
            let mut out = self.clone();
            out.precision = prec;
            out
        } else {
            Self::from_parts(self.mantissa.clone(), self.exponent, prec)
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
            precision: self.precision,
        }
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let sa = self.mantissa.sign();
        let sb = other.mantissa.sign();
        let rank = |s: Sign| match s {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        };
        match rank(sa).cmp(&rank(sb)) {
            Ordering::Equal => {}
            ord => return ord,
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        let mag = match self.top_bit().cmp(&other.top_bit()) {
            Ordering::Equal => {
                let e = self.exponent.min(other.exponent);
                let a = self.mantissa.magnitude() << (self.exponent - e) as u64;
                let b = other.mantissa.magnitude() << (other.exponent - e) as u64;
                a.cmp(&b)
            }
            ord => ord,
        };
        if sa == Sign::Minus {
            mag.reverse()
        } else {
            mag
        }
    }

    /// `floor(self * 2^w)`.
    pub(crate) fn to_fixed(&self, w: u32) -> BigInt {
        let shift = self.exponent + w as i64;
        if shift >= 0 {
            &self.mantissa << shift as u64
        } else {
            &self.mantissa >> (-shift) as u64
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = bits_of(&self.mantissa);
        let (m, e) = if bits > 64 {
            (&self.mantissa >> (bits - 64) as u64, self.exponent + bits - 64)
        } else {
            (self.mantissa.clone(), self.exponent)
        };
        let f = m.to_f64().unwrap_or(f64::NAN);
        scale_f64(f, e)
    }

    pub fn floor(&self) -> BigInt {
        if self.exponent >= 0 {
            &self.mantissa << self.exponent as u64
        } else {
            &self.mantissa >> (-self.exponent) as u64
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Nearest integer, ties to even.
    pub fn round(&self) -> BigInt {
        if self.exponent >= 0 {
            return &self.mantissa << self.exponent as u64;
        }
        let shift = (-self.exponent) as u64;
        let mag = self.mantissa.magnitude();
        let q = mag >> shift;
        let rem = mag - (&q << shift);
        let half = BigUint::one() << (shift - 1);
        let q = match rem.cmp(&half) {
            Ordering::Greater => q + 1u32,
            Ordering::Equal if q.is_odd() => q + 1u32,
            _ => q,
        };
        BigInt::from_biguint(self.mantissa.sign(), q)
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of a negative number");
        let prec = self.precision;
        if self.is_zero() {
            return self.clone();
        }
        let m = self.mantissa.magnitude();
        let mut s = (2 * prec as i64 + 4 - m.bits() as i64).max(0);
        if (self.exponent - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let shifted = m << s as u64;
        let r = shifted.sqrt();
        let sticky = &r * &r != shifted;
        Self::assemble(Sign::Plus, r, (self.exponent - s) / 2, prec, sticky)
    }

    pub fn recip(&self) -> Self {
        &Self::one(self.precision) / self
    }

    /// Integer power by repeated squaring with guard bits.
    pub fn powi(&self, n: i64) -> Self {
        let prec = self.precision;
        if n == 0 {
            return Self::one(prec);
        }
        let guard = 64 - n.unsigned_abs().leading_zeros() + 8;
        let mut base = self.with_precision(prec + guard);
        let mut acc = BigFloat::one(prec + guard);
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        if n < 0 {
            acc = acc.recip();
        }
        acc.with_precision(prec)
    }

    pub fn mul_i64(&self, v: i64) -> Self {
        self * &Self::from_i64(v, self.precision)
    }

    pub fn div_i64(&self, v: i64) -> Self {
        self / &Self::from_i64(v, self.precision)
    }

    /// `2^k * self`, exact.
    pub fn ldexp(&self, k: i64) -> Self {
        let mut out = self.clone();
        if !out.is_zero() {
            out.exponent += k;
        }
        out
    }

    pub fn exp(&self) -> Self {
        let p = self.precision;
        if self.is_zero() {
            return Self::one(p);
        }
        let xf = self.to_f64();
        assert!(xf.abs() < 1e15, "exp argument {xf:e} out of supported range");
        let k = (xf / std::f64::consts::LN_2).round() as i64;
        let halvings = (p as f64).sqrt() as u32 / 2 + 4;
        let kbits = 64 - k.unsigned_abs().leading_zeros();
        let w = p + 32 + halvings + kbits;
        let ln2 = ln2_fixed(w);
        let r = (self.to_fixed(w) - BigInt::from(k) * ln2) >> halvings as u64;
        let one = BigInt::one() << w as u64;
        let mut sum = one.clone();
        let mut term = one;
        let mut i = 1u32;
        loop {
            term = (&term * &r) >> w as u64;
            term /= i;
            if term.is_zero() {
                break;
            }
            sum += &term;
            i += 1;
        }
        for _ in 0..halvings {
            sum = (&sum * &sum) >> w as u64;
        }
        Self::from_parts(sum, k - w as i64, p)
    }

    /// Natural logarithm of a positive value.
    pub fn ln(&self) -> Self {
        assert!(self.is_positive(), "ln of a non-positive number");
        let p = self.precision;
        let b = bits_of(&self.mantissa);
        // x = y * 2^e with y in [1/sqrt2, sqrt2)
        let mut e = self.exponent + b;
        let w0 = p + 32;
        let y_at = |w: u32, e: i64| -> BigInt {
            let shift = self.exponent - e + w as i64;
            if shift >= 0 {
                &self.mantissa << shift as u64
            } else {
                &self.mantissa >> (-shift) as u64
            }
        };
        // 1/sqrt2 ~ 0.7071: compare 2*y^2 with 1 in fixed point
        let y0 = y_at(w0, e);
        let one0 = BigInt::one() << w0 as u64;
        if (&y0 * &y0 * 2u32) < (&one0 * &one0) {
            e -= 1;
        }
        let mut w = w0;
        if e == 0 {
            let d = (y_at(w0, e) - &one0).abs();
            let lost = w0 as i64 - bits_of(&d);
            w += lost.max(0) as u32;
        }
        let one = BigInt::one() << w as u64;
        let y = y_at(w, e);
        let z = ((&y - &one) << w as u64) / (&y + &one);
        let z2 = (&z * &z) >> w as u64;
        let mut sum = z.clone();
        let mut term = z;
        let mut k = 1u32;
        loop {
            term = (&term * &z2) >> w as u64;
            let t = &term / (2 * k + 1);
            if t.is_zero() {
                break;
            }
            sum += t;
            k += 1;
        }
        let total = sum * 2 + BigInt::from(e) * ln2_fixed(w);
        Self::from_parts(total, -(w as i64), p)
    }

    pub fn sinh(&self) -> Self {
        let p = self.precision;
        if self.is_zero() {
            return self.clone();
        }
        let top = self.top_bit();
        let extra = if top < 0 { (-top) as u32 } else { 0 } + 8;
        let x = self.with_precision(p + extra);
        let e = x.exp();
        let d = &e - &e.recip();
        d.ldexp(-1).with_precision(p)
    }

    pub fn cosh(&self) -> Self {
        let p = self.precision;
        let x = self.with_precision(p + 8);
        let e = x.exp();
        (&e + &e.recip()).ldexp(-1).with_precision(p)
    }

    /// Scientific decimal notation with `digits` significant digits,
    /// correctly rounded (half to even).
    pub fn to_sci(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return if digits == 1 {
                "0e0".to_string()
            } else {
                format!("0.{}e0", "0".repeat(digits - 1))
            };
        }
        let mag = self.mantissa.magnitude();
        let log2 = self.exponent as f64 + log2_biguint(mag);
        let mut e10 = (log2 * std::f64::consts::LOG10_2).floor() as i64;
        let upper = pow10(digits as u64);
        let lower = pow10(digits as u64 - 1);
        let scaled = loop {
            let a = digits as i64 - 1 - e10;
            let mut num = mag.clone();
            let mut den = BigUint::one();
            if self.exponent >= 0 {
                num <<= self.exponent as u64;
            } else {
                den <<= (-self.exponent) as u64;
            }
            if a >= 0 {
                num *= pow10(a as u64);
            } else {
                den *= pow10((-a) as u64);
            }
            let (q, r) = num.div_rem(&den);
            let twice = r << 1u32;
            let q = match twice.cmp(&den) {
                Ordering::Greater => q + 1u32,
                Ordering::Equal if q.is_odd() => q + 1u32,
                _ => q,
            };
            if q >= upper {
                e10 += 1;
            } else if q < lower {
                e10 -= 1;
            } else {
                break q;
            }
        };
        let s = scaled.to_str_radix(10);
        let sign = if self.is_negative() { "-" } else { "" };
        if digits == 1 {
            format!("{sign}{s}e{e10}")
        } else {
            format!("{sign}{}.{}e{e10}", &s[..1], &s[1..])
        }
    }

    /// Number of significant decimal digits that round-trip `prec` bits.
    pub fn roundtrip_digits(prec: u32) -> usize {
        (prec as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1
    }

    /// Parse a plain decimal (`-1.25e-3`, `42`) and round to `prec` bits.
    pub fn parse_decimal(s: &str, prec: u32) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid decimal number {s:?}"));
        let s = s.trim();
        let (body, e10) = match s.find(['e', 'E']) {
            Some(i) => (
                &s[..i],
                s[i + 1..].parse::<i64>().map_err(|_| bad())?,
            ),
            None => (s, 0),
        };
        let (neg, body) = match body.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, body.strip_prefix('+').unwrap_or(body)),
        };
        let (int_part, frac_part) = match body.find('.') {
            Some(i) => (&body[..i], &body[i + 1..]),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        let all: String = format!("{int_part}{frac_part}");
        if !all.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = BigUint::parse_bytes(all.as_bytes(), 10).ok_or_else(bad)?;
        let e = e10 - frac_part.len() as i64;
        let (num, den) = if e >= 0 {
            (digits * pow10(e as u64), BigUint::one())
        } else {
            (digits, pow10((-e) as u64))
        };
        let sign = if neg { Sign::Minus } else { Sign::Plus };
        Ok(Self::from_ratio(
            &BigInt::from_biguint(sign, num),
            &BigInt::from_biguint(Sign::Plus, den),
            prec,
        ))
    }
}

fn log2_biguint(m: &BigUint) -> f64 {
    let bits = m.bits();
    if bits <= 64 {
        m.to_f64().unwrap_or(0.0).log2()
    } else {
        let top = m >> (bits - 64);
        top.to_f64().unwrap_or(0.0).log2() + (bits - 64) as f64
    }
}

fn scale_f64(f: f64, e: i64) -> f64 {
    if e > 4000 {
        return f * f64::INFINITY;
    }
    if e < -4000 {
        return 0.0 * f;
    }
    let mut out = f;
    let mut e = e;
    while e > 1000 {
        out *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        out *= 2f64.powi(-1000);
        e += 1000;
    }
    out * 2f64.powi(e as i32)
}

/// Quotient of magnitudes with at least `prec + 2` bits plus a sticky flag.
fn div_magnitudes(a: &BigUint, b: &BigUint, prec: u32) -> (BigUint, i64, bool) {
    let s = prec as i64 + 3 + b.bits() as i64 - a.bits() as i64;
    let (num, den) = if s >= 0 {
        (a << s as u64, b.clone())
    } else {
        (a.clone(), b << (-s) as u64)
    };
    let (q, r) = num.div_rem(&den);
    (q, -s, !r.is_zero())
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
            precision: self.precision,
        }
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        -&self
    }
}

impl Add for &BigFloat {
    type Output = BigFloat;
    fn add(self, other: &BigFloat) -> BigFloat {
        let prec = self.precision.max(other.precision);
        if self.is_zero() {
            return other.with_precision(prec);
        }
        if other.is_zero() {
            return self.with_precision(prec);
        }
        // operands far below the result's precision are truncated at `floor`
        let floor = self.top_bit().max(other.top_bit()) - prec as i64 - 8;
        let base = self.exponent.min(other.exponent).max(floor);
        let align = |x: &BigFloat| -> BigInt {
            let d = x.exponent - base;
            if d >= 0 {
                &x.mantissa << d as u64
            } else {
                &x.mantissa >> (-d) as u64
            }
        };
        BigFloat::from_parts(align(self) + align(other), base, prec)
    }
}

impl Sub for &BigFloat {
    type Output = BigFloat;
    fn sub(self, other: &BigFloat) -> BigFloat {
        self + &(-other)
    }
}

impl Mul for &BigFloat {
    type Output = BigFloat;
    fn mul(self, other: &BigFloat) -> BigFloat {
        let prec = self.precision.max(other.precision);
        BigFloat::from_parts(
            &self.mantissa * &other.mantissa,
            self.exponent + other.exponent,
            prec,
        )
    }
}

impl Div for &BigFloat {
    type Output = BigFloat;
    fn div(self, other: &BigFloat) -> BigFloat {
        assert!(!other.is_zero(), "division by zero");
        let prec = self.precision.max(other.precision);
        if self.is_zero() {
            return BigFloat::zero(prec);
        }
        let sign = if self.mantissa.sign() == other.mantissa.sign() {
            Sign::Plus
        } else {
            Sign::Minus
        };
        let (q, e, sticky) = div_magnitudes(
            self.mantissa.magnitude(),
            other.mantissa.magnitude(),
            prec,
        );
        BigFloat::assemble(
            sign,
            q,
            e + self.exponent - other.exponent,
            prec,
            sticky,
        )
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for BigFloat {
            type Output = BigFloat;
            fn $m(self, other: BigFloat) -> BigFloat {
                (&self).$m(&other)
            }
        }
        impl $tr<&BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(self, other: &BigFloat) -> BigFloat {
                (&self).$m(other)
            }
        }
        impl $tr<BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $m(self, other: BigFloat) -> BigFloat {
                self.$m(&other)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

/// Display as `d.ddd…e±X@Pb`. The default digit count round-trips through
/// [`FromStr`]; `{:.N}` prints `N` significant digits.
impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f
            .precision()
            .unwrap_or_else(|| Self::roundtrip_digits(self.precision));
        write!(f, "{}@{}b", self.to_sci(digits), self.precision)
    }
}

impl FromStr for BigFloat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (num, prec) = s
            .trim()
            .rsplit_once('@')
            .ok_or_else(|| Error::Parse(format!("missing precision annotation in {s:?}")))?;
        let prec: u32 = prec
            .strip_suffix('b')
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| Error::Parse(format!("invalid precision annotation in {s:?}")))?;
        if prec < MIN_PRECISION {
            return Err(Error::Parse(format!("precision {prec} too small")));
        }
        Self::parse_decimal(num, prec)
    }
}

impl Serialize for BigFloat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BigFloat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// constants

type FixedCache = OnceLock<Mutex<HashMap<u32, BigInt>>>;

static PI_CACHE: FixedCache = OnceLock::new();
static LN2_CACHE: FixedCache = OnceLock::new();

/// Fixed-point constants are computed at a canonical width (multiple of 64)
/// and shifted down, so the result for a given `w` never depends on what was
/// computed before.
fn cached_fixed(cache: &FixedCache, w: u32, compute: fn(u32) -> BigInt) -> BigInt {
    let canonical = (w + 64).div_ceil(64) * 64;
    let map = cache.get_or_init(|| Mutex::new(HashMap::new()));
    let full = {
        let guard = map.lock().expect("constant cache poisoned");
        guard.get(&canonical).cloned()
    };
    let full = match full {
        Some(v) => v,
        None => {
            let v = compute(canonical);
            map.lock()
                .expect("constant cache poisoned")
                .insert(canonical, v.clone());
            v
        }
    };
    full >> (canonical - w) as u64
}

fn atan_inv_fixed(x: u32, w: u32) -> BigInt {
    let x2 = BigInt::from(x) * x;
    let mut term = (BigInt::one() << w as u64) / x;
    let mut sum = term.clone();
    let mut k = 1u32;
    loop {
        term /= &x2;
        if term.is_zero() {
            break;
        }
        let t = &term / (2 * k + 1);
        if k % 2 == 1 {
            sum -= t;
        } else {
            sum += t;
        }
        k += 1;
    }
    sum
}

fn compute_pi_fixed(w: u32) -> BigInt {
    let g = 32;
    let wg = w + g;
    (atan_inv_fixed(5, wg) * 16 - atan_inv_fixed(239, wg) * 4) >> g as u64
}

fn compute_ln2_fixed(w: u32) -> BigInt {
    // ln 2 = 2 atanh(1/3)
    let g = 32;
    let wg = w + g;
    let mut term = (BigInt::one() << wg as u64) / 3u32;
    let mut sum = term.clone();
    let mut k = 1u32;
    loop {
        term /= 9u32;
        let t = &term / (2 * k + 1);
        if t.is_zero() {
            break;
        }
        sum += t;
        k += 1;
    }
    (sum * 2) >> g as u64
}

pub(crate) fn pi_fixed(w: u32) -> BigInt {
    cached_fixed(&PI_CACHE, w, compute_pi_fixed)
}

pub(crate) fn ln2_fixed(w: u32) -> BigInt {
    cached_fixed(&LN2_CACHE, w, compute_ln2_fixed)
}

pub fn pi(prec: u32) -> BigFloat {
    let w = prec + 32;
    BigFloat::from_parts(pi_fixed(w), -(w as i64), prec)
}

pub fn ln2(prec: u32) -> BigFloat {
    let w = prec + 32;
    BigFloat::from_parts(ln2_fixed(w), -(w as i64), prec)
}

/// `(cos(pi * num/den), sin(pi * num/den))` for an exact rational angle.
/// Multiples of `pi/2` give exact zeros and ones.
pub fn cos_sin_pi(num: &BigInt, den: &BigInt, prec: u32) -> (BigFloat, BigFloat) {
    assert!(den.is_positive(), "angle denominator must be positive");
    let two_den = den * 2;
    let mut r = num.mod_floor(&two_den);
    let mut d = den.clone();
    let mut sin_neg = false;
    let mut cos_neg = false;
    if r >= d {
        r -= &d;
        sin_neg = !sin_neg;
        cos_neg = !cos_neg;
    }
    // u = r/d in [0, 1)
    if &r * 2 > d {
        r = &d - &r;
        cos_neg = !cos_neg;
    }
    // u in [0, 1/2]
    let mut swap = false;
    if &r * 4 > d {
        r = &d - &r * 2;
        d *= 2;
        swap = true;
    }
    // u in [0, 1/4]
    let (c, s) = if r.is_zero() {
        (BigFloat::one(prec), BigFloat::zero(prec))
    } else {
        let extra = (bits_of(&d) - bits_of(&r) + 4).max(0) as u32;
        let w = prec + 32 + extra;
        let x = pi_fixed(w) * &r / &d;
        let x2 = (&x * &x) >> w as u64;
        let one = BigInt::one() << w as u64;
        let mut sin_sum = x.clone();
        let mut term = x;
        let mut i = 1u64;
        loop {
            term = -((&term * &x2) >> w as u64) / ((2 * i) * (2 * i + 1));
            if term.is_zero() {
                break;
            }
            sin_sum += &term;
            i += 1;
        }
        let mut cos_sum = one.clone();
        let mut term = one;
        let mut i = 1u64;
        loop {
            term = -((&term * &x2) >> w as u64) / ((2 * i - 1) * (2 * i));
            if term.is_zero() {
                break;
            }
            cos_sum += &term;
            i += 1;
        }
        (
            BigFloat::from_parts(cos_sum, -(w as i64), prec),
            BigFloat::from_parts(sin_sum, -(w as i64), prec),
        )
    };
    let (mut c, mut s) = if swap { (s, c) } else { (c, s) };
    if cos_neg {
        c = -c;
    }
    if sin_neg {
        s = -s;
    }
    (c, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &BigFloat, b: f64, rel: f64) -> bool {
        let x = a.to_f64();
        (x - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn pi_and_ln2_digits() {
        let p = pi(256).to_sci(60);
        assert_eq!(
            p,
            "3.14159265358979323846264338327950288419716939937510582097494e0"
        );
        let l = ln2(256).to_sci(40);
        assert_eq!(l, "6.931471805599453094172321214581765680755e-1");
    }

    #[test]
    fn canonical_representation() {
        let a = BigFloat::from_i64(12, 64);
        let b = BigFloat::from_parts(BigInt::from(3), 2, 64);
        assert_eq!(a.mantissa, b.mantissa);
        assert_eq!(a.exponent, b.exponent);
    }

    #[test]
    fn rounding_half_even() {
        // 515 = 0b10000000_11 rounds up to 0b10000001 << 2
        let y = BigFloat::from_parts(BigInt::from(515), 0, 8);
        assert_eq!(y.round(), BigInt::from(516));
        // 0b1000_0000_1 at 8 bits is a tie and goes to the even neighbour
        let z = BigFloat::from_parts(BigInt::from(0b1_0000_0001i64), 0, 8);
        assert_eq!(z.round(), BigInt::from(256));
        let z = BigFloat::from_parts(BigInt::from(0b1_0000_0011i64), 0, 8);
        assert_eq!(z.round(), BigInt::from(260));
    }

    #[test]
    fn elementary_functions() {
        let p = 200;
        let x = BigFloat::parse_decimal("1.5", p).unwrap();
        assert!(close(&x.exp(), 1.5f64.exp(), 1e-15));
        assert!(close(&(-&x).exp(), (-1.5f64).exp(), 1e-15));
        assert!(close(&x.ln(), 1.5f64.ln(), 1e-15));
        assert!(close(&x.sinh(), 1.5f64.sinh(), 1e-15));
        assert!(close(&x.cosh(), 1.5f64.cosh(), 1e-15));
        assert!(close(&x.sqrt(), 1.5f64.sqrt(), 1e-15));
        let big = BigFloat::from_i64(700, p);
        assert!(close(&big.exp(), 700f64.exp(), 1e-14));
        let tiny = BigFloat::parse_decimal("1e-30", p).unwrap();
        assert!(close(&tiny.sinh(), 1e-30, 1e-15));
        let near_one = BigFloat::parse_decimal("1.000000000001", p).unwrap();
        assert!(close(&near_one.ln(), 1e-12 - 5e-25, 1e-12));
    }

    #[test]
    fn exp_ln_inverse_at_high_precision() {
        let p = 300;
        for s in ["0.001", "2.5", "123.456", "-40.25"] {
            let x = BigFloat::parse_decimal(s, p).unwrap();
            let back = x.exp().ln();
            let err = (&back - &x).abs();
            let scale = x.top_bit().max(0);
            assert!(err.is_zero() || err.top_bit() < scale - p as i64 + 12, "{s}");
        }
    }

    #[test]
    fn trig_of_rational_multiples_of_pi() {
        let p = 160;
        let (c, s) = cos_sin_pi(&BigInt::from(1), &BigInt::from(2), p);
        assert!(c.is_zero());
        assert_eq!(s, BigFloat::one(p));
        let (c, s) = cos_sin_pi(&BigInt::from(-1), &BigInt::from(1), p);
        assert_eq!(c, BigFloat::from_i64(-1, p));
        assert!(s.is_zero());
        for (n, d) in [(1i64, 3i64), (5, 7), (-11, 18), (37, 12), (1, 1000)] {
            let (c, s) = cos_sin_pi(&BigInt::from(n), &BigInt::from(d), p);
            let a = std::f64::consts::PI * n as f64 / d as f64;
            assert!((c.to_f64() - a.cos()).abs() < 1e-15, "cos {n}/{d}");
            assert!((s.to_f64() - a.sin()).abs() < 1e-15, "sin {n}/{d}");
            let one = &(&c * &c) + &(&s * &s);
            let err = (&one - &BigFloat::one(p)).abs();
            assert!(err.top_bit() < -(p as i64) + 4);
        }
    }

    #[test]
    fn decimal_roundtrip() {
        for p in [64u32, 113, 256] {
            for s in ["3.25", "-1e-40", "6.02214076e23", "0.1"] {
                let x = BigFloat::parse_decimal(s, p).unwrap();
                let text = x.to_string();
                let back: BigFloat = text.parse().unwrap();
                assert_eq!(back.mantissa, x.mantissa);
                assert_eq!(back.exponent, x.exponent);
                assert_eq!(back.precision, p);
            }
        }
        assert_eq!(BigFloat::zero(64).to_sci(3), "0.00e0");
        assert!("1.0".parse::<BigFloat>().is_err());
    }

    #[test]
    fn integer_rounding() {
        let x = BigFloat::parse_decimal("-2.5", 64).unwrap();
        assert_eq!(x.round(), BigInt::from(-2));
        assert_eq!(x.floor(), BigInt::from(-3));
        assert_eq!(x.ceil(), BigInt::from(-2));
        let y = BigFloat::parse_decimal("7.4999", 64).unwrap();
        assert_eq!(y.round(), BigInt::from(7));
    }

    #[test]
    fn powi_matches_repeated_multiplication() {
        let x = BigFloat::parse_decimal("1.0001", 128).unwrap();
        let mut acc = BigFloat::one(128);
        for _ in 0..37 {
            acc = &acc * &x;
        }
        let d = (&x.powi(37) - &acc).abs();
        assert!(d.top_bit() < -110);
        assert!(close(&x.powi(-3), 1.0001f64.powi(-3), 1e-15));
    }

    #[test]
    fn addition_of_disparate_magnitudes() {
        let a = BigFloat::one(64).ldexp(200);
        let b = BigFloat::one(64);
        assert_eq!(&a + &b, a);
        let c = &(&a + &b) - &a;
        assert!(c.is_zero());
    }
}
