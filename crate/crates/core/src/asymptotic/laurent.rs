use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bigfloat::{pi, BigFloat};

/// Finite Laurent polynomial `Σ c_e π^e` with rational coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PiLaurent {
    terms: BTreeMap<i32, BigRational>,
}

impl PiLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0)
    }

    pub fn monomial(coefficient: BigRational, exponent: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !coefficient.is_zero() {
            terms.insert(exponent, coefficient);
        }
        PiLaurent { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponent: i32) -> BigRational {
        self.terms
            .get(&exponent)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Terms in descending order of the π-exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigRational)> {
        self.terms.iter().rev().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, coefficient: BigRational, exponent: i32) {
        if coefficient.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponent).or_insert_with(BigRational::zero);
        *entry += coefficient;
        if entry.is_zero() {
            self.terms.remove(&exponent);
        }
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        PiLaurent {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c * factor))
                .collect(),
        }
    }

    /// Numeric value at `prec` bits.
    pub fn evaluate(&self, prec: u32) -> BigFloat {
        let p = prec + 32;
        let pi = pi(p);
        let mut acc = BigFloat::zero(p);
        for (e, c) in &self.terms {
            let term = &BigFloat::from_rational(c, p) * &pi.powi(*e as i64);
            acc = &acc + &term;
        }
        acc.with_precision(prec)
    }
}

impl Add for &PiLaurent {
    type Output = PiLaurent;
    fn add(self, other: &PiLaurent) -> PiLaurent {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(c.clone(), *e);
        }
        out
    }
}

impl Sub for &PiLaurent {
    type Output = PiLaurent;
    fn sub(self, other: &PiLaurent) -> PiLaurent {
        self + &(-other)
    }
}

impl Neg for &PiLaurent {
    type Output = PiLaurent;
    fn neg(self) -> PiLaurent {
        PiLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &PiLaurent {
    type Output = PiLaurent;
    fn mul(self, other: &PiLaurent) -> PiLaurent {
        let mut out = PiLaurent::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ca * cb, ea + eb);
            }
        }
        out
    }
}

impl std::iter::Sum for PiLaurent {
    fn sum<I: Iterator<Item = PiLaurent>>(iter: I) -> Self {
        iter.fold(PiLaurent::zero(), |acc, x| &acc + &x)
    }
}

fn rational_string(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.trim().parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.trim().parse().ok()?)),
    }
}

/// `c_e * pi^e` terms, descending exponent, e.g. `1/2 * pi^1 - 1 * pi^-1`.
impl fmt::Display for PiLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            if i == 0 {
                write!(f, "{} * pi^{e}", rational_string(c))?;
            } else if c.is_negative() {
                write!(f, " - {} * pi^{e}", rational_string(&-c))?;
            } else {
                write!(f, " + {} * pi^{e}", rational_string(c))?;
            }
        }
        Ok(())
    }
}

/// JSON form: an object from π-exponent to `p/q` coefficient strings.
impl Serialize for PiLaurent {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let map: BTreeMap<i32, String> = self
            .terms
            .iter()
            .map(|(e, c)| (*e, rational_string(c)))
            .collect();
        map.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PiLaurent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let map = BTreeMap::<i32, String>::deserialize(deserializer)?;
        let mut out = PiLaurent::zero();
        for (e, s) in map {
            let c = parse_rational(&s)
                .ok_or_else(|| serde::de::Error::custom(format!("bad coefficient {s:?}")))?;
            out.add_term(c, e);
        }
        Ok(out)
    }
}
