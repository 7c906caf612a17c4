//! Exact overpartition numbers.
//!
//! Two independent constructions are provided. [`table_theta`] uses the
//! sparse recurrence coming from `θ(-q) · Σ p̄(n) qⁿ = 1`,
//!
//! ```text
//! p̄(n) = 2 Σ_{s ≥ 1, s² ≤ n} (-1)^{s+1} p̄(n - s²),
//! ```
//!
//! and [`table_oracle`] convolves distinct-part partitions (the overlined
//! parts) with ordinary partitions (the plain parts), both by naive dynamic
//! programming over part sizes.

mod cache;

pub use cache::{export_csv, read_cache, read_csv, write_cache, CacheStore};

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ThetaRecurrence,
    ConvolutionOracle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ThetaRecurrence => "theta",
            Method::ConvolutionOracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta" | "theta_recurrence" => Ok(Method::ThetaRecurrence),
            "oracle" | "convolution_oracle" => Ok(Method::ConvolutionOracle),
            other => Err(Error::Parse(format!("unknown table method {other:?}"))),
        }
    }
}

/// `p̄(0..=n_max)` with the method that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverpartitionTable {
    values: Vec<BigUint>,
    method: Method,
}

impl OverpartitionTable {
    pub(crate) fn from_values(values: Vec<BigUint>, method: Method) -> Self {
        assert!(!values.is_empty());
        OverpartitionTable { values, method }
    }

    pub fn n_max(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    /// `p̄(n)`. Negative or out-of-table arguments are rejected.
    pub fn get(&self, n: i64) -> Result<&BigUint> {
        if n < 0 || n as u64 > self.n_max() {
            return Err(Error::OutOfRange {
                index: n,
                min: 0,
                max: self.n_max() as i64,
            });
        }
        Ok(&self.values[n as usize])
    }

    /// Truncated copy covering `0..=n_max`.
    pub fn truncated(&self, n_max: u64) -> Result<Self> {
        if n_max > self.n_max() {
            return Err(Error::OutOfRange {
                index: n_max as i64,
                min: 0,
                max: self.n_max() as i64,
            });
        }
        Ok(OverpartitionTable {
            values: self.values[..=n_max as usize].to_vec(),
            method: self.method,
        })
    }
}

/// `p̄(0..=n_max)` from the sparse theta recurrence, `O(n_max^{3/2})`
/// big-integer additions.
pub fn table_theta(n_max: u64) -> OverpartitionTable {
    let n_max = n_max as usize;
    let mut values: Vec<BigUint> = Vec::with_capacity(n_max + 1);
    values.push(BigUint::one());
    for n in 1..=n_max {
        let mut plus = BigUint::zero();
        let mut minus = BigUint::zero();
        let mut s = 1usize;
        while s * s <= n {
            let v = &values[n - s * s];
            if s % 2 == 1 {
                plus += v;
            } else {
                minus += v;
            }
            s += 1;
        }
        values.push((plus - minus) << 1u32);
    }
    OverpartitionTable::from_values(values, Method::ThetaRecurrence)
}

/// `p̄(0..=n_max)` as `Σ_m q(m) p(n - m)` with `q` counting partitions into
/// distinct parts and `p` ordinary partitions. `O(n_max²)`; meant as an
/// oracle for moderate `n_max`.
pub fn table_oracle(n_max: u64) -> OverpartitionTable {
    let n = n_max as usize;
    let mut distinct = vec![BigUint::zero(); n + 1];
    let mut ordinary = vec![BigUint::zero(); n + 1];
    distinct[0] = BigUint::one();
    ordinary[0] = BigUint::one();
    for part in 1..=n {
        // each part used at most once: sweep downwards
        for total in (part..=n).rev() {
            let add = distinct[total - part].clone();
            distinct[total] += add;
        }
        // unlimited multiplicity: sweep upwards
        for total in part..=n {
            let add = ordinary[total - part].clone();
            ordinary[total] += add;
        }
    }
    let values = (0..=n)
        .map(|total| {
            (0..=total)
                .map(|m| &distinct[m] * &ordinary[total - m])
                .sum::<BigUint>()
        })
        .collect();
    OverpartitionTable::from_values(values, Method::ConvolutionOracle)
}

/// The operator `Δ^r_j`, i.e. `r` applications of `a(n) ↦ a(n) - a(n - j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DifferenceSpec {
    j: u64,
    r: u32,
}

impl DifferenceSpec {
    pub fn new(j: u64, r: u32) -> Result<Self> {
        if j == 0 {
            return Err(Error::Domain("difference shift j must be at least 1".into()));
        }
        Ok(DifferenceSpec { j, r })
    }

    pub fn j(&self) -> u64 {
        self.j
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Smallest `n` at which the operator only touches non-negative indices.
    pub fn reach(&self) -> u64 {
        self.r as u64 * self.j
    }
}

/// `Δ^r_j(p̄)(n) = Σ_{m=0}^{r} (-1)^m C(r, m) p̄(n - m j)`.
pub fn shifted_difference(
    table: &OverpartitionTable,
    spec: DifferenceSpec,
    n: u64,
) -> Result<BigInt> {
    if n < spec.reach() {
        return Err(Error::OutOfRange {
            index: n as i64 - spec.reach() as i64,
            min: 0,
            max: table.n_max() as i64,
        });
    }
    if n > table.n_max() {
        return Err(Error::OutOfRange {
            index: n as i64,
            min: spec.reach() as i64,
            max: table.n_max() as i64,
        });
    }
    let mut binom = BigInt::one();
    let mut acc = BigInt::zero();
    for m in 0..=spec.r as u64 {
        let v = BigInt::from(table.values[(n - m * spec.j) as usize].clone());
        if m % 2 == 0 {
            acc += &binom * v;
        } else {
            acc -= &binom * v;
        }
        binom = binom * (spec.r as u64 - m) / (m + 1);
    }
    Ok(acc)
}

/// Leading values `p̄(0..=10)`, used to sanity-check cached tables.
pub const KNOWN_PREFIX: [u32; 11] = [1, 2, 4, 8, 14, 24, 40, 64, 100, 154, 232];
