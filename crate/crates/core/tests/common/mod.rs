//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use overasym_core::asymptotic::PiLaurent;
use overasym_core::exact::{table_theta, OverpartitionTable};

/// Largest index any shared test needs.
pub const TABLE_MAX: u64 = 40_000;

pub fn table() -> &'static OverpartitionTable {
    static T: OnceLock<OverpartitionTable> = OnceLock::new();
    T.get_or_init(|| table_theta(TABLE_MAX))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// Pascal's triangle row by row.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut row = vec![BigInt::one()];
    for _ in 0..n {
        let mut next = vec![BigInt::one(); row.len() + 1];
        for i in 1..row.len() {
            next[i] = &row[i - 1] + &row[i];
        }
        row = next;
    }
    row[k as usize].clone()
}

fn q(n: BigInt, d: BigInt) -> BigRational {
    BigRational::new(n, d)
}

fn sign(l: u64) -> BigInt {
    if l.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// `A_k(2t) = (-k/4)^t Σ_{ℓ=0}^{t} (-1)^ℓ C(2t+1, t-ℓ)(t+ℓ+1) π^{2ℓ} k^ℓ/(2ℓ+1)!`.
pub fn even_form(k: i64, t: u32) -> PiLaurent {
    let t = t as u64;
    let lead = num_traits::pow(q(BigInt::from(-k), BigInt::from(4)), t as usize);
    let mut out = PiLaurent::zero();
    for l in 0..=t {
        let num = sign(l)
            * binomial(2 * t + 1, t - l)
            * (t + l + 1)
            * num_traits::pow(BigInt::from(k), l as usize);
        out.add_term(&lead * q(num, factorial(2 * l + 1)), 2 * l as i32);
    }
    out
}

/// `A_k(2t+1) = k^t (-1)^{t+1} / (2^{2t+1} π) Σ_{ℓ=0}^{t+1} (-1)^ℓ C(2t+2, t-ℓ+1)(t+ℓ+1) π^{2ℓ} k^ℓ/(2ℓ)!`.
pub fn odd_form(k: i64, t: u32) -> PiLaurent {
    let t = t as u64;
    let lead = q(
        sign(t + 1) * num_traits::pow(BigInt::from(k), t as usize),
        BigInt::one() << (2 * t + 1),
    );
    let mut out = PiLaurent::zero();
    for l in 0..=t + 1 {
        let num = sign(l)
            * binomial(2 * t + 2, t + 1 - l)
            * (t + l + 1)
            * num_traits::pow(BigInt::from(k), l as usize);
        out.add_term(&lead * q(num, factorial(2 * l)), 2 * l as i32 - 1);
    }
    out
}

/// Stirling numbers of the second kind from
/// `{n+1, m} = m {n, m} + {n, m-1}`, indexed `[n][m]`.
pub fn stirling_table(max: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); max + 1]; max + 1];
    s[0][0] = BigInt::one();
    for n in 0..max {
        for m in 1..=max {
            s[n + 1][m] = &s[n][m] * m + &s[n][m - 1];
        }
    }
    s
}

/// Set partitions of `{1..n}` into exactly `m` blocks, by enumerating
/// restricted growth strings.
pub fn count_set_partitions(n: usize, m: usize) -> u64 {
    fn go(pos: usize, n: usize, blocks: usize, m: usize) -> u64 {
        if pos == n {
            return (blocks == m) as u64;
        }
        let mut total = 0;
        for b in 0..=blocks.min(m.saturating_sub(1)) {
            total += go(pos + 1, n, blocks.max(b + 1), m);
        }
        total
    }
    if n == 0 {
        return (m == 0) as u64;
    }
    go(0, n, 0, m)
}
