//! Numeric evaluation of the truncated expansions
//!
//! ```text
//! p̄(n + k)       = e^{π√n}/(8n) (Σ_{t=0}^{N} A_k(t) n^{-t/2}   + O_{≤E(N,k)}(n^{-(N+1)/2}))
//! Δ^r_j(p̄)(n-j) = e^{π√n}/(8n) (Σ_{t=r}^{N} A_j(t,r) n^{-t/2} + O_{≤E(N,r,j)}(n^{-(N+1)/2}))
//! ```

use serde::{Deserialize, Serialize};

use super::budget::{error_budget, error_budget_diff, ErrorBudget};
use super::coeffs::{coeff_a, coeff_a_diff};
use crate::bigfloat::{pi, BigFloat};
use crate::error::{Error, Result};

const GUARD: u32 = 32;

/// Main term and remainder bound at one `n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Expansion {
    pub n: u64,
    pub main: BigFloat,
    pub bound: BigFloat,
    pub precision_bits: u32,
}

/// `Σ_t c_t n^{-t/2}` with `coeffs[i]` belonging to `t = first + i`, the
/// prefactor `e^{π√n}/(8n)` and the bound `E n^{-(N+1)/2}` times the same
/// prefactor.
fn evaluate(n: u64, first: u32, coeffs: &[BigFloat], e: &BigFloat, prec: u32) -> Expansion {
    let p = prec + GUARD;
    let nf = BigFloat::from_u64(n, p);
    let sqrt_n = nf.sqrt();
    let inv = sqrt_n.recip();
    let mut sum = BigFloat::zero(p);
    for c in coeffs.iter().rev() {
        sum = &(&sum * &inv) + c;
    }
    sum = &sum * &inv.powi(first as i64);
    let order = first as i64 + coeffs.len() as i64 - 1;
    let prefactor = &(&pi(p) * &sqrt_n).exp() / &nf.mul_i64(8);
    let main = &prefactor * &sum;
    let bound = &(&prefactor * e) * &inv.powi(order + 1);
    Expansion {
        n,
        main: main.with_precision(prec),
        bound: bound.with_precision(prec),
        precision_bits: prec,
    }
}

/// Expansion of `p̄(n + k)` to order `N` with coefficients evaluated once.
#[derive(Clone, Debug)]
pub struct ShiftExpansion {
    k: i64,
    coeffs: Vec<BigFloat>,
    budget: ErrorBudget,
    precision_bits: u32,
}

impl ShiftExpansion {
    pub fn new(k: i64, order: u32, prec: u32) -> Result<Self> {
        let budget = error_budget(order, k, prec + GUARD)?;
        let coeffs = (0..=order)
            .map(|t| coeff_a(k, t).map(|a| a.evaluate(prec + GUARD)))
            .collect::<Result<_>>()?;
        Ok(ShiftExpansion {
            k,
            coeffs,
            budget,
            precision_bits: prec,
        })
    }

    pub fn n_min(&self) -> u64 {
        self.budget.n_min
    }

    pub fn budget(&self) -> &ErrorBudget {
        &self.budget
    }

    pub fn evaluate(&self, n: u64) -> Result<Expansion> {
        if n < self.budget.n_min {
            return Err(Error::BelowThreshold {
                statement: "thm_1_1",
                n,
                threshold: self.budget.n_min,
            });
        }
        if (n as i128) + (self.k as i128) < 0 {
            return Err(Error::Domain(format!("n + k = {} is negative", n as i128 + self.k as i128)));
        }
        Ok(evaluate(n, 0, &self.coeffs, &self.budget.e, self.precision_bits))
    }
}

/// Expansion of `Δ^r_j(p̄)(n - j)` to order `N ≥ r`.
#[derive(Clone, Debug)]
pub struct DifferenceExpansion {
    r: u32,
    j: u64,
    coeffs: Vec<BigFloat>,
    budget: ErrorBudget,
    precision_bits: u32,
}

impl DifferenceExpansion {
    pub fn new(j: u64, r: u32, order: u32, prec: u32) -> Result<Self> {
        let budget = error_budget_diff(order, r, j, prec + GUARD)?;
        let coeffs = (r..=order)
            .map(|t| coeff_a_diff(j, t, r).map(|a| a.evaluate(prec + GUARD)))
            .collect::<Result<_>>()?;
        Ok(DifferenceExpansion {
            r,
            j,
            coeffs,
            budget,
            precision_bits: prec,
        })
    }

    pub fn n_min(&self) -> u64 {
        self.budget.n_min
    }

    pub fn budget(&self) -> &ErrorBudget {
        &self.budget
    }

    pub fn evaluate(&self, n: u64) -> Result<Expansion> {
        if n < self.budget.n_min {
            return Err(Error::BelowThreshold {
                statement: "thm_1_2",
                n,
                threshold: self.budget.n_min,
            });
        }
        if (n as u128) < (self.r as u128 + 1) * self.j as u128 {
            return Err(Error::Domain(format!(
                "n - (r+1)j is negative for n = {n}, r = {}, j = {}",
                self.r, self.j
            )));
        }
        Ok(evaluate(n, self.r, &self.coeffs, &self.budget.e, self.precision_bits))
    }
}

/// `(main, bound)` for `p̄(n + k)`; see [`ShiftExpansion`].
pub fn expansion_value(n: u64, k: i64, order: u32, prec: u32) -> Result<Expansion> {
    ShiftExpansion::new(k, order, prec)?.evaluate(n)
}

/// `(main, bound)` for `Δ^r_j(p̄)(n - j)`; see [`DifferenceExpansion`].
pub fn expansion_diff_value(n: u64, j: u64, r: u32, order: u32, prec: u32) -> Result<Expansion> {
    DifferenceExpansion::new(j, r, order, prec)?.evaluate(n)
}
