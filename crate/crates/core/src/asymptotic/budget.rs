//! Error constants `Ẽ₁, Ẽ₂, Ē₁, Ê₂, E` and the thresholds they come with.

use serde::{Deserialize, Serialize};

use super::binomial;
use super::thresholds::{n_min, n_min_diff, threshold_n, threshold_n0};
use crate::bigfloat::{pi, BigFloat};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetShape {
    /// `p̄(n + k)`.
    Shift { k: i64 },
    /// `Δ^r_j(p̄)(n - j)`.
    Difference { r: u32, j: u64 },
}

/// Constants of one effective expansion of order `N`.
///
/// For the difference form every constant is the binomially weighted sum
/// `Σ_m C(r, m) X(N, -(m+1)j)` of the shift constants, so the relations
/// `Ē₁ = Ẽ₁ + Ẽ₂` and `E = Ē₁ + Ê₂` hold in both shapes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ErrorBudget {
    pub order: u32,
    pub shape: BudgetShape,
    /// `N(N + 1)`.
    pub n_of_m: BigFloat,
    /// `N₀(N + 1)`.
    pub n0: u64,
    pub n_min: u64,
    pub e1_tilde: BigFloat,
    pub e2_tilde: BigFloat,
    pub e1_bar: BigFloat,
    pub e2_hat: BigFloat,
    pub e: BigFloat,
    pub precision_bits: u32,
}

struct Parts {
    e1_tilde: BigFloat,
    e2_tilde: BigFloat,
    e2_hat: BigFloat,
}

fn shift_parts(order: u32, k: i64, p: u32) -> Parts {
    let pi = pi(p);
    let pi_32 = &pi * &pi.sqrt();
    let ak = BigFloat::from_u64(k.unsigned_abs(), p);
    let sqrt_k = ak.sqrt();
    let lead = sqrt_k.powi(order as i64).ldexp(1);
    let arg = &pi * &sqrt_k;
    let s1 = &BigFloat::one(p) + &BigFloat::from_u64(2 * (order as u64 + 1), p).sqrt();
    let s2 = BigFloat::from_u64(2 * (order as u64 + 2), p).sqrt();
    let e1_tilde = &(&(&lead * &arg.sinh()) * &s1) / &pi_32;
    let e2_tilde = &(&(&lead * &arg.cosh()) * &s2) / &pi_32;
    let pi_pow = pi.powi(order as i64 + 1);
    let e2_hat = if k > 0 {
        &(&BigFloat::one(p) + &pi) / &pi_pow
    } else {
        let two = BigFloat::from_u64(2, p);
        let h = &two.sqrt().powi(order as i64 + 3);
        h / &pi_pow
    };
    Parts {
        e1_tilde,
        e2_tilde,
        e2_hat,
    }
}

fn assemble(order: u32, shape: BudgetShape, n_min: u64, parts: Parts, prec: u32) -> Result<ErrorBudget> {
    let e1_tilde = parts.e1_tilde.with_precision(prec);
    let e2_tilde = parts.e2_tilde.with_precision(prec);
    let e2_hat = parts.e2_hat.with_precision(prec);
    let e1_bar = &e1_tilde + &e2_tilde;
    let e = &e1_bar + &e2_hat;
    Ok(ErrorBudget {
        order,
        shape,
        n_of_m: threshold_n(order + 1, prec)?,
        n0: threshold_n0(order + 1)?,
        n_min,
        e1_tilde,
        e2_tilde,
        e1_bar,
        e2_hat,
        e,
        precision_bits: prec,
    })
}

/// Budget of the expansion of `p̄(n + k)` to order `N`.
pub fn error_budget(order: u32, k: i64, prec: u32) -> Result<ErrorBudget> {
    let n_min = n_min(order, k)?;
    let parts = shift_parts(order, k, prec + 32);
    assemble(order, BudgetShape::Shift { k }, n_min, parts, prec)
}

/// Budget of the expansion of `Δ^r_j(p̄)(n - j)` to order `N ≥ r ≥ 1`.
pub fn error_budget_diff(order: u32, r: u32, j: u64, prec: u32) -> Result<ErrorBudget> {
    if r == 0 {
        return Err(Error::Domain("difference order r must be at least 1".into()));
    }
    if order < r {
        return Err(Error::Domain(format!(
            "expansion order N = {order} is below the difference order r = {r}"
        )));
    }
    let n_min = n_min_diff(order, r, j)?;
    let p = prec + 32;
    let mut sum = Parts {
        e1_tilde: BigFloat::zero(p),
        e2_tilde: BigFloat::zero(p),
        e2_hat: BigFloat::zero(p),
    };
    for m in 0..=r as u64 {
        let k = -i64::try_from((m + 1) * j)
            .map_err(|_| Error::Domain("shift does not fit in 64 bits".into()))?;
        let w = BigFloat::from_bigint(&binomial(r as u64, m), p);
        let part = shift_parts(order, k, p);
        sum.e1_tilde = &sum.e1_tilde + &(&w * &part.e1_tilde);
        sum.e2_tilde = &sum.e2_tilde + &(&w * &part.e2_tilde);
        sum.e2_hat = &sum.e2_hat + &(&w * &part.e2_hat);
    }
    assemble(order, BudgetShape::Difference { r, j }, n_min, sum, prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &BigFloat, b: f64) -> bool {
        (a.to_f64() - b).abs() <= 1e-13 * b.abs()
    }

    #[test]
    fn examples() {
        let pi = std::f64::consts::PI;
        let b = error_budget(1, 1, 128).unwrap();
        assert!(close(&b.e1_tilde, 6.0 * pi.sinh() / pi.powf(1.5)));
        assert!(close(&b.e2_hat, (1.0 + pi) / (pi * pi)));
        assert_eq!(b.n_min, 22);
        let b = error_budget(2, -1, 128).unwrap();
        assert!(close(&b.e2_hat, 2f64.powf(2.5) / pi.powi(3)));
        assert!(error_budget(1, 0, 128).is_err());
    }

    #[test]
    fn composition() {
        for order in 1..=8 {
            for k in (-6i64..=6).filter(|&k| k != 0) {
                let b = error_budget(order, k, 128).unwrap();
                assert_eq!(b.e1_bar, &b.e1_tilde + &b.e2_tilde);
                assert_eq!(b.e, &b.e1_bar + &b.e2_hat);
                for c in [&b.e1_tilde, &b.e2_tilde, &b.e2_hat, &b.e] {
                    assert!(c.is_positive());
                }
            }
        }
    }

    #[test]
    fn difference_weights() {
        let rel = |a: &BigFloat, b: &BigFloat| ((a - b).abs() / b.abs()).to_f64();
        let d = error_budget_diff(1, 1, 1, 128).unwrap();
        let sum = &error_budget(1, -1, 128).unwrap().e + &error_budget(1, -2, 128).unwrap().e;
        assert!(rel(&d.e, &sum) < 1e-30);
        let d = error_budget_diff(2, 2, 1, 128).unwrap();
        let e = |k| error_budget(2, k, 128).unwrap().e;
        let sum = &(&e(-1) + &e(-2).mul_i64(2)) + &e(-3);
        assert!(rel(&d.e, &sum) < 1e-30);
        assert_eq!(
            d.n_min,
            (1..=3).map(|m| n_min(2, -m).unwrap()).max().unwrap()
        );
        assert!(error_budget_diff(1, 2, 1, 128).is_err());
        assert!(error_budget_diff(1, 0, 1, 128).is_err());
    }
}
