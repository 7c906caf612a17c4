//! Effective asymptotic expansions of `p̄(n + k)` and of `Δ^r_j(p̄)(n - j)`.
//!
//! Coefficients are exact Laurent polynomials in π ([`PiLaurent`]); all
//! thresholds and error constants are evaluated in [`BigFloat`](crate::BigFloat).

mod budget;
mod coeffs;
mod expansion;
mod laurent;
mod thresholds;
mod zeta;

pub use budget::{error_budget, error_budget_diff, BudgetShape, ErrorBudget};
pub use coeffs::{coeff_a, coeff_a_diff, stirling2};
pub use expansion::{
    expansion_diff_value, expansion_value, DifferenceExpansion, Expansion, ShiftExpansion,
};
pub use laurent::PiLaurent;
pub use thresholds::{
    lemma_2_1_value, n1_non_normative, n_min, n_min_diff, threshold_n, threshold_n0,
};
pub use zeta::{zeta_three_halves, ZetaEnclosure};

pub(crate) use coeffs::binomial;
