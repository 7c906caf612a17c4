//! Overpartition function: exact values, Zuckerman's circle-method series
//! with Engel's truncation bound, and effective asymptotic expansions of
//! `p̄(n + k)` and of the shifted differences `Δ^r_j p̄`, together with a
//! verifier that checks every effective bound against exact values.
//!
//! Module map:
//!
//! - [`exact`]: exact `p̄(n)` tables (theta recurrence and an independent
//!   convolution oracle), shifted differences, binary cache and CSV export.
//! - [`circle`]: multiplier roots of unity, truncated Zuckerman series and
//!   certified rounding.
//! - [`asymptotic`]: exact π-Laurent coefficients, thresholds, error budgets
//!   and numeric evaluation of the truncated expansions.
//! - [`verify`]: verification reports for each effective statement.
//! - [`bigfloat`]: the arbitrary-precision float used throughout.

pub mod asymptotic;
pub mod bigfloat;
pub mod circle;
pub mod error;
pub mod exact;
pub mod verify;

pub use bigfloat::BigFloat;
pub use error::{Error, Result};
