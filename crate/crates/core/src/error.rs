use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Index outside the range covered by a table or operator.
    #[error("index {index} out of range (valid: {min}..={max})")]
    OutOfRange { index: i64, min: i64, max: i64 },

    /// A theorem or lemma hypothesis on `n` is not met.
    #[error("precondition failed for {statement}: n = {n} is below the threshold {threshold}")]
    BelowThreshold {
        statement: &'static str,
        n: u64,
        threshold: u64,
    },

    #[error("configuration error: {0}")]
    Config(String),

    /// No truncation order in the scan range certifies the rounding.
    #[error(
        "certification failed for n = {n}: best truncation order {best_order} gives bound {best_bound:.6} (needs < 0.5)"
    )]
    CertificationFailed {
        n: u64,
        best_order: u64,
        best_bound: f64,
    },

    #[error("cache error: {0}")]
    Cache(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
