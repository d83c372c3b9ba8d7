use thiserror::Error;

/// Crate-wide error type. Variant names follow the failure modes named in
/// the per-operation contracts.
#[derive(Error, Debug, Clone)]
pub enum Error {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("space too large: {0}")]
    TooLarge(String),
    #[error("eigen split failed: {0}")]
    EigenSplitFailed(String),
    #[error("non-integral element: {0}")]
    NonIntegral(String),
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("series not in ker(psi): {0}")]
    NotInPsiZero(String),
    #[error("singular system: {0}")]
    SingularSystem(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("mod-p reduction is zero: {0}")]
    ZeroReduction(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}
