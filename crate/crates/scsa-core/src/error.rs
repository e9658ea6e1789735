//! Crate-wide error type.

/// Errors reported by signal validation, parameter selection, and the
/// numerical kernels.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Grid shape unsupported by the differentiation matrix.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// Signal fails its structural invariants (length, finiteness, spacing).
    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    /// Parameter outside its documented domain.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Mismatched or malformed operation inputs.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Input is structurally valid but makes the operation meaningless
    /// (zero curvature, zero spread, zero power).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// An iterative numerical routine failed to converge.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// No usable peak in the signal.
    #[error("peak not found: {0}")]
    PeakNotFound(String),

    /// Denoised signal equals the reference exactly; the SNR ratio has a
    /// zero denominator and is reported as this distinct condition.
    #[error("SNR is infinite: signals are identical")]
    InfiniteSnr,
}

pub type Result<T> = std::result::Result<T, Error>;
