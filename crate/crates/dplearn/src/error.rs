//! Crate-wide error type.

/// Convenience alias used by every fallible operation in this crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by learners, mechanisms, generators, and the harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller-supplied parameter is outside its documented domain.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Two pieces of data that must agree on dimension do not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// An operation was invoked in a state that forbids it (for example a
    /// halted sparse-vector instance, or a round past the declared horizon).
    #[error("invalid state: {0}")]
    State(String),

    /// The sample admits no consistent decision list over the given family.
    #[error("sample is not realizable over the feature family: {0}")]
    NonRealizable(String),

    /// The parameter solver did not reach a fixed point.
    #[error("parameter solver did not converge: {0}")]
    SolverDiverged(String),

    /// The requested setting admits no valid parameters.
    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    /// A mathematical operation left its domain (log of zero mass, etc.).
    #[error("domain error: {0}")]
    Domain(String),

    /// A public transcript fails its structural validity checks.
    #[error("inconsistent history: {0}")]
    InvalidHistory(String),

    /// A brute-force search was refused because it would be too large.
    #[error("search space too large: {0}")]
    SearchSpaceTooLarge(String),

    /// A data generator could not produce the requested output.
    #[error("generation failed: {0}")]
    Generation(String),

    /// A file or string being parsed does not match the documented format.
    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
