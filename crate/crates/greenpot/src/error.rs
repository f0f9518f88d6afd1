use thiserror::Error;

/// Errors produced by the library.
///
/// The CLI maps `Validation`/`Io`/`Json` to exit code 1 (bad input) and keeps
/// everything else structured inside the report; unsatisfied hypotheses are a
/// scientific outcome, not an error.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point [{point}] is not in the interior of {domain}")]
    OutsideDomain { domain: String, point: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A structural hypothesis on the inputs does not hold (exponent ranges,
    /// nonzero measures, finiteness preconditions).
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// The evaluation set cannot support the requested operation
    /// (e.g. a Lebesgue norm over a bare point cloud).
    #[error("capability error: {0}")]
    Capability(String),

    /// Operation called on a value in the wrong state (e.g. diagnostics on a
    /// non-converged trace).
    #[error("state error: {0}")]
    State(String),

    /// A user-supplied function produced NaN where a value was required.
    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// Wrong measure representation for the operation.
    #[error("type error: {0}")]
    Type(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
