use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Exact elimination hit an all-zero pivot column.
    #[error("singular matrix: no usable pivot in column {column}")]
    SingularMatrix { column: usize },

    /// Closed-form coefficient formula requires distinct nonzero exponents.
    #[error("duplicate exponent: {value}")]
    DuplicateExponent { value: String },

    #[error("dimension mismatch: {details}")]
    DimensionMismatch { details: String },

    /// The exponent rounding policy produced two equal integers.
    #[error("rounding collision: nodes {j} and {next} both round to exponent {value}")]
    RoundingCollision { j: usize, next: usize, value: u64 },

    /// Linear program or support search has no feasible point.
    #[error("infeasible: {details}")]
    Infeasible { details: String },

    /// Dense-matrix engine refuses systems above the desk-scale cap.
    #[error("dimension cap: {sites} sites exceeds the maximum of {cap}")]
    DimensionCap { sites: usize, cap: usize },

    /// Step search exhausted its budget without reaching the error target.
    #[error("error target {epsilon:e} unreachable within {max_steps} steps (best error {best_error:e})")]
    Unreachable {
        epsilon: f64,
        max_steps: u64,
        best_error: f64,
    },

    #[error("parse error at {locator}: {message}")]
    ParseError { locator: String, message: String },

    #[error("invalid input: {details}")]
    InvalidInput { details: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dim(details: impl Into<String>) -> Self {
        Error::DimensionMismatch {
            details: details.into(),
        }
    }

    pub(crate) fn invalid(details: impl Into<String>) -> Self {
        Error::InvalidInput {
            details: details.into(),
        }
    }

    pub(crate) fn infeasible(details: impl Into<String>) -> Self {
        Error::Infeasible {
            details: details.into(),
        }
    }
}
