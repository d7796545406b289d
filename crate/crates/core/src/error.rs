use thiserror::Error;

/// Errors produced by algebra construction and the geometric computations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("operation requires a {expected} algebra, got {found}")]
    KindMismatch { expected: String, found: String },

    #[error("declared algebra kind is not satisfied: {0}")]
    AxiomMismatch(String),

    #[error("algebra has no unit element")]
    NotUnital,

    #[error("algebra is not formally real (trace form signature {positive},{negative},{zero})")]
    NotFormallyReal {
        positive: usize,
        negative: usize,
        zero: usize,
    },

    #[error("invalid Jordan frame: {0}")]
    InvalidFrame(String),

    #[error(
        "point is not regular: coefficients lambda[{a}] = {lambda_a} and lambda[{b}] = {lambda_b} sum to zero"
    )]
    NotRegular {
        a: usize,
        b: usize,
        lambda_a: f64,
        lambda_b: f64,
    },

    #[error("degenerate bilinear form: {0}")]
    DegenerateForm(String),

    #[error("numerical failure: {message} (residual {residual:e}, condition estimate {condition:e})")]
    Numerical {
        message: String,
        residual: f64,
        condition: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed algebra file: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn numerical(message: impl Into<String>, residual: f64, condition: f64) -> Self {
        Error::Numerical {
            message: message.into(),
            residual,
            condition,
        }
    }
}
