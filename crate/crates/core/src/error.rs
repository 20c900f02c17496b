use thiserror::Error;

use crate::scalars::FieldTag;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: FieldTag, found: FieldTag },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("matrix is not self-adjoint (residual {residual:e})")]
    NotSelfAdjoint { residual: f64 },

    #[error("eigenvalue {value:e} is below the PSD tolerance")]
    NegativeEigenvalue { value: f64 },

    #[error("matrix is singular (smallest singular value {smallest:e})")]
    Singular { smallest: f64 },

    #[error("matrix is outside the quaternionic subalgebra (residual {residual:e})")]
    NotQuaternionic { residual: f64 },

    #[error("structure operators violate {identity} (residual {residual:e})")]
    Structure { identity: &'static str, residual: f64 },

    #[error("family is not orthonormal (max Gram deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("dimension {dim} is odd; pass the padding option to pad with a zero row and column")]
    OddDimension { dim: usize },

    #[error("operator is zero")]
    ZeroOperator,

    #[error("diagram is not directed: {0}")]
    NotDirected(String),

    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),

    #[error("unsupported over {field}: {reason}")]
    Unsupported { field: FieldTag, reason: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("config error: {0}")]
    Config(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
