use thiserror::Error;

/// Errors raised anywhere in the construction, synthesis and verification stack.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not invertible over GF(2)")]
    NotInvertible,

    #[error("index out of range: {0}")]
    Index(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("size error: {0}")]
    Size(String),

    #[error("pipeline invariant violated at stage `{stage}`: {detail}")]
    PipelineInvariant { stage: &'static str, detail: String },

    #[error("decomposition mismatch: {0}")]
    Decomposition(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("invalid circuit: {0}")]
    Circuit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
