use thiserror::Error;

/// Errors shared by the algebraic layers.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular")]
    Singular,

    #[error("operator is not nilpotent")]
    NotNilpotent,

    #[error("operators do not commute")]
    NonCommuting,

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("numerical degeneracy: {0}")]
    Degenerate(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
