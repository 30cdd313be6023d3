use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid operator: {0}")]
    Operator(String),

    #[error("invalid domain: {0}")]
    Domain(String),

    #[error("degenerate geometry at theta = {theta:?}: {reason}")]
    DegenerateGeometry { theta: Vec<f64>, reason: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    Invalid(String),
}
