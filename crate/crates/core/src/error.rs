use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    /// A closed-form bound is outside its validity region. `fallback` carries
    /// the weaker guarantee that still applies, when there is one.
    #[error("bound not valid: {reason}")]
    Validity {
        reason: String,
        fallback: Option<f64>,
    },

    #[error("grid of {nodes} nodes exceeds the limit of {limit}")]
    GridTooLarge { nodes: u128, limit: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
