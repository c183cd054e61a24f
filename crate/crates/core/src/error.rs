use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// The variants line up with the CLI exit-code contract: `Usage` maps to 2,
/// everything else that is not a verified mismatch maps to 3.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("enumeration budget exceeded: need {required} elements, budget is {budget}")]
    Resource { required: u128, budget: u128 },

    #[error("precision k={k} is insufficient (observed exponent {exponent}); recompute with a larger k")]
    Precision { k: u32, exponent: u32 },

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("unsupported: {0}; supply a fixture")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
