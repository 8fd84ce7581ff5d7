//! Error type shared by every module.

use alloc::string::String;

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("focality violated: play between {0} and {1} differs from the incumbent assignment")]
    Focality(String, String),
    #[error("not an equilibrium: {0}")]
    NotEquilibrium(String),
    #[error("configuration is not balanced: {0}")]
    Unbalanced(String),
    #[error("unknown type id `{0}`")]
    UnknownType(String),
    #[error("misuse: {0}")]
    Misuse(String),
}
