//! Error type shared across the laboratory.

use thiserror::Error;

/// Everything that can go wrong while parsing specs, deciding membership, or
/// running a ball-bounded computation.
#[derive(Error, Debug)]
pub enum CommError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed exponent in `{0}`")]
    MalformedExponent(String),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("invalid coset table: {0}")]
    InvalidCosetTable(String),
    #[error("membership inconclusive within budget {budget}")]
    MembershipUnknown { budget: u64 },
    #[error("vertex budget exceeded: computation needs more than {cap} vertices")]
    BudgetExceeded { cap: usize },
    #[error("profile did not stabilize: {0}")]
    ProfileNotStabilized(String),
    #[error("auxiliary element search failed: {0}")]
    AuxiliarySearchFailed(String),
    #[error("lift search failed: {0}")]
    LiftSearchFailed(String),
    #[error("coset transversal incomplete: {0}")]
    TransversalIncomplete(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CommError>;
