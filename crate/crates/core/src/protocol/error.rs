use thiserror::Error;

use crate::qudit::EngineError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("{what} value {value} out of range 0..={max}")]
    ValueOutOfRange { what: &'static str, value: usize, max: usize },
    #[error("{what} has length {actual}, expected {expected}")]
    LengthMismatch { what: &'static str, expected: usize, actual: usize },
    #[error("owner mismatch: expected participant {expected}, got {actual}")]
    OwnerMismatch { expected: usize, actual: usize },
    #[error("announced decoy position {position} is not a decoy slot of a sequence of length {len}")]
    BadAnnouncement { position: usize, len: usize },
    #[error("pairwise signs at index {index} are not transitive: {detail}")]
    Integrity { index: usize, detail: String },
    #[error(transparent)]
    Engine(#[from] EngineError),
}
