use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("basis index {index} out of range for local dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("ket has no nonzero coefficient")]
    ZeroKet,

    #[error("local dimension must be positive")]
    ZeroDimension,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid system shape: {0}")]
    InvalidShape(String),

    #[error("party index {party} out of range for {parties} parties")]
    InvalidParty { party: usize, parties: usize },

    #[error("state {label:?} does not conform to the system shape: {reason}")]
    NonConformingState { label: String, reason: String },

    #[error("duplicate state label {0:?}")]
    DuplicateLabel(String),

    #[error("invalid construction parameters: {0}")]
    InvalidParameters(String),

    #[error("unsupported party count {0}: multipartite composition needs n = 3 or n > 6")]
    UnsupportedPartyCount(usize),

    #[error("invalid stopper pair for block {block}: {reason}")]
    InvalidStopper { block: usize, reason: String },

    #[error("composed set is not pairwise orthogonal ({pairs} overlapping pairs, first: {first} / {second})")]
    ComposedNotOrthogonal {
        pairs: usize,
        first: String,
        second: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
