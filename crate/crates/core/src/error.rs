use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("image vector is not a permutation")]
    InvalidPermutation,
    #[error("permutation degrees differ: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("vertex {vertex} out of range for digraph on {order} vertices")]
    VertexOutOfRange { vertex: u32, order: usize },
    #[error("digraph must have at least one vertex")]
    EmptyVertexSet,
    #[error("operation requires an irreflexive digraph (loop at {0})")]
    LoopPresent(u32),
    #[error("operation requires a symmetric digraph")]
    NotSymmetric,
    #[error("operation requires an asymmetric digraph")]
    NotAsymmetric,
    #[error("operation requires a connected digraph")]
    NotConnected,
    #[error("operation requires a regular digraph of valence {expected}")]
    NotRegular { expected: u32 },
    #[error("{what} exceeded its cap of {cap}")]
    CapExceeded { what: &'static str, cap: u64 },
    #[error("search budget exhausted in {what} ({budget} nodes)")]
    BudgetExceeded { what: String, budget: u64 },
    #[error("group order exceeds the supported range")]
    OrderOverflow,
    #[error("{0}")]
    GroupArgument(String),
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("invalid universal type parameters: {0}")]
    UniversalType(String),
    #[error("{0}")]
    Construction(String),
    #[error("{0}")]
    Census(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
