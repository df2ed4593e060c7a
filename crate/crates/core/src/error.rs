use thiserror::Error;

/// Errors produced by the partitioning toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("input contains no edges or nodes")]
    EmptyGraph,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("node index {index} out of range for graph with {node_count} nodes")]
    NodeOutOfRange { index: usize, node_count: usize },

    #[error("partition index {index} out of range for {part_count} parts")]
    PartOutOfRange { index: usize, part_count: usize },

    #[error("cannot split {available} nodes into {requested} non-empty parts")]
    Infeasible { requested: usize, available: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("graph with {node_count} nodes is too large for the dense check (limit {limit})")]
    TooLarge { node_count: usize, limit: usize },

    #[error("graph has no edges")]
    NoEdges,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
