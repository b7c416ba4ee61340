use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("malformed header at byte {offset}: {reason}")]
    MalformedHeader { offset: u64, reason: String },

    #[error("truncated {section} at byte {offset}: need {needed} bytes, {available} available")]
    Truncated {
        section: &'static str,
        offset: u64,
        needed: u64,
        available: u64,
    },

    #[error("destination out of range at byte {offset}: node {dest} >= num_nodes {num_nodes}")]
    DestinationOutOfRange {
        offset: u64,
        dest: u64,
        num_nodes: u64,
    },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("invalid csr: {0}")]
    InvalidCsr(String),

    #[error("rmat probabilities sum to {0}, expected 1")]
    ProbabilitySum(f64),

    #[error("rmat scale {0} exceeds the maximum of 32")]
    ScaleTooLarge(u32),

    #[error("source node {source_node} out of range for graph with {num_nodes} nodes")]
    SourceOutOfRange { source_node: u64, num_nodes: u64 },

    #[error("variant requires the transposed (in-edge) csr; build it first")]
    MissingTranspose,

    #[error("graph has no edge weights")]
    MissingWeights,

    #[error("adjacency of node {0} is not sorted")]
    UnsortedAdjacency(u64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("allocation of {requested} bytes exceeds total socket capacity of {capacity} bytes")]
    ExceedsCapacity { requested: u64, capacity: u64 },

    #[error("unsupported page size {0}; expected 4096 or 2097152")]
    UnsupportedPageSize(u64),

    #[error("failed to build worker pool: {0}")]
    ThreadPool(String),
}
