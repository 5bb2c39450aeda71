use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("vertex id {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("probability out of range: edge {index} has p = {p}")]
    ProbabilityOutOfRange { index: usize, p: f64 },
    #[error("edge {index} is a self-loop on vertex {vertex}")]
    SelfLoop { index: usize, vertex: VertexId },
    #[error("seed set is empty")]
    EmptySeedSet,
    #[error("no probability recorded for vertex {0}")]
    MissingVertex(VertexId),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderingError {
    #[error("edge order has length {got}, graph has {expected} edges")]
    WrongLength { got: usize, expected: usize },
    #[error("edge index {0} is out of range or repeated in the order")]
    NotAPermutation(usize),
    #[error("bag vertex {vertex} out of range for n = {n}")]
    BagVertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex {0} appears in no bag")]
    VertexNotCovered(VertexId),
    #[error("vertex {vertex} occurs in non-contiguous bags (bag {bag} breaks its run)")]
    NonContiguous { vertex: VertexId, bag: usize },
    #[error("endpoints of edge {index} ({tail}, {head}) never share a bag")]
    EdgeNotCovered { index: usize, tail: VertexId, head: VertexId },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpreadError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Ordering(#[from] OrderingError),
    #[error("frontier width {omega} exceeds the limit {max}; state counts grow like 2^(w^2)")]
    WidthExceeded { omega: usize, max: usize },
    #[error("target {0} is a seed")]
    TargetIsSeed(VertexId),
    #[error("internal invariant violated: {0}")]
    Internal(&'static str),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("exhaustive enumeration refused: {edges} free edges exceeds the limit of {limit}")]
    TooManyEdges { edges: usize, limit: usize },
}
