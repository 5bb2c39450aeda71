//! Exact reachability probabilities on directed uncertain graphs.
//!
//! Given a digraph whose edges are independently present with known
//! probabilities and a seed set `S`, this crate computes `P(S ⇝ v)` for every
//! vertex and the influence spread `σ(S)` under the independent cascade
//! model. Two exact algorithms are provided, both driven by an edge ordering
//! of small frontier width:
//!
//! * [`single`]: one decision diagram per target vertex (baseline).
//! * [`all_targets`]: one shared diagram for all targets, linear in `m + n`
//!   for bounded width.
//!
//! [`oracle`] holds exhaustive enumerations used as ground truth.
#![cfg_attr(not(feature = "std"), no_std)]
// Bit positions index several parallel masks at once.
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod all_targets;
pub mod error;
pub mod graph;
mod intern;
pub mod oracle;
pub mod ordering;
pub mod pipeline;
pub mod single;
pub mod state;

pub use error::{GraphError, OracleError, OrderingError, SpreadError};
pub use graph::{assemble_spread, split_components, Edge, SeedSet, SpreadResult, UncertainDigraph, VertexId};
pub use ordering::{compute_frontiers, heuristic_ordering, ordering_from_decomposition, EdgeOrdering, PathDecomposition};
