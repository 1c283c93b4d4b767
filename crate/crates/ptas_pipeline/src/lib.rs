//! Approximate subset TSP: build a light subset spanner, contract its
//! lightest edge part, solve the contracted instance exactly on a tree
//! decomposition, and lift the tour back with a parity-fixing matching.
//!
//! The partitioners are heuristics. Their contracted width is measured and
//! reported, not guaranteed.

mod error;
pub mod lift;
pub mod partition;
mod pipeline;

pub use error::PtasError;
pub use lift::{check_closed_walk, exact_matching, greedy_matching, MatchingKind, Multiset};
pub use partition::{
    contract, partition_spanner, BfsLayerPartitioner, Contracted, ContractionPartition, GreedyPartitioner, Partitioner,
};
pub use pipeline::{lower_bound, run_ptas, PtasOptions, PtasReport, PtasResult};
