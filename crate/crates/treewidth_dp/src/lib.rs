//! Exact subset TSP on graphs of bounded treewidth.
//!
//! A tree decomposition (from a file or a min-fill heuristic) is made nice,
//! then processed bottom-up with tables of weighted-partition encodings that
//! are kept small by rank-based representative-set reduction. Held–Karp over
//! the terminal metric is included as an independent exact solver.

mod decomposition;
mod dp;
mod error;
mod held_karp;
mod nice;
pub mod partition;

pub use decomposition::{Heuristic, TreeDecomposition};
pub use dp::{
    process_node, subset_tsp, subset_tsp_dp, DpContext, DpOptions, DpStats, Encoding, PartitionTable, TourSolution,
};
pub use error::TdError;
pub use held_karp::{held_karp, HELD_KARP_CAP};
pub use nice::{make_nice, NiceNode, NiceTreeDecomposition, NodeKind};
pub use partition::{join_partitions, reduce_representatives, Partition, Reduction, WeightedPartition};
