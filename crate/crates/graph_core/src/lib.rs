//! Weighted undirected graphs with strictly positive edge weights, and the
//! shortest-path, tree and verification primitives shared by every other
//! crate in the workspace.

pub mod error;
pub mod families;
pub mod graph;
pub mod io;
pub mod metric;
pub mod mst;
pub mod par;
pub mod paths;
pub mod steiner;
pub mod stretch;
pub mod tol;

pub use error::GraphError;
pub use graph::{Edge, WeightedGraph};
pub use metric::{metric_completion, TerminalMetric};
pub use mst::{metric_mst, minimum_spanning_tree, MetricEdge};
pub use paths::{shortest_paths, shortest_paths_filtered, ShortestPaths};
pub use steiner::steiner_2approx;
pub use stretch::{measure_lightness, verify_stretch, PairStretch, StretchReport};
