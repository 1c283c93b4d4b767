//! Light subset spanners from sparse spanner oracles.
//!
//! [`build_subset_spanner`] buckets the terminal metric by weight scale and,
//! class by class, grows a hierarchy of clusters whose diameter and credit
//! invariants are checked at run time against an exact credit ledger.
//! [`oracle_from_subset_spanner`] goes the other way and turns any subset
//! spanner algorithm into a spanner oracle.

pub mod buckets;
pub mod builder;
pub mod clusters;
pub mod converse;
pub mod error;
pub mod ledger;
pub mod oracle;
pub mod phases;

pub use buckets::{bucket_edges, EdgeBuckets};
pub use builder::{
    build_subset_spanner, Cluster, ClusterHierarchy, Level, LevelDiagnostics, SpannerDiagnostics, SubsetOptions,
    SubsetSpanner, DEFAULT_G,
};
pub use clusters::{build_cluster_graph, level0_clusters, member_diameter, ClusterGraph, ClusterTree, EdgeSet, KEdge};
pub use converse::{oracle_from_subset_spanner, ConverseOracle};
pub use error::SubsetError;
pub use ledger::{CreditLedger, LedgerEvent};
pub use oracle::{doubling_oracle, BoundOracle, GraphOracle, MetricOracle, OracleFactory};
pub use phases::{cluster_level, Group, LevelAssignment, LevelParams};
