use graph_core::GraphError;
use subset_spanner::SubsetError;
use thiserror::Error;
use treewidth_dp::TdError;

#[derive(Debug, Error)]
pub enum PtasError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error(
        "contracted graph has heuristic width {width}, above the cap {cap}; use a larger epsilon or another partitioner"
    )]
    TooWide { width: usize, cap: usize },
    #[error("spanner construction failed: {0}")]
    Spanner(#[from] SubsetError),
    #[error("tour dynamic program failed: {0}")]
    Dp(#[from] TdError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("internal error: {0}")]
    Internal(String),
}
