use graph_core::GraphError;
use metric_oracles::OracleError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeparatorError {
    #[error("path is not a shortest path: {0}")]
    NotShortest(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("recursion depth {depth} exceeded cap {cap}; worst separator balance {worst_balance:.3}")]
    DepthExceeded { depth: usize, cap: usize, worst_balance: f64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl From<SeparatorError> for OracleError {
    fn from(e: SeparatorError) -> Self {
        match e {
            SeparatorError::Graph(g) => OracleError::Graph(g),
            SeparatorError::Input(s) => OracleError::InvalidQuery(s),
            other => OracleError::ContractViolation(other.to_string()),
        }
    }
}
