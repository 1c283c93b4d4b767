use graph_core::GraphError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("invalid point set: {0}")]
    InvalidPoints(String),
    #[error("minor provider violated its contract: {0}")]
    ContractViolation(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
