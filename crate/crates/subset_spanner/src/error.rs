use graph_core::GraphError;
use metric_oracles::OracleError;
use thiserror::Error;

use crate::ledger::LedgerEvent;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SubsetError {
    #[error("invalid input: {0}")]
    Input(String),
    /// A structural property the construction relies on was observed to fail.
    #[error("invariant violated: {0}")]
    Invariant(String),
    /// A ledger balance would have gone negative; `events` is the full log.
    #[error("credit ledger: {message}")]
    Ledger { message: String, events: Vec<LedgerEvent> },
    #[error("oracle failed on {context}: {source}")]
    Oracle { context: String, source: OracleError },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl From<SubsetError> for OracleError {
    fn from(e: SubsetError) -> Self {
        match e {
            SubsetError::Graph(g) => OracleError::Graph(g),
            SubsetError::Input(m) => OracleError::InvalidQuery(m),
            SubsetError::Oracle { source, .. } => source,
            other => OracleError::ContractViolation(other.to_string()),
        }
    }
}
