use graph_core::GraphError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TdError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("tree decomposition violates the {axiom} axiom: {detail}")]
    Axiom { axiom: &'static str, detail: String },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("decomposition width {width} exceeds the cap {cap}")]
    TooWide { width: usize, cap: usize },
    #[error("{k} terminals exceed the Held-Karp cap of {cap}")]
    TooManyTerminals { k: usize, cap: usize },
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
