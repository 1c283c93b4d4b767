use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("edge ({u}, {v}) has non-positive or non-finite weight {w}")]
    BadWeight { u: usize, v: usize, w: f64 },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("parallel edge ({0}, {1}) rejected in simple-graph mode")]
    ParallelEdge(usize, usize),
    #[error("vertices {0} and {1} are not connected")]
    Disconnected(usize, usize),
    #[error("input is not a subgraph: {0}")]
    NotSubgraph(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for GraphError {
    fn from(e: std::io::Error) -> Self {
        GraphError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for GraphError {
    fn from(e: serde_json::Error) -> Self {
        GraphError::Parse(e.to_string())
    }
}
