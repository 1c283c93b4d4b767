use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VERIFY_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const INPUT: i32 = 3;
    pub const ALGORITHM: i32 = 4;
    pub const IO: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("bad input: {0}")]
    Input(String),
    #[error("{0}")]
    Algorithm(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Input(_) => exit::INPUT,
            CliError::Algorithm(_) => exit::ALGORITHM,
            CliError::Io(_) => exit::IO,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<graph_core::GraphError> for CliError {
    fn from(e: graph_core::GraphError) -> Self {
        match e {
            graph_core::GraphError::Io(m) => CliError::Io(m),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<metric_oracles::OracleError> for CliError {
    fn from(e: metric_oracles::OracleError) -> Self {
        match e {
            metric_oracles::OracleError::InvalidQuery(_) | metric_oracles::OracleError::InvalidPoints(_) => {
                CliError::Input(e.to_string())
            }
            other => CliError::Algorithm(other.to_string()),
        }
    }
}

impl From<subset_spanner::SubsetError> for CliError {
    fn from(e: subset_spanner::SubsetError) -> Self {
        match e {
            subset_spanner::SubsetError::Input(_) => CliError::Input(e.to_string()),
            other => CliError::Algorithm(other.to_string()),
        }
    }
}

impl From<treewidth_dp::TdError> for CliError {
    fn from(e: treewidth_dp::TdError) -> Self {
        use treewidth_dp::TdError::*;
        match e {
            Input(_) | Axiom { .. } | Parse { .. } => CliError::Input(e.to_string()),
            other => CliError::Algorithm(other.to_string()),
        }
    }
}

impl From<ptas_pipeline::PtasError> for CliError {
    fn from(e: ptas_pipeline::PtasError) -> Self {
        match e {
            ptas_pipeline::PtasError::Input(_) => CliError::Input(e.to_string()),
            other => CliError::Algorithm(other.to_string()),
        }
    }
}
