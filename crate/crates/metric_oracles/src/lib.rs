//! Spanner oracles.
//!
//! An oracle answers a query `(T, ℓ, ε)` with a subgraph on `T` that keeps
//! every pair at distance in `[ℓ/8, ℓ]` within a factor `1 + ε` and retains
//! no edge longer than `2ℓ`.

pub mod doubling;
pub mod error;
pub mod euclidean;
pub mod minor;
pub mod net;
pub mod oracle;
pub mod points;

pub use doubling::{CorrelationOracle, DoublingOracle};
pub use error::OracleError;
pub use euclidean::EuclideanOracle;
pub use minor::{IdentityProvider, Minor, MinorOracle, MinorProvider, TreeMinorProvider};
pub use net::r_net;
pub use oracle::{check_window, measure_sparsity, OracleQuery, OracleStats, SparsityReport, SpannerOracle, WindowReport};
pub use points::PointSet;
