//! Spanner oracle for graph metrics built from shortest-path separators.
//!
//! The building blocks are single-source spanners to a shortest path
//! ([`ss_spanner`]), path-to-path spanners ([`ptp_single`],
//! [`ptp_spanner`]) and the recursive [`ell_close_spanner`], which peels off
//! separator paths supplied by a [`SeparatorProvider`].

pub mod ell_close;
pub mod error;
pub mod oracle;
pub mod path;
pub mod provider;
pub mod ptp;
pub mod single_source;

pub use ell_close::{ell_close_spanner, EllCloseOptions, EllCloseOutput, EllCloseStats};
pub use error::SeparatorError;
pub use oracle::{terminal_demands, SeparatorOracle};
pub use path::{check_shortest, BasePath};
pub use provider::{CentroidProvider, SeparatorFamily, SeparatorProvider, SptCycleProvider};
pub use ptp::{ptp_single, ptp_spanner};
pub use single_source::{ss_spanner, walk_to_path_spanner, AnchoredPathSet, WalkSpanner};
