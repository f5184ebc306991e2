//! Campaign runner and report generator around the `emoa` library:
//! `run` executes an (algorithm × problem × seed) grid, `reference` produces
//! the per-problem indicator normalization file, `ecdf` and `diagnostics`
//! aggregate finished campaigns, and `scatter` draws operator child
//! distributions.

pub mod campaign;
pub mod config;
pub mod error;
pub mod reports;
pub mod scatter;
pub mod svg;

pub use campaign::{cmd_reference, cmd_run, read_reference};
pub use config::{load_campaign, Campaign, CliOverrides};
pub use error::CliError;
pub use reports::{cmd_diagnostics, cmd_ecdf};
pub use scatter::cmd_scatter;
