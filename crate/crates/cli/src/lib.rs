//! Command-line front end: JSON configs in, rasters, measure CSVs and
//! JSON reports out.
//!
//! Exit codes: 2 malformed configuration, 3 inadmissible generators,
//! 4 numerical failure, 5 unwritable output.

pub mod config;
pub mod error;
pub mod export;
pub mod raster;
pub mod run;

pub use config::RunConfig;
pub use error::CliError;
pub use run::{run, run_config, Command};
