//! Library surface behind the `pfode` binary: config parsing, run
//! orchestration, and the CSV/SVG emitters.

pub mod config;
pub mod csv_out;
pub mod error;
pub mod runner;
pub mod svg;

pub use config::{load_plan, parse_config, validate, RunConfig, RunPlan};
pub use error::CliError;
pub use runner::{run, RunManifest};
