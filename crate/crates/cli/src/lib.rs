//! Sweep driver, figure presets and SI conversion for the `spinpump` CLI.

pub mod config;
pub mod output;
pub mod presets;
pub mod si;
pub mod sweep;

pub use config::{ConfigError, RunConfig};
pub use sweep::{run, Row, SweepResult};
