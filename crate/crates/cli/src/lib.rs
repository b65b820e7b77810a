//! File formats, Monte Carlo harnesses and reports behind the `bellforge` binary.

pub mod error;
pub mod format;
pub mod params;
pub mod report;
pub mod sample;
pub mod sweep;

pub use error::{CliError, CliResult};
pub use format::{State, StateFile};
pub use sweep::SweepSpec;
