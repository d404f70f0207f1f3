//! Library side of the `gtrs` binary: run configuration, command execution,
//! and report serialization.

pub mod config;
pub mod report;
pub mod run;

pub use config::{FileConfig, Grid, RunConfig, Suite, Task};
pub use report::{Report, ResultRow, Summary, Verdict};
pub use run::{execute, CliError};
