//! Command-line front end for `brieskorn-core`: spec files in, text or json
//! reports out.

pub mod commands;
pub mod report;
pub mod spec;

use thiserror::Error;

pub use commands::{run, Command, RunOptions};
pub use report::Report;
pub use spec::{Overrides, Problem, ProblemSpec};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
        }
    }
}
