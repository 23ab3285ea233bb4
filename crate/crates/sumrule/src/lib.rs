//! Command-line front-end for `sumrule-core`: run configurations, input
//! files, and JSON/CSV reports.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod inputs;
pub mod report;

pub use commands::{execute, Outcome};
pub use config::RunConfig;
pub use error::{CliError, Result};
