//! Command implementations behind the `charvar` binary.
//!
//! Every command returns a [`Report`]; the binary only parses flags, prints,
//! and maps errors to exit codes.

pub mod commands;
pub mod corpus;
pub mod error;
pub mod report;

pub use commands::*;
pub use error::CliError;
pub use report::{Payload, Report, SCHEMA_VERSION};
