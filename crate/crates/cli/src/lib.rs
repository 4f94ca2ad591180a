//! Configuration formats, result reports and command dispatch for the
//! `kakeya` binary.

// `!(x > 0.0)` is how NaN gets rejected along with non-positive input.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod error;
pub mod report;
pub mod schema;

pub use commands::{run, Command, Format, Options, Outcome, Status};
pub use error::CliError;
