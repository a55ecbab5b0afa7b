//! Command-line front end for `expsum-core`: input documents, machine
//! records and the reproduction harness for g.

pub mod app;
pub mod commands;
pub mod error;
pub mod fixture;
pub mod input;
pub mod lfunction;
pub mod record;
pub mod verify;

pub use commands::Report;
pub use error::{CliError, EXIT_INPUT, EXIT_OK, EXIT_VERIFICATION};
