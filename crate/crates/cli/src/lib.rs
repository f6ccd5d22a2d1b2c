//! Command-line front end: JSON documents, reports and the `toricstack`
//! subcommands.

pub mod cli;
pub mod commands;
pub mod doc;
pub mod error;
pub mod json_int;
pub mod report;

pub use cli::{run, Invocation};
pub use doc::{MorphismDocument, StackyDataDocument, SCHEMA_VERSION};
