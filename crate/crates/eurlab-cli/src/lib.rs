//! Library surface of the CLI: the run configuration (with its metadata
//! round-trip) and the subcommand implementations, kept separate from the
//! binary so integration tests can drive them directly.

pub mod commands;
pub mod config;
