//! Library side of the batch front end: config parsing and the command
//! implementations, kept out of `main` so integration tests can drive them
//! directly.

pub mod commands;
pub mod config;
