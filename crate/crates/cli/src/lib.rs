//! Command-line harness for the `jordan-kepler` library.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod suites;
