//! Command-line front end: scenario configs, runners and output formats.

pub mod config;
pub mod error;
pub mod experiment;
pub mod io;
pub mod report;
pub mod scenarios;
pub mod svg;
