//! Command suites behind the `phasespace` binary.
//!
//! Each suite turns a [`RunConfig`] into a [`Report`] of named checks, plus
//! optional data artifacts. Everything is seeded, single-threaded and
//! written with fixed formatting, so identical configs give byte-identical
//! files.

pub mod config;
pub mod report;
pub mod suites;

pub use config::{ConfigError, RunConfig};
pub use report::{Report, ReportRecord, Rule};
