//! Pipelines behind the `crystgar` binary: JSON reports, golden tables, the
//! disk cache and the self-test suite.

pub mod cache;
pub mod checks;
pub mod commands;
pub mod golden;
