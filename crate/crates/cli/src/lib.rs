//! Verification harness: loads a [`RunConfig`], runs the selected suites of
//! identity checks against the `reducible-car` library and assembles a
//! [`Report`] that serializes deterministically.

pub mod checks;
pub mod config;
pub mod report;
pub mod suites;

pub use config::RunConfig;
pub use report::{emit, Format, Record, Report};
pub use suites::run;
