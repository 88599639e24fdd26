//! Experiment orchestration: dataset splits, interpolation and
//! extrapolation runs, runtime scaling analysis, and report emission
//! (JSON, CSV tables, static SVG charts).

pub mod experiment;
pub mod report;
pub mod runtime;
pub mod specfile;
pub mod split;
pub mod svg;

mod error;

pub use error::HarnessError;

pub type Result<T> = std::result::Result<T, HarnessError>;
