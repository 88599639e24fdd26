//! Regression models for magic estimation: a from-scratch random forest
//! (CART with variance-reduction splits, bootstrap aggregation) and an
//! ε-insensitive support vector regressor (pairwise dual optimization with
//! maximal-violating-pair working sets), plus k-fold grid-search
//! cross-validation and JSON model persistence.
//!
//! Every fit is a deterministic function of its inputs and seed: tree
//! bootstraps and feature subsets derive per-tree child seeds, the SVR
//! solver is single-threaded with a fixed scan order, and fold partitions
//! come from a seeded shuffle. Parallelism never changes results.

pub mod cv;
pub mod forest;
pub mod kernel;
pub mod metrics;
pub mod model;
pub mod svr;
pub mod tree;

mod error;

pub use error::MlError;

pub type Result<T> = std::result::Result<T, MlError>;
