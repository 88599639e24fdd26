//! Core pipeline for studying nonstabilizerness ("magic") of quantum circuits:
//! seeded circuit generation, dense statevector simulation, exact stabilizer
//! Rényi entropy labeling, classical-shadow estimation, and feature encodings
//! for downstream regression models.
//!
//! Conventions used throughout the workspace:
//! - Rotation gates follow the half-angle convention, e.g. `RX(θ) = exp(-iθX/2)`.
//! - Qubit 0 is the leftmost tensor factor; basis bitstrings are written
//!   qubit 0 first, so qubit 0 maps to the most significant bit of a state
//!   index.
//! - All randomness flows from explicit 64-bit seeds via the documented
//!   seed-derivation mix in [`rng`]; nothing reads the system clock.

pub mod circuit;
pub mod codec;
pub mod features;
pub mod generators;
pub mod pauli;
pub mod rng;
pub mod shadows;
pub mod sim;
pub mod sre;

#[cfg(any(test, feature = "testkit"))]
pub mod testkit;

mod error;

pub use error::CoreError;

/// Convenience alias used by every fallible operation in this crate.
pub type Result<T> = std::result::Result<T, CoreError>;
