use thiserror::Error;

/// Errors produced by circuit construction, simulation, and feature extraction.
#[derive(Debug, Error)]
pub enum CoreError {
    /// A gate violates a structural invariant. Carries the index of the first
    /// offending gate and the reason.
    #[error("invalid gate at index {index}: {reason}")]
    InvalidGate { index: usize, reason: String },

    /// Circuit width outside the configured validation policy.
    #[error("circuit has {n} qubits, outside allowed range [{min}, {max}]")]
    QubitRange { n: usize, min: usize, max: usize },

    #[error("malformed circuit line: {0}")]
    Malformed(String),

    #[error("unsupported schema version {found} (expected {expected})")]
    SchemaVersion { found: u64, expected: u64 },

    /// Simulation refused: the statevector would exceed the memory cap.
    #[error("{n} qubits exceeds the configured simulation cap of {cap}")]
    MemoryCap { n: usize, cap: usize },

    #[error("dimension mismatch: state has {state_qubits} qubits, operand has {operand_qubits}")]
    DimensionMismatch {
        state_qubits: usize,
        operand_qubits: usize,
    },

    /// The identity Pauli string is rejected where a non-trivial observable
    /// is required (its expectation is 1 by definition).
    #[error("identity Pauli string is not a valid observable here")]
    IdentityObservable,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Mixing qubit counts in one feature matrix requires the padded layout.
    #[error("dataset mixes qubit counts {0:?}; enable padding for a stable layout")]
    MixedQubitCounts(Vec<usize>),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
