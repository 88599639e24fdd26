use thiserror::Error;

#[derive(Debug, Error)]
pub enum MlError {
    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// SVR optimizer hit its iteration cap before reaching the KKT
    /// tolerance; carries the violation it got stuck at.
    #[error("svr did not converge after {iterations} iterations (KKT violation {violation:.3e}, tolerance {tolerance:.1e})")]
    NotConverged {
        violation: f64,
        tolerance: f64,
        iterations: usize,
    },

    #[error("degenerate folds: {rows} rows cannot form {k} folds")]
    DegenerateFolds { rows: usize, k: usize },

    #[error("model file does not match: {0}")]
    ModelMismatch(String),

    #[error("standardizer: {0}")]
    Core(#[from] magic_core::CoreError),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
