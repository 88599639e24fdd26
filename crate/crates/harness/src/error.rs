use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("insufficient rows: {have} (need at least {need})")]
    InsufficientRows { have: usize, need: usize },

    #[error("split `{rule}` selected no {side} rows")]
    EmptySplit { rule: String, side: String },

    #[error("experiment spec: {0}")]
    Spec(String),

    #[error(transparent)]
    Core(#[from] magic_core::CoreError),

    #[error(transparent)]
    Ml(#[from] magic_ml::MlError),

    #[error("toml: {0}")]
    Toml(#[from] toml::de::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
