//! Trained-model wrapper and JSON persistence.
//!
//! Model files are self-describing: kind tag, feature layout version, the
//! column names the model was trained on, and the full parameters and
//! learned state (trees, or support vectors plus standardizer). JSON floats
//! round-trip exactly, so a loaded model predicts bit-identically.

use crate::forest::RandomForest;
use crate::svr::SvrModel;
use crate::{MlError, Result};
use serde::{Deserialize, Serialize};
use std::io::{BufReader, BufWriter};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelPayload {
    Rfr(RandomForest),
    Svr(SvrModel),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub layout_version: u32,
    /// Column names of the feature layout this model expects.
    pub feature_names: Vec<String>,
    #[serde(flatten)]
    pub payload: ModelPayload,
}

impl TrainedModel {
    pub fn kind(&self) -> &'static str {
        match self.payload {
            ModelPayload::Rfr(_) => "rfr",
            ModelPayload::Svr(_) => "svr",
        }
    }

    pub fn predict(&self, rows: &[Vec<f64>]) -> Result<Vec<f64>> {
        if let Some(row) = rows.first() {
            if !self.feature_names.is_empty() && row.len() != self.feature_names.len() {
                return Err(MlError::ModelMismatch(format!(
                    "model expects {} features, rows have {}",
                    self.feature_names.len(),
                    row.len()
                )));
            }
        }
        Ok(match &self.payload {
            ModelPayload::Rfr(f) => f.predict(rows),
            ModelPayload::Svr(s) => s.predict(rows),
        })
    }
}

pub fn save_model(model: &TrainedModel, path: &Path) -> Result<()> {
    let w = BufWriter::new(std::fs::File::create(path)?);
    serde_json::to_writer(w, model)?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<TrainedModel> {
    let r = BufReader::new(std::fs::File::open(path)?);
    Ok(serde_json::from_reader(r)?)
}
