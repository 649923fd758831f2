//! Saved model: the fitted classifier plus the standardization it was
//! trained under, as versioned JSON.

use std::path::Path;

use acsmote::models::FOREST_FORMAT_VERSION;
use acsmote::{
    standardize_apply, Dataset, Error, Feature, Forest, LinearSvmModel, Result, ScoreMatrix, StandardizationParams,
};
use serde::{Deserialize, Serialize};

pub const MODEL_FILE_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classifier {
    Forest(Forest),
    LinearSvm(LinearSvmModel),
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub features: Vec<Feature>,
    pub label: String,
    pub class_names: Vec<String>,
    /// `StandardizationParams::to_text` of the training data.
    pub standardization: String,
    pub model: Classifier,
}

impl ModelFile {
    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string(self).map_err(|e| Error::Model(e.to_string()))?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let m: ModelFile = serde_json::from_str(&text).map_err(|e| Error::Model(e.to_string()))?;
        if m.format_version != MODEL_FILE_VERSION {
            return Err(Error::Model(format!(
                "unsupported model file version {} (expected {MODEL_FILE_VERSION})",
                m.format_version
            )));
        }
        if let Classifier::Forest(f) = &m.model {
            if f.format_version != FOREST_FORMAT_VERSION {
                return Err(Error::Model(format!("unsupported forest format version {}", f.format_version)));
            }
        }
        Ok(m)
    }

    /// Standardizes `raw` as at training time and scores it.
    pub fn score(&self, raw: &Dataset) -> Result<ScoreMatrix> {
        let params = StandardizationParams::from_text(&self.standardization, raw)?;
        let data = standardize_apply(raw, &params)?;
        match &self.model {
            Classifier::Forest(f) => f.predict_scores(&data),
            Classifier::LinearSvm(s) => s.predict_scores(&data),
        }
    }
}
