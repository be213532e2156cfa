//! Versioned JSON model files.
//!
//! A file records the format version, the similarity and feature settings the
//! trees were trained with, the forest hyperparameters, and every tree.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::forest::{ForestModel, ForestParams};
use super::tree::TreeNode;
use super::ClassifierError;
use crate::features::{FeatureConfig, FEATURE_NAMES, SIMILARITY_NAME};

pub const FORMAT_VERSION: &str = "gitbot-model/1";

/// Text of the bundled model file.
pub const DEFAULT_MODEL: &str = include_str!("../../assets/default-model.json");

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDocument {
    format: String,
    similarity: String,
    feature_names: Vec<String>,
    feature_config: FeatureConfig,
    hyperparameters: ForestParams,
    seed: u64,
    trees: Vec<TreeNode>,
}

impl ForestModel {
    /// Pretty-printed document, newline terminated. Identical models give identical bytes.
    pub fn to_json(&self) -> String {
        let doc = ModelDocument {
            format: FORMAT_VERSION.to_string(),
            similarity: SIMILARITY_NAME.to_string(),
            feature_names: self.feature_names.clone(),
            feature_config: self.feature_config,
            hyperparameters: self.params,
            seed: self.seed,
            trees: self.trees.clone(),
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("model serialises");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, ClassifierError> {
        let unreadable = |msg: String| ClassifierError::UnreadableModel(msg);
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| unreadable(format!("not valid JSON: {e}")))?;
        match value.get("format").and_then(|f| f.as_str()) {
            Some(FORMAT_VERSION) => {}
            Some(other) => {
                return Err(unreadable(format!(
                    "format version {other:?} is not supported (expected {FORMAT_VERSION:?})"
                )))
            }
            None => {
                return Err(unreadable(format!(
                    "missing format version (expected {FORMAT_VERSION:?})"
                )))
            }
        }
        let doc: ModelDocument =
            serde_json::from_value(value).map_err(|e| unreadable(e.to_string()))?;

        if doc.similarity != SIMILARITY_NAME {
            return Err(unreadable(format!(
                "model uses similarity {:?}, this build computes {SIMILARITY_NAME:?}",
                doc.similarity
            )));
        }
        if doc.feature_names != FEATURE_NAMES {
            return Err(unreadable(format!(
                "unexpected feature names {:?}",
                doc.feature_names
            )));
        }
        doc.feature_config
            .validate()
            .map_err(|e| unreadable(e.to_string()))?;
        if doc.trees.len() != doc.hyperparameters.n_estimators {
            return Err(unreadable(format!(
                "{} trees stored but n_estimators is {}",
                doc.trees.len(),
                doc.hyperparameters.n_estimators
            )));
        }
        for (i, tree) in doc.trees.iter().enumerate() {
            tree.check(doc.hyperparameters.max_depth)
                .map_err(|e| unreadable(format!("tree {i}: {e}")))?;
        }
        Ok(ForestModel {
            params: doc.hyperparameters,
            seed: doc.seed,
            feature_names: doc.feature_names,
            feature_config: doc.feature_config,
            trees: doc.trees,
        })
    }
}

pub fn save_model(model: &ForestModel, path: &Path) -> Result<(), ClassifierError> {
    std::fs::write(path, model.to_json())?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<ForestModel, ClassifierError> {
    let text = std::fs::read_to_string(path)?;
    ForestModel::from_json(&text)
}

/// The model bundled with the library, trained on the generated reference corpus.
pub fn default_model() -> ForestModel {
    ForestModel::from_json(DEFAULT_MODEL).expect("bundled model is valid")
}
