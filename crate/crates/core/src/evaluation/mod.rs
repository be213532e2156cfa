//! Datasets, train/test protocol, model selection and scoring.

mod dataset;
mod grid;
mod metrics;
mod pipeline;
mod split;

use thiserror::Error;

use crate::classifier::{Classifier, ClassifierError, ForestModel, Label};
use crate::features::{compute_features, FeatureConfig, FeatureOutcome};

pub use dataset::{
    convert_archive, load_dataset, parse_label, read_dataset, DatasetEntry, LabeledDataset,
    DATASET_HEADER,
};
pub use grid::{cross_validate, default_grid, CvScores, GridRow, GridSearchResult};
pub use metrics::{compute_metrics, f1_score, ClassMetrics, ConfusionCounts, EvaluationReport};
pub use pipeline::{examples_from, train_pipeline, TrainOptions, TrainOutcome};
pub use split::{stratified_folds, stratified_split, stratified_split_indices};

#[derive(Debug, Error)]
pub enum EvaluationError {
    #[error("no predictions to score")]
    EmptyInput,
    #[error("data must contain both bots and humans")]
    SingleClassData,
    #[error("malformed dataset at line {line}: {detail}")]
    MalformedDataset { line: u64, detail: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Classifier(ClassifierError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<ClassifierError> for EvaluationError {
    fn from(e: ClassifierError) -> Self {
        match e {
            ClassifierError::SingleClassData => EvaluationError::SingleClassData,
            other => EvaluationError::Classifier(other),
        }
    }
}

/// Scores `classifier` on `test`. Entries whose corpus is too small for
/// `config` are counted in [`EvaluationReport::unknown`] and not scored.
pub fn evaluate_with<C: Classifier + ?Sized>(
    classifier: &C,
    config: &FeatureConfig,
    test: &[DatasetEntry],
) -> Result<EvaluationReport, EvaluationError> {
    let mut pairs = Vec::with_capacity(test.len());
    let mut unknown = 0;
    for entry in test {
        match compute_features(&entry.corpus, config) {
            FeatureOutcome::Eligible(v) => pairs.push((classifier.predict_label(&v), entry.label)),
            FeatureOutcome::Insufficient { .. } => unknown += 1,
        }
    }
    let mut report = compute_metrics(&pairs)?;
    report.unknown = unknown;
    Ok(report)
}

/// Applies a trained forest, with its own feature settings, to labeled data.
pub fn evaluate_pretrained(
    model: &ForestModel,
    test: &[DatasetEntry],
) -> Result<EvaluationReport, EvaluationError> {
    Ok(evaluate_with(model, &model.feature_config, test)?.with_model(model.describe()))
}

/// Always answers the same class; a reference point for reports.
#[derive(Debug, Clone, Copy)]
pub struct ConstantClassifier(pub Label);

impl Classifier for ConstantClassifier {
    fn predict_label(&self, _: &crate::features::FeatureVector) -> Label {
        self.0
    }
}
