//! The full training protocol: stratified split, grid search on the training
//! part, forest refit on the whole training part, scoring on the held-out part.

use rayon::prelude::*;

use super::dataset::{DatasetEntry, LabeledDataset};
use super::grid::{cross_validate, default_grid, GridSearchResult};
use super::metrics::EvaluationReport;
use super::split::stratified_split;
use super::{evaluate_pretrained, EvaluationError};
use crate::classifier::{
    train_forest, Family, ForestModel, ForestParams, LabeledExample, ModelSpec,
};
use crate::features::{compute_features, FeatureConfig, FeatureOutcome};

#[derive(Debug, Clone)]
pub struct TrainOptions {
    pub seed: u64,
    pub train_fraction: f64,
    pub folds: usize,
    pub grid: Vec<ModelSpec>,
    pub feature_config: FeatureConfig,
    /// Forest refitted after the search; `None` takes the best forest row of the grid.
    pub refit: Option<ForestParams>,
}

impl Default for TrainOptions {
    fn default() -> Self {
        Self {
            seed: 42,
            train_fraction: 0.6,
            folds: 5,
            grid: default_grid(),
            feature_config: FeatureConfig::default(),
            refit: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: ForestModel,
    pub grid: GridSearchResult,
    /// Score of `model` on the held-out part.
    pub report: EvaluationReport,
    pub train: Vec<DatasetEntry>,
    pub test: Vec<DatasetEntry>,
}

/// Feature vectors of every entry that has enough messages.
pub fn examples_from(entries: &[DatasetEntry], config: &FeatureConfig) -> Vec<LabeledExample> {
    entries
        .par_iter()
        .filter_map(|e| match compute_features(&e.corpus, config) {
            FeatureOutcome::Eligible(features) => Some(LabeledExample {
                features,
                label: e.label,
            }),
            FeatureOutcome::Insufficient { .. } => None,
        })
        .collect()
}

pub fn train_pipeline(
    dataset: &LabeledDataset,
    options: &TrainOptions,
) -> Result<TrainOutcome, EvaluationError> {
    options
        .feature_config
        .validate()
        .map_err(|e| EvaluationError::InvalidArgument(e.to_string()))?;
    let (train, test) = stratified_split(
        &dataset.entries,
        |e| e.label,
        options.train_fraction,
        options.seed,
    )?;
    let examples = examples_from(&train, &options.feature_config);
    let grid = cross_validate(&examples, &options.grid, options.folds, options.seed)?;

    let params = match (
        options.refit,
        grid.best(Family::RandomForest).map(|r| r.spec),
    ) {
        (Some(fixed), _) => fixed,
        (None, Some(ModelSpec::RandomForest(best))) => best,
        (None, _) => ForestParams::default(),
    };
    log::info!("refitting {}", ModelSpec::RandomForest(params));
    let model = train_forest(&examples, &params, options.seed, options.feature_config)?;
    let report = evaluate_pretrained(&model, &test)?;
    Ok(TrainOutcome {
        model,
        grid,
        report,
        train,
        test,
    })
}
