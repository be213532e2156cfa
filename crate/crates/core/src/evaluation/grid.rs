//! Grid-search cross-validation across classifier families.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{compute_metrics, EvaluationReport};
use super::split::stratified_folds;
use super::EvaluationError;
use crate::classifier::{
    Classifier, Criterion, Family, ForestParams, KnnWeighting, LabeledExample, ModelSpec,
};

/// Fold-averaged scores of one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CvScores {
    pub bot_precision: f64,
    pub bot_recall: f64,
    pub human_precision: f64,
    pub human_recall: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl CvScores {
    fn from_reports(reports: &[EvaluationReport]) -> Self {
        let n = reports.len() as f64;
        let mean = |f: fn(&EvaluationReport) -> f64| reports.iter().map(f).sum::<f64>() / n;
        Self {
            bot_precision: mean(|r| r.bot.precision),
            bot_recall: mean(|r| r.bot.recall),
            human_precision: mean(|r| r.human.precision),
            human_recall: mean(|r| r.human.recall),
            precision: mean(|r| r.weighted.precision),
            recall: mean(|r| r.weighted.recall),
            f1: mean(|r| r.weighted.f1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub family: Family,
    pub spec: ModelSpec,
    pub scores: CvScores,
}

impl GridRow {
    pub fn description(&self) -> String {
        self.spec.describe()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchResult {
    /// Best configuration per family, highest F1 first.
    pub rows: Vec<GridRow>,
    pub configurations_evaluated: usize,
    pub folds: usize,
}

impl GridSearchResult {
    pub fn best(&self, family: Family) -> Option<&GridRow> {
        self.rows.iter().find(|r| r.family == family)
    }
}

/// Higher F1, then higher precision, then the lexicographically smaller description.
fn rank(a: &GridRow, b: &GridRow) -> Ordering {
    b.scores
        .f1
        .total_cmp(&a.scores.f1)
        .then(b.scores.precision.total_cmp(&a.scores.precision))
        .then_with(|| a.description().cmp(&b.description()))
}

/// Scores every configuration by mean weighted F1 over `k` stratified folds and
/// keeps the best configuration of each family.
pub fn cross_validate(
    train: &[LabeledExample],
    grid: &[ModelSpec],
    k: usize,
    seed: u64,
) -> Result<GridSearchResult, EvaluationError> {
    if grid.is_empty() {
        return Err(EvaluationError::InvalidArgument("empty grid".into()));
    }
    let labels: Vec<_> = train.iter().map(|e| e.label).collect();
    let folds = stratified_folds(&labels, k, seed)?;
    let mut in_fold = vec![0usize; train.len()];
    for (f, fold) in folds.iter().enumerate() {
        for &i in fold {
            in_fold[i] = f;
        }
    }

    let scored: Vec<GridRow> = grid
        .par_iter()
        .map(|spec| {
            let mut reports = Vec::with_capacity(k);
            for (f, fold) in folds.iter().enumerate() {
                let fit_on: Vec<LabeledExample> = train
                    .iter()
                    .zip(&in_fold)
                    .filter(|(_, &g)| g != f)
                    .map(|(e, _)| *e)
                    .collect();
                let model = spec.fit(&fit_on, seed.wrapping_add(f as u64))?;
                let pairs: Vec<_> = fold
                    .iter()
                    .map(|&i| (model.predict_label(&train[i].features), train[i].label))
                    .collect();
                reports.push(compute_metrics(&pairs)?);
            }
            Ok(GridRow {
                family: spec.family(),
                spec: *spec,
                scores: CvScores::from_reports(&reports),
            })
        })
        .collect::<Result<_, EvaluationError>>()?;

    let mut rows: Vec<GridRow> = Vec::new();
    for row in scored {
        match rows.iter_mut().find(|r| r.family == row.family) {
            Some(best) if rank(&row, best) == Ordering::Less => *best = row,
            Some(_) => {}
            None => rows.push(row),
        }
    }
    rows.sort_by(rank);
    Ok(GridSearchResult {
        rows,
        configurations_evaluated: grid.len(),
        folds: k,
    })
}

/// The representative grid: 72 configurations over five families.
pub fn default_grid() -> Vec<ModelSpec> {
    let mut grid = Vec::new();
    for criterion in [Criterion::Entropy, Criterion::Gini] {
        for n_estimators in [10, 20, 50, 100] {
            for max_depth in [4, 8, 12] {
                grid.push(ModelSpec::RandomForest(ForestParams {
                    n_estimators,
                    max_depth,
                    criterion,
                    ..ForestParams::default()
                }));
            }
        }
    }
    for criterion in [Criterion::Entropy, Criterion::Gini] {
        for max_depth in 2..=10 {
            grid.push(ModelSpec::DecisionTree {
                max_depth,
                criterion,
            });
        }
    }
    for weighting in [KnnWeighting::Uniform, KnnWeighting::Distance] {
        for k in [1, 3, 5, 7, 9, 11, 15] {
            grid.push(ModelSpec::Knn { k, weighting });
        }
    }
    for l2 in [0.0, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0] {
        grid.push(ModelSpec::Logistic { l2 });
    }
    for l2 in [1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0] {
        grid.push(ModelSpec::LinearSvm { l2 });
    }
    grid
}

impl fmt::Display for GridSearchResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} configurations, {}-fold cross-validation",
            self.configurations_evaluated, self.folds
        )?;
        writeln!(
            f,
            "{:<24} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6} {:>6}  best configuration",
            "classifier family", "P(B)", "R(B)", "P(H)", "R(H)", "P", "R", "F1"
        )?;
        for row in &self.rows {
            let s = &row.scores;
            writeln!(
                f,
                "{:<24} {:>6.3} {:>6.3} {:>6.3} {:>6.3} {:>6.3} {:>6.3} {:>6.3}  {}",
                row.family.name(),
                s.bot_precision,
                s.bot_recall,
                s.human_precision,
                s.human_recall,
                s.precision,
                s.recall,
                s.f1,
                row.description()
            )?;
        }
        Ok(())
    }
}
