use std::fmt;

use serde::{Deserialize, Serialize};

use super::EvaluationError;
use crate::classifier::Label;

/// Binary confusion counts with Bot as the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub true_positives: usize,
    pub false_negatives: usize,
    pub false_positives: usize,
    pub true_negatives: usize,
}

impl ConfusionCounts {
    pub fn new(tp: usize, fn_: usize, fp: usize, tn: usize) -> Self {
        Self {
            true_positives: tp,
            false_negatives: fn_,
            false_positives: fp,
            true_negatives: tn,
        }
    }

    pub fn from_pairs(pairs: &[(Label, Label)]) -> Self {
        let mut counts = Self::default();
        for &(predicted, actual) in pairs {
            match (predicted, actual) {
                (Label::Bot, Label::Bot) => counts.true_positives += 1,
                (Label::Human, Label::Bot) => counts.false_negatives += 1,
                (Label::Bot, Label::Human) => counts.false_positives += 1,
                (Label::Human, Label::Human) => counts.true_negatives += 1,
            }
        }
        counts
    }

    pub fn total(&self) -> usize {
        self.true_positives + self.false_negatives + self.false_positives + self.true_negatives
    }

    pub fn bots(&self) -> usize {
        self.true_positives + self.false_negatives
    }

    pub fn humans(&self) -> usize {
        self.false_positives + self.true_negatives
    }

    /// Same counts with Human as the positive class.
    pub fn swapped(&self) -> Self {
        Self::new(
            self.true_negatives,
            self.false_positives,
            self.false_negatives,
            self.true_positives,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn f1_score(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

impl ClassMetrics {
    /// Metrics of the positive class of `counts`.
    fn positive(counts: &ConfusionCounts) -> Self {
        let precision = ratio(
            counts.true_positives,
            counts.true_positives + counts.false_positives,
        );
        let recall = ratio(counts.true_positives, counts.bots());
        Self {
            precision,
            recall,
            f1: f1_score(precision, recall),
            support: counts.bots(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub model: String,
    pub bot: ClassMetrics,
    pub human: ClassMetrics,
    /// Support-weighted average of the two class rows.
    pub weighted: ClassMetrics,
    pub confusion: ConfusionCounts,
    /// Examples that received no prediction and are not counted above.
    pub unknown: usize,
}

impl EvaluationReport {
    pub fn from_counts(counts: ConfusionCounts) -> Result<Self, EvaluationError> {
        let total = counts.total();
        if total == 0 {
            return Err(EvaluationError::EmptyInput);
        }
        let bot = ClassMetrics::positive(&counts);
        let human = ClassMetrics::positive(&counts.swapped());
        let w = |b: f64, h: f64| (bot.support as f64 * b + human.support as f64 * h) / total as f64;
        let weighted = ClassMetrics {
            precision: w(bot.precision, human.precision),
            recall: w(bot.recall, human.recall),
            f1: w(bot.f1, human.f1),
            support: total,
        };
        Ok(Self {
            model: String::new(),
            bot,
            human,
            weighted,
            confusion: counts,
            unknown: 0,
        })
    }

    pub fn with_model(mut self, model: impl Into<String>) -> Self {
        self.model = model.into();
        self
    }

    pub fn class(&self, label: Label) -> &ClassMetrics {
        match label {
            Label::Bot => &self.bot,
            Label::Human => &self.human,
        }
    }
}

/// Scores `(predicted, actual)` pairs.
pub fn compute_metrics(
    predictions: &[(Label, Label)],
) -> Result<EvaluationReport, EvaluationError> {
    EvaluationReport::from_counts(ConfusionCounts::from_pairs(predictions))
}

impl fmt::Display for EvaluationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.model.is_empty() {
            writeln!(f, "model: {}", self.model)?;
        }
        let c = &self.confusion;
        writeln!(
            f,
            "{:<14} {:>10} {:>10} {:>6} {:>6} {:>6} {:>8}",
            "", "as bot", "as human", "P", "R", "F1", "support"
        )?;
        let row =
            |f: &mut fmt::Formatter<'_>, name: &str, a: String, b: String, m: &ClassMetrics| {
                writeln!(
                    f,
                    "{:<14} {:>10} {:>10} {:>6.3} {:>6.3} {:>6.3} {:>8}",
                    name, a, b, m.precision, m.recall, m.f1, m.support
                )
            };
        row(
            f,
            "Bot",
            c.true_positives.to_string(),
            c.false_negatives.to_string(),
            &self.bot,
        )?;
        row(
            f,
            "Human",
            c.false_positives.to_string(),
            c.true_negatives.to_string(),
            &self.human,
        )?;
        row(
            f,
            "weighted avg",
            String::new(),
            String::new(),
            &self.weighted,
        )?;
        if self.unknown > 0 {
            writeln!(f, "unknown (not scored): {}", self.unknown)?;
        }
        Ok(())
    }
}
