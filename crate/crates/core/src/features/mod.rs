//! The four per-contributor inputs of the classifier.
//!
//! A contributor's most recent messages are normalised, empty ones are counted
//! aside, and the rest are grouped into patterns of near-identical messages.
//! Bots tend to produce few, very unequal patterns; humans produce many.

mod clustering;
mod gini;
mod similarity;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use clustering::{cluster_patterns, PatternAssignment};
pub use gini::gini_coefficient;
pub use similarity::{
    compound_similarity, edit_distance, is_empty, jaccard_similarity, levenshtein_similarity,
    message_distance, normalize_message,
};

/// Human-readable name of the similarity, recorded in model files.
pub const SIMILARITY_NAME: &str = "mean(token-jaccard, normalized-levenshtein)";

pub const FEATURE_NAMES: [&str; 4] = ["n_messages", "n_empty", "n_patterns", "gini"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusMessage {
    /// Missing for corpora loaded from datasets, where file order is recency order.
    pub timestamp: Option<DateTime<Utc>>,
    pub text: String,
}

/// Messages of one contributor in one repository, most recent first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MessageCorpus {
    pub contributor: String,
    pub messages: Vec<CorpusMessage>,
}

impl MessageCorpus {
    pub fn new(contributor: impl Into<String>) -> Self {
        Self {
            contributor: contributor.into(),
            messages: Vec::new(),
        }
    }

    /// Builds an untimed corpus whose order is taken as recency order.
    pub fn from_texts<I, S>(contributor: impl Into<String>, texts: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            contributor: contributor.into(),
            messages: texts
                .into_iter()
                .map(|t| CorpusMessage {
                    timestamp: None,
                    text: t.into(),
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    pub fn texts(&self) -> impl Iterator<Item = &str> {
        self.messages.iter().map(|m| m.text.as_str())
    }

    /// Stable sort on timestamp, newest first; untimed messages keep their
    /// relative order after all timed ones.
    pub fn sort_most_recent_first(&mut self) {
        self.messages
            .sort_by(|a, b| match (a.timestamp, b.timestamp) {
                (Some(x), Some(y)) => y.cmp(&x),
                (Some(_), None) => std::cmp::Ordering::Less,
                (None, Some(_)) => std::cmp::Ordering::Greater,
                (None, None) => std::cmp::Ordering::Equal,
            });
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum FeatureConfigError {
    #[error("minimum message count must be positive")]
    ZeroMinimum,
    #[error("minimum message count {min} exceeds maximum {max}")]
    MinAboveMax { min: usize, max: usize },
    #[error("pattern distance threshold {0} is outside [0, 1]")]
    ThresholdOutOfRange(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub min_messages: usize,
    pub max_messages: usize,
    pub pattern_distance_threshold: f64,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            min_messages: 10,
            max_messages: 100,
            pattern_distance_threshold: 0.5,
        }
    }
}

impl FeatureConfig {
    pub fn validate(&self) -> Result<(), FeatureConfigError> {
        if self.min_messages == 0 {
            return Err(FeatureConfigError::ZeroMinimum);
        }
        if self.min_messages > self.max_messages {
            return Err(FeatureConfigError::MinAboveMax {
                min: self.min_messages,
                max: self.max_messages,
            });
        }
        if !(0.0..=1.0).contains(&self.pattern_distance_threshold) {
            return Err(FeatureConfigError::ThresholdOutOfRange(
                self.pattern_distance_threshold,
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub n_messages: usize,
    pub n_empty: usize,
    pub n_patterns: usize,
    pub gini: f64,
}

impl FeatureVector {
    pub fn new(n_messages: usize, n_empty: usize, n_patterns: usize, gini: f64) -> Self {
        Self {
            n_messages,
            n_empty,
            n_patterns,
            gini,
        }
    }

    /// Values in [`FEATURE_NAMES`] order.
    pub fn to_array(&self) -> [f64; 4] {
        [
            self.n_messages as f64,
            self.n_empty as f64,
            self.n_patterns as f64,
            self.gini,
        ]
    }
}

/// Result of feature extraction: too few messages yields no vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeatureOutcome {
    Eligible(FeatureVector),
    Insufficient { available: usize },
}

impl FeatureOutcome {
    pub fn vector(&self) -> Option<&FeatureVector> {
        match self {
            FeatureOutcome::Eligible(v) => Some(v),
            FeatureOutcome::Insufficient { .. } => None,
        }
    }
}

pub fn compute_features(corpus: &MessageCorpus, config: &FeatureConfig) -> FeatureOutcome {
    compute_features_from_texts(corpus.texts(), config)
}

/// Same as [`compute_features`] for any most-recent-first sequence of messages.
pub fn compute_features_from_texts<'a, I>(texts: I, config: &FeatureConfig) -> FeatureOutcome
where
    I: IntoIterator<Item = &'a str>,
{
    let selected: Vec<&str> = texts.into_iter().take(config.max_messages).collect();
    let available = selected.len();
    if available < config.min_messages {
        return FeatureOutcome::Insufficient { available };
    }

    let normalized: Vec<String> = selected.iter().map(|m| normalize_message(m)).collect();
    let non_empty: Vec<&str> = normalized
        .iter()
        .map(String::as_str)
        .filter(|m| !m.is_empty())
        .collect();
    let n_empty = available - non_empty.len();

    let (n_patterns, gini) = if non_empty.is_empty() {
        (0, 0.0)
    } else {
        let patterns = cluster_patterns(&non_empty, config.pattern_distance_threshold);
        (patterns.n_patterns(), gini_coefficient(&patterns.sizes))
    };

    FeatureOutcome::Eligible(FeatureVector {
        n_messages: available,
        n_empty,
        n_patterns,
        gini,
    })
}
