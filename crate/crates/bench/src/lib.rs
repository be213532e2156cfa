//! Shared inputs for the criterion benchmarks.

use gitbot_core::classifier::LabeledExample;
use gitbot_core::evaluation::examples_from;
use gitbot_core::synthetic::{generate, SyntheticSpec};
use gitbot_core::{FeatureConfig, LabeledDataset};

pub fn corpus(n_per_class: usize) -> LabeledDataset {
    generate(&SyntheticSpec {
        n_bots: n_per_class,
        n_humans: n_per_class,
        ..SyntheticSpec::default()
    })
}

pub fn examples(n_per_class: usize) -> Vec<LabeledExample> {
    examples_from(&corpus(n_per_class).entries, &FeatureConfig::default())
}
