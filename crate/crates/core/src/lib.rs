//! Detection of bot contributors in git repositories from the repetitiveness
//! of their commit messages.
//!
//! The pipeline is: [`extract`] commits with `git log`, group them per
//! contributor, merge names with an [`identity`] mapping, compute the four
//! [`features`], and classify with a random forest from [`classifier`].
//! [`evaluation`] holds the training and model-selection protocol.

pub mod classifier;
pub mod evaluation;
pub mod extract;
pub mod features;
pub mod identity;
pub mod synthetic;

pub use classifier::{
    default_model, load_model, save_model, ForestModel, Label, Prediction, Verdict,
};
pub use evaluation::{EvaluationReport, GridSearchResult, LabeledDataset};
pub use extract::{extract_commits, group_messages, ContributorRole, ExtractOptions, RawCommit};
pub use features::{compute_features, FeatureConfig, FeatureOutcome, FeatureVector, MessageCorpus};
pub use identity::{apply_mapping, load_mapping, IdentityMapping};
