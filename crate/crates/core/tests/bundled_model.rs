use gitbot_core::classifier::{train_forest, ForestParams, DEFAULT_MODEL};
use gitbot_core::evaluation::{examples_from, stratified_split};
use gitbot_core::synthetic::{generate, SyntheticSpec};
use gitbot_core::{compute_features, default_model, FeatureConfig, MessageCorpus, Verdict};

const VARIED: [&str; 30] = [
    "Fix off-by-one in pagination",
    "Add dark mode toggle to settings page",
    "Refactor database connection pooling",
    "Merge branch 'feature/login'",
    "Update README with install steps",
    "Handle unicode filenames on Windows",
    "Remove deprecated API endpoints",
    "Speed up test suite by caching fixtures",
    "Document the plugin interface",
    "Fix crash when config file is missing",
    "Initial commit",
    "Bump version",
    "Rewrite parser using recursive descent",
    "Add CSV export for reports",
    "Correct typos in tutorial",
    "Guard against null session tokens",
    "Switch CI to GitHub Actions",
    "Improve error messages for invalid flags",
    "Tweak sidebar spacing",
    "Add benchmarks for the allocator",
    "Use a BTreeMap for deterministic output",
    "Drop support for Python 2",
    "Translate help text to German",
    "Fix flaky socket timeout test",
    "Make retries configurable",
    "Clean up unused imports",
    "Validate email addresses on signup",
    "Support YAML configuration files",
    "Log request durations",
    "Prepare release notes",
];

/// The bundled model is the default forest refitted on the training part of
/// the default synthetic corpus, exactly as `gitbot train --default-forest` does.
#[test]
fn bundled_model_is_reproducible() {
    let dataset = generate(&SyntheticSpec::default());
    let (train, _) = stratified_split(&dataset.entries, |e| e.label, 0.6, 42).unwrap();
    let config = FeatureConfig::default();
    let examples = examples_from(&train, &config);
    let model = train_forest(&examples, &ForestParams::default(), 42, config).unwrap();
    assert_eq!(model.to_json(), DEFAULT_MODEL);
}

#[test]
fn bundled_model_separates_obvious_cases() {
    let model = default_model();
    let config = model.feature_config;
    let bot = MessageCorpus::from_texts("bot", vec!["Update dependencies"; 50]);
    let human = MessageCorpus::from_texts("human", VARIED);
    let few = MessageCorpus::from_texts("few", vec!["hello"; 7]);
    assert_eq!(
        model.predict(&compute_features(&bot, &config)).verdict,
        Verdict::Bot
    );
    assert_eq!(
        model.predict(&compute_features(&human, &config)).verdict,
        Verdict::Human
    );
    assert_eq!(
        model.predict(&compute_features(&few, &config)).verdict,
        Verdict::Unknown
    );
}
