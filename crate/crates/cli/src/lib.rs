//! Command-line front end: argument parsing, per-repository analysis and
//! result formatting. `main.rs` only wires these to the process.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use gitbot_core::classifier::{ForestParams, Verdict};
use gitbot_core::evaluation::{
    convert_archive, default_grid, evaluate_pretrained, read_dataset, stratified_split,
    TrainOptions, TrainOutcome,
};
use gitbot_core::synthetic::{generate, SyntheticSpec};
use gitbot_core::{
    apply_mapping, compute_features, default_model, extract_commits, group_messages, load_mapping,
    load_model, ContributorRole, EvaluationReport, ExtractOptions, FeatureConfig, FeatureOutcome,
    ForestModel, IdentityMapping, LabeledDataset,
};

pub const SUBCOMMANDS: [&str; 4] = ["analyze", "train", "evaluate", "synthesize"];

#[derive(Debug, Parser)]
#[command(
    name = "gitbot",
    version,
    about = "Detect bots among the contributors of git repositories from their commit messages"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the contributors of one or more repositories (the default).
    Analyze(AnalyzeArgs),
    /// Run model selection on a labeled dataset and save the retained forest.
    Train(TrainArgs),
    /// Score a model on a labeled dataset.
    Evaluate(EvaluateArgs),
    /// Write a generated labeled dataset.
    Synthesize(SynthesizeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    /// Only consider these contributor names.
    #[arg(long, value_name = "NAME", num_args = 0..)]
    pub include: Option<Vec<String>>,
    /// Ignore commits before this date (YYYY-MM-DD).
    #[arg(long, value_name = "START_DATE", value_parser = parse_date)]
    pub start_date: Option<NaiveDate>,
    /// CSV file mapping names to identities; map a name to IGNORE to drop it.
    #[arg(long, value_name = "MAPPING")]
    pub mapping: Option<PathBuf>,
    /// Include all computed features in the output.
    #[arg(long)]
    pub verbose: bool,
    /// Minimum number of commits required to make a prediction.
    #[arg(long, value_name = "MIN_COMMITS", default_value_t = 10)]
    pub min_commits: usize,
    /// Use committer names instead of author names.
    #[arg(long)]
    pub committer: bool,
    /// Number of most recent commits used to compute features.
    #[arg(long, value_name = "MAX_COMMITS", default_value_t = 100)]
    pub max_commits: usize,
    /// Aligned text output (default).
    #[arg(long, group = "format")]
    pub text: bool,
    /// CSV output.
    #[arg(long, group = "format")]
    pub csv: bool,
    /// JSON output.
    #[arg(long, group = "format")]
    pub json: bool,
    /// Omit contributors predicted as Unknown.
    #[arg(long)]
    pub only_predicted: bool,
    /// Model file to use instead of the bundled model.
    #[arg(long, value_name = "PATH")]
    pub model: Option<PathBuf>,
    /// Skip merge commits.
    #[arg(long)]
    pub no_merges: bool,
    /// Repositories analysed in parallel.
    #[arg(long, value_name = "N", default_value_t = 1)]
    pub jobs: usize,
    /// Paths of local git repositories.
    #[arg(value_name = "REPOSITORY", required = true)]
    pub repositories: Vec<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DatasetArgs {
    /// Labeled dataset (contributor_id,repository_id,label,message).
    #[arg(value_name = "DATASET")]
    pub dataset: PathBuf,
    /// Read DATASET as a headed archive with named columns and convert it first.
    #[arg(long)]
    pub archive: bool,
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub input: DatasetArgs,
    /// Where to write the trained model.
    #[arg(long, short, value_name = "PATH")]
    pub output: PathBuf,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    #[arg(long, default_value_t = 0.6)]
    pub train_fraction: f64,
    #[arg(long, default_value_t = 10)]
    pub min_commits: usize,
    #[arg(long, default_value_t = 100)]
    pub max_commits: usize,
    /// Refit the entropy forest with 20 trees of depth 8 instead of the best forest found.
    #[arg(long)]
    pub default_forest: bool,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub input: DatasetArgs,
    /// Model file to use instead of the bundled model.
    #[arg(long, value_name = "PATH")]
    pub model: Option<PathBuf>,
    /// Score only the held-out part of the split `train` makes with this seed.
    #[arg(long, value_name = "SEED")]
    pub holdout_seed: Option<u64>,
    #[arg(long, default_value_t = 0.6, requires = "holdout_seed")]
    pub train_fraction: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SynthesizeArgs {
    #[arg(long, default_value_t = 200)]
    pub bots: usize,
    #[arg(long, default_value_t = 200)]
    pub humans: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, short, value_name = "PATH")]
    pub output: PathBuf,
}

fn parse_date(s: &str) -> Result<NaiveDate, String> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d").map_err(|e| format!("expected YYYY-MM-DD: {e}"))
}

/// Inserts `analyze` when the first argument is not a subcommand, so that
/// `gitbot REPO...` keeps working.
pub fn with_default_subcommand<I, T>(args: I) -> Vec<OsString>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let mut args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let first = args.get(1).and_then(|a| a.to_str()).unwrap_or("");
    let explicit = SUBCOMMANDS.contains(&first)
        || matches!(first, "help" | "-h" | "--help" | "-V" | "--version");
    if args.len() > 1 && !explicit {
        args.insert(1, "analyze".into());
    }
    args
}

impl AnalyzeArgs {
    pub fn format(&self) -> OutputFormat {
        if self.csv {
            OutputFormat::Csv
        } else if self.json {
            OutputFormat::Json
        } else {
            OutputFormat::Text
        }
    }

    pub fn role(&self) -> ContributorRole {
        if self.committer {
            ContributorRole::Committer
        } else {
            ContributorRole::Author
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.min_commits == 0 {
            return Err("--min-commits must be at least 1".into());
        }
        if self.min_commits > self.max_commits {
            return Err(format!(
                "--min-commits ({}) must not exceed --max-commits ({})",
                self.min_commits, self.max_commits
            ));
        }
        if self.jobs == 0 {
            return Err("--jobs must be at least 1".into());
        }
        Ok(())
    }
}

/// One output line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repository: Option<String>,
    pub name: String,
    /// Commits attributed to the contributor.
    pub commits: usize,
    pub patterns: Option<usize>,
    /// Gini coefficient of pattern sizes.
    pub dispersion: Option<f64>,
    pub prediction: Verdict,
    #[serde(skip)]
    pub features: Option<gitbot_core::FeatureVector>,
    #[serde(skip)]
    pub confidence: f64,
}

/// Analysis of every repository; failures are collected, not fatal.
#[derive(Debug, Default)]
pub struct AnalysisOutcome {
    pub rows: Vec<ResultRow>,
    pub errors: Vec<(PathBuf, anyhow::Error)>,
}

impl AnalysisOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.errors.is_empty() {
            0
        } else {
            2
        }
    }
}

pub fn resolve_model(path: Option<&Path>) -> Result<ForestModel> {
    match path {
        Some(p) => load_model(p).with_context(|| format!("loading model {}", p.display())),
        None => Ok(default_model()),
    }
}

fn analyze_repository(
    repo: &Path,
    args: &AnalyzeArgs,
    mapping: &IdentityMapping,
    model: &ForestModel,
    config: &FeatureConfig,
) -> Result<Vec<ResultRow>> {
    let options = ExtractOptions {
        role: args.role(),
        start_date: args.start_date,
        exclude_merges: args.no_merges,
        git_program: None,
    };
    let commits = extract_commits(repo, &options)?;
    let mut groups = group_messages(&commits, options.role);
    if let Some(include) = &args.include {
        groups.retain(|name, _| include.iter().any(|n| n == name));
    }
    let groups = apply_mapping(groups, mapping);

    let repository = repo.display().to_string();
    let rows = groups
        .into_values()
        .map(|corpus| {
            let outcome = compute_features(&corpus, config);
            let prediction = model.predict(&outcome);
            let features = match outcome {
                FeatureOutcome::Eligible(v) => Some(v),
                FeatureOutcome::Insufficient { .. } => None,
            };
            ResultRow {
                repository: Some(repository.clone()),
                name: corpus.contributor,
                commits: corpus.messages.len(),
                patterns: features.map(|v| v.n_patterns),
                dispersion: features.map(|v| v.gini),
                prediction: prediction.verdict,
                features,
                confidence: prediction.confidence,
            }
        })
        .collect();
    Ok(rows)
}

/// Extract, merge identities, compute features and predict for every repository.
///
/// Rows are sorted by name, then repository. The repository is only kept on
/// rows when more than one repository was analysed.
pub fn run_analysis(args: &AnalyzeArgs, model: &ForestModel) -> Result<AnalysisOutcome> {
    args.validate().map_err(anyhow::Error::msg)?;
    let mapping = match &args.mapping {
        Some(path) => {
            load_mapping(path).with_context(|| format!("reading mapping {}", path.display()))?
        }
        None => IdentityMapping::new(),
    };
    let config = FeatureConfig {
        min_messages: args.min_commits,
        max_messages: args.max_commits,
        ..model.feature_config
    };

    let analyse = |repo: &PathBuf| {
        analyze_repository(repo, args, &mapping, model, &config)
            .with_context(|| format!("analysing {}", repo.display()))
    };
    let results: Vec<Result<Vec<ResultRow>>> = if args.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(args.jobs)
            .build()
            .context("starting worker threads")?;
        pool.install(|| args.repositories.par_iter().map(analyse).collect())
    } else {
        args.repositories.iter().map(analyse).collect()
    };

    let mut outcome = AnalysisOutcome::default();
    for (repo, result) in args.repositories.iter().zip(results) {
        match result {
            Ok(rows) => outcome.rows.extend(rows),
            Err(e) => outcome.errors.push((repo.clone(), e)),
        }
    }
    if args.repositories.len() < 2 {
        for row in &mut outcome.rows {
            row.repository = None;
        }
    }
    if args.only_predicted {
        outcome.rows.retain(|r| r.prediction != Verdict::Unknown);
    }
    outcome.rows.sort_by(|a, b| {
        a.name
            .cmp(&b.name)
            .then_with(|| a.repository.cmp(&b.repository))
    });
    Ok(outcome)
}

fn dispersion_text(value: Option<f64>) -> String {
    value.map_or_else(String::new, |d| format!("{d:.3}"))
}

fn round3(value: f64) -> f64 {
    (value * 1000.0).round() / 1000.0
}

/// Column values of a row, in header order.
fn cells(row: &ResultRow, verbose: bool, with_repository: bool, missing: &str) -> Vec<String> {
    let opt = |v: Option<String>| v.unwrap_or_else(|| missing.to_string());
    let mut out = Vec::with_capacity(9);
    if with_repository {
        out.push(row.repository.clone().unwrap_or_default());
    }
    out.push(row.name.clone());
    out.push(row.commits.to_string());
    out.push(opt(row.patterns.map(|p| p.to_string())));
    out.push(opt(row.dispersion.map(|d| dispersion_text(Some(d)))));
    out.push(row.prediction.to_string());
    if verbose {
        out.push(opt(row.features.map(|f| f.n_messages.to_string())));
        out.push(opt(row.features.map(|f| f.n_empty.to_string())));
        out.push(format!("{:.2}", row.confidence));
    }
    out
}

fn header(verbose: bool, with_repository: bool) -> Vec<&'static str> {
    let mut h = Vec::new();
    if with_repository {
        h.push("repository");
    }
    h.extend(["name", "commits", "patterns", "dispersion", "prediction"]);
    if verbose {
        h.extend(["messages", "empty", "confidence"]);
    }
    h
}

#[derive(Serialize)]
struct JsonRow<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    repository: Option<&'a str>,
    name: &'a str,
    commits: usize,
    patterns: Option<usize>,
    dispersion: Option<f64>,
    prediction: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    messages: Option<Option<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    empty: Option<Option<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    confidence: Option<f64>,
}

/// Renders rows as aligned text, CSV, or a JSON array.
pub fn format_output(rows: &[ResultRow], format: OutputFormat, verbose: bool) -> String {
    let with_repository = rows.iter().any(|r| r.repository.is_some());
    match format {
        OutputFormat::Text => {
            let head = header(verbose, with_repository);
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| cells(r, verbose, with_repository, "-"))
                .collect();
            let mut widths: Vec<usize> = head.iter().map(|h| h.chars().count()).collect();
            for line in &body {
                for (w, cell) in widths.iter_mut().zip(line) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let text_columns = usize::from(with_repository) + 1;
            let render = |fields: Vec<String>, out: &mut String| {
                let mut line = String::new();
                for (i, (field, width)) in fields.iter().zip(&widths).enumerate() {
                    if i > 0 {
                        line.push_str("  ");
                    }
                    let pad = width - field.chars().count();
                    // names left-aligned, everything else right-aligned
                    if i < text_columns || head[i] == "prediction" {
                        line.push_str(field);
                        line.extend(std::iter::repeat_n(' ', pad));
                    } else {
                        line.extend(std::iter::repeat_n(' ', pad));
                        line.push_str(field);
                    }
                }
                let _ = writeln!(out, "{}", line.trim_end());
            };
            let mut out = String::new();
            render(head.iter().map(|h| h.to_string()).collect(), &mut out);
            for line in body {
                render(line, &mut out);
            }
            out
        }
        OutputFormat::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer
                .write_record(header(verbose, with_repository))
                .expect("writing to memory");
            for row in rows {
                writer
                    .write_record(cells(row, verbose, with_repository, ""))
                    .expect("writing to memory");
            }
            String::from_utf8(writer.into_inner().expect("flushing to memory"))
                .expect("CSV of UTF-8 fields is UTF-8")
        }
        OutputFormat::Json => {
            let json: Vec<JsonRow> = rows
                .iter()
                .map(|r| JsonRow {
                    repository: r.repository.as_deref(),
                    name: &r.name,
                    commits: r.commits,
                    patterns: r.patterns,
                    dispersion: r.dispersion.map(round3),
                    prediction: r.prediction,
                    messages: verbose.then(|| r.features.map(|f| f.n_messages)),
                    empty: verbose.then(|| r.features.map(|f| f.n_empty)),
                    confidence: verbose.then_some(r.confidence),
                })
                .collect();
            let mut text = serde_json::to_string_pretty(&json).expect("rows serialise");
            text.push('\n');
            text
        }
    }
}

pub fn read_dataset_input(input: &DatasetArgs, min_messages: usize) -> Result<LabeledDataset> {
    let file = std::fs::File::open(&input.dataset)
        .with_context(|| format!("opening {}", input.dataset.display()))?;
    let mut dataset = if input.archive {
        let mut converted = Vec::new();
        convert_archive(file, &mut converted)
            .with_context(|| format!("converting {}", input.dataset.display()))?;
        read_dataset(converted.as_slice(), min_messages)?
    } else {
        read_dataset(file, min_messages)?
    };
    dataset.provenance = input.dataset.display().to_string();
    Ok(dataset)
}

pub fn train_options(args: &TrainArgs) -> TrainOptions {
    TrainOptions {
        seed: args.seed,
        train_fraction: args.train_fraction,
        folds: args.folds,
        grid: default_grid(),
        feature_config: FeatureConfig {
            min_messages: args.min_commits,
            max_messages: args.max_commits,
            ..FeatureConfig::default()
        },
        refit: args.default_forest.then(ForestParams::default),
    }
}

/// Human-readable summary printed by `train`.
pub fn train_summary(dataset: &LabeledDataset, outcome: &TrainOutcome) -> String {
    let mut out = String::new();
    let count = |entries: &[gitbot_core::evaluation::DatasetEntry], label| {
        entries.iter().filter(|e| e.label == label).count()
    };
    use gitbot_core::Label::{Bot, Human};
    let _ = writeln!(
        out,
        "dataset: {} examples ({} bots, {} humans), {} excluded below the minimum",
        dataset.len(),
        dataset.count(Bot),
        dataset.count(Human),
        dataset.excluded
    );
    let _ = writeln!(
        out,
        "split: {} train ({} bots, {} humans), {} test ({} bots, {} humans)",
        outcome.train.len(),
        count(&outcome.train, Bot),
        count(&outcome.train, Human),
        outcome.test.len(),
        count(&outcome.test, Bot),
        count(&outcome.test, Human)
    );
    let _ = writeln!(out, "\n{}", outcome.grid);
    let _ = write!(out, "held-out evaluation\n{}", outcome.report);
    out
}

/// Report printed by `evaluate`.
pub fn evaluate_dataset(
    model: &ForestModel,
    dataset: &LabeledDataset,
    holdout: Option<(u64, f64)>,
) -> Result<EvaluationReport> {
    let entries = match holdout {
        Some((seed, fraction)) => {
            stratified_split(&dataset.entries, |e| e.label, fraction, seed)?.1
        }
        None => dataset.entries.clone(),
    };
    Ok(evaluate_pretrained(model, &entries)?)
}

pub fn synthesize(args: &SynthesizeArgs) -> Result<LabeledDataset> {
    let dataset = generate(&SyntheticSpec {
        n_bots: args.bots,
        n_humans: args.humans,
        seed: args.seed,
        ..SyntheticSpec::default()
    });
    let file = std::fs::File::create(&args.output)
        .with_context(|| format!("creating {}", args.output.display()))?;
    dataset.write_csv(std::io::BufWriter::new(file))?;
    Ok(dataset)
}

/// Count of rows per verdict, for logging.
pub fn verdict_counts(rows: &[ResultRow]) -> BTreeMap<Verdict, usize> {
    let mut counts = BTreeMap::new();
    for row in rows {
        *counts.entry(row.prediction).or_default() += 1;
    }
    counts
}
