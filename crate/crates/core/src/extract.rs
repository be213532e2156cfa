//! Commit extraction through the `git log` command line.
//!
//! Every record is emitted as `hash NUL author NUL committer NUL date NUL body NUL NUL`,
//! so a message may contain any byte git allows in a commit message (git itself
//! refuses NUL in messages) without confusing the parser.

use std::collections::BTreeMap;
use std::io;
use std::path::{Path, PathBuf};
use std::process::Command;

use chrono::{DateTime, NaiveDate, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{CorpusMessage, MessageCorpus};

/// Which name of a commit identifies its contributor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum ContributorRole {
    #[default]
    Author,
    Committer,
}

/// One commit as reported by `git log`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawCommit {
    pub hash: String,
    pub author_name: String,
    pub committer_name: String,
    /// Author date for [`ContributorRole::Author`], committer date otherwise.
    pub timestamp: DateTime<Utc>,
    pub message: String,
}

impl RawCommit {
    pub fn name(&self, role: ContributorRole) -> &str {
        match role {
            ContributorRole::Author => &self.author_name,
            ContributorRole::Committer => &self.committer_name,
        }
    }
}

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("git executable not found: {0}")]
    GitUnavailable(#[source] io::Error),
    #[error("{} is not a git repository: {detail}", path.display())]
    NotAGitRepository { path: PathBuf, detail: String },
    #[error("git log failed in {} (exit status {status}): {stderr}", path.display())]
    ExtractionFailed {
        path: PathBuf,
        status: String,
        stderr: String,
    },
    #[error("unparseable git log output in {}: {detail}", path.display())]
    MalformedOutput { path: PathBuf, detail: String },
}

/// Knobs for one extraction run.
#[derive(Debug, Clone, Default)]
pub struct ExtractOptions {
    pub role: ContributorRole,
    /// Lower bound (inclusive, midnight UTC) on the role's timestamp.
    pub start_date: Option<NaiveDate>,
    /// Drop merge commits (`--no-merges`). Merges are kept by default.
    pub exclude_merges: bool,
    /// Override for the git executable, mostly for tests.
    pub git_program: Option<PathBuf>,
}

impl ExtractOptions {
    pub fn new(role: ContributorRole) -> Self {
        Self {
            role,
            ..Self::default()
        }
    }

    pub fn since(mut self, date: Option<NaiveDate>) -> Self {
        self.start_date = date;
        self
    }
}

const FIELDS_PER_RECORD: usize = 6;

fn log_format(role: ContributorRole) -> &'static str {
    match role {
        ContributorRole::Author => "--pretty=format:%H%x00%an%x00%cn%x00%aI%x00%B%x00%x00",
        ContributorRole::Committer => "--pretty=format:%H%x00%an%x00%cn%x00%cI%x00%B%x00%x00",
    }
}

/// Returns every commit reachable from `HEAD` of `repo_path`, in `git log` order.
pub fn extract_commits(
    repo_path: &Path,
    options: &ExtractOptions,
) -> Result<Vec<RawCommit>, ExtractError> {
    let git = options
        .git_program
        .clone()
        .unwrap_or_else(|| PathBuf::from("git"));
    let command = |args: &[&str]| {
        let mut cmd = Command::new(&git);
        cmd.arg("-C").arg(repo_path).args(args);
        // `--since` is interpreted in the local timezone otherwise.
        cmd.env("TZ", "UTC").env("LC_ALL", "C");
        cmd
    };

    if !repo_path.is_dir() {
        return Err(ExtractError::NotAGitRepository {
            path: repo_path.to_path_buf(),
            detail: "no such directory".into(),
        });
    }

    let probe = command(&["rev-parse", "--git-dir"])
        .output()
        .map_err(ExtractError::GitUnavailable)?;
    if !probe.status.success() {
        return Err(ExtractError::NotAGitRepository {
            path: repo_path.to_path_buf(),
            detail: String::from_utf8_lossy(&probe.stderr).trim().to_string(),
        });
    }

    let head = command(&["rev-parse", "--verify", "--quiet", "HEAD"])
        .output()
        .map_err(ExtractError::GitUnavailable)?;
    if !head.status.success() {
        // Freshly initialised repository without commits.
        return Ok(Vec::new());
    }

    let mut args = vec![
        "-c".to_string(),
        "log.showSignature=false".to_string(),
        "log".to_string(),
        log_format(options.role).to_string(),
    ];
    if options.exclude_merges {
        args.push("--no-merges".into());
    }
    if let (Some(date), ContributorRole::Committer) = (options.start_date, options.role) {
        // git filters on committer dates only; author dates are filtered below.
        args.push(format!("--since={}", date.format("%Y-%m-%d")));
    }
    let arg_refs: Vec<&str> = args.iter().map(String::as_str).collect();
    let output = command(&arg_refs)
        .output()
        .map_err(ExtractError::GitUnavailable)?;
    if !output.status.success() {
        return Err(ExtractError::ExtractionFailed {
            path: repo_path.to_path_buf(),
            status: output
                .status
                .code()
                .map_or_else(|| "signal".to_string(), |c| c.to_string()),
            stderr: String::from_utf8_lossy(&output.stderr).trim().to_string(),
        });
    }

    let mut commits =
        parse_log(&output.stdout).map_err(|detail| ExtractError::MalformedOutput {
            path: repo_path.to_path_buf(),
            detail,
        })?;
    if let Some(date) = options.start_date {
        let cutoff = date
            .and_hms_opt(0, 0, 0)
            .expect("midnight is a valid time")
            .and_utc();
        commits.retain(|c| c.timestamp >= cutoff);
    }
    Ok(commits)
}

/// Parses the NUL-delimited record stream produced by [`extract_commits`]'s format.
///
/// `--pretty=format:` separates records with a newline, which ends up as the
/// first byte of every hash field after the first one.
pub fn parse_log(stdout: &[u8]) -> Result<Vec<RawCommit>, String> {
    if stdout.is_empty() {
        return Ok(Vec::new());
    }
    let mut fields: Vec<&[u8]> = stdout.split(|b| *b == 0).collect();
    // The final terminator leaves one empty field behind the last record.
    if fields.len() % FIELDS_PER_RECORD == 1 && fields.last().is_some_and(|f| f.is_empty()) {
        fields.pop();
    }
    if !fields.len().is_multiple_of(FIELDS_PER_RECORD) {
        return Err(format!(
            "{} fields is not a whole number of {FIELDS_PER_RECORD}-field records",
            fields.len()
        ));
    }

    let text = |bytes: &[u8]| String::from_utf8_lossy(bytes).into_owned();
    let mut commits = Vec::with_capacity(fields.len() / FIELDS_PER_RECORD);
    for record in fields.chunks_exact(FIELDS_PER_RECORD) {
        let hash = text(record[0]).trim_start_matches('\n').to_string();
        if hash.is_empty() || !hash.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(format!("bad commit hash {hash:?}"));
        }
        if !record[5].is_empty() {
            return Err(format!("record {hash} is not terminated"));
        }
        let date = text(record[3]);
        let timestamp = DateTime::parse_from_rfc3339(&date)
            .map_err(|e| format!("bad date {date:?} in {hash}: {e}"))?
            .with_timezone(&Utc);
        commits.push(RawCommit {
            hash,
            author_name: text(record[1]),
            committer_name: text(record[2]),
            timestamp,
            message: text(record[4]),
        });
    }
    Ok(commits)
}

/// Groups commit messages by contributor name, most recent first.
pub fn group_messages(
    commits: &[RawCommit],
    role: ContributorRole,
) -> BTreeMap<String, MessageCorpus> {
    let mut groups: BTreeMap<String, MessageCorpus> = BTreeMap::new();
    for commit in commits {
        let name = commit.name(role);
        groups
            .entry(name.to_string())
            .or_insert_with(|| MessageCorpus::new(name))
            .messages
            .push(CorpusMessage {
                timestamp: Some(commit.timestamp),
                text: commit.message.clone(),
            });
    }
    for corpus in groups.values_mut() {
        corpus.sort_most_recent_first();
    }
    groups
}
