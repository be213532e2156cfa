//! Throwaway git repositories for integration tests.

#![allow(dead_code)]

use std::path::Path;
use std::process::Command;

use tempfile::TempDir;

pub struct FixtureRepo {
    dir: TempDir,
    counter: usize,
}

impl FixtureRepo {
    pub fn new() -> Self {
        let dir = tempfile::tempdir().expect("temporary directory");
        let repo = Self { dir, counter: 0 };
        repo.git(&["init", "--quiet"]);
        repo
    }

    pub fn path(&self) -> &Path {
        self.dir.path()
    }

    pub fn git(&self, args: &[&str]) -> String {
        let out = Command::new("git")
            .arg("-C")
            .arg(self.path())
            .args(args)
            .env("GIT_CONFIG_GLOBAL", "/dev/null")
            .env("GIT_CONFIG_NOSYSTEM", "1")
            .env("GIT_COMMITTER_NAME", "Fixture Committer")
            .env("GIT_COMMITTER_EMAIL", "committer@example.org")
            .output()
            .expect("git runs");
        assert!(
            out.status.success(),
            "git {args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        String::from_utf8(out.stdout).unwrap()
    }

    /// Commits a change with `message` verbatim, authored by `author` at
    /// `day` days after 2020-01-01.
    pub fn commit(&mut self, author: &str, day: u32, message: &str) {
        self.commit_as(author, "Fixture Committer", day, day, message);
    }

    pub fn commit_as(
        &mut self,
        author: &str,
        committer: &str,
        author_day: u32,
        committer_day: u32,
        message: &str,
    ) {
        self.counter += 1;
        let file = self.path().join("file.txt");
        std::fs::write(&file, self.counter.to_string()).unwrap();
        let msg_file = self.dir.path().join(".git").join("FIXTURE_MSG");
        std::fs::write(&msg_file, message).unwrap();
        let date = |day: u32| {
            let d = chrono::NaiveDate::from_ymd_opt(2020, 1, 1).unwrap()
                + chrono::Days::new(u64::from(day));
            format!("{}T12:00:00+00:00", d.format("%Y-%m-%d"))
        };
        let out = Command::new("git")
            .arg("-C")
            .arg(self.path())
            .args(["add", "file.txt"])
            .env("GIT_CONFIG_GLOBAL", "/dev/null")
            .output()
            .unwrap();
        assert!(out.status.success());
        let out = Command::new("git")
            .arg("-C")
            .arg(self.path())
            .args([
                "commit",
                "--quiet",
                "--allow-empty-message",
                "--cleanup=verbatim",
                "-F",
            ])
            .arg(&msg_file)
            .env("GIT_CONFIG_GLOBAL", "/dev/null")
            .env("GIT_CONFIG_NOSYSTEM", "1")
            .env("GIT_AUTHOR_NAME", author)
            .env("GIT_AUTHOR_EMAIL", "author@example.org")
            .env("GIT_AUTHOR_DATE", date(author_day))
            .env("GIT_COMMITTER_NAME", committer)
            .env("GIT_COMMITTER_EMAIL", "committer@example.org")
            .env("GIT_COMMITTER_DATE", date(committer_day))
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "commit failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

pub const VARIED: [&str; 30] = [
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

/// `release-bot`: 50 identical messages; `alice`: 30 varied ones; `bob`: 7 commits.
pub fn standard_fixture() -> FixtureRepo {
    let mut repo = FixtureRepo::new();
    for (i, day) in (0..50).enumerate() {
        repo.commit("release-bot", day, "Update dependencies\n");
        if i < 30 {
            repo.commit("alice", day, &format!("{}\n", VARIED[i]));
        }
        if i < 7 {
            repo.commit("bob", day, &format!("bob change {i}\n"));
        }
    }
    repo
}

pub fn gitbot() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gitbot"));
    cmd.env_remove("RUST_LOG");
    cmd
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, S>(args: I) -> Run
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    let out = gitbot().args(args).output().expect("gitbot runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// (name, prediction) pairs of the three output formats.
pub fn text_pairs(out: &str) -> Vec<(String, String)> {
    let mut lines = out.lines();
    let head: Vec<&str> = lines.next().unwrap().split_whitespace().collect();
    let name = head.iter().position(|h| *h == "name").unwrap();
    let pred = head.iter().position(|h| *h == "prediction").unwrap();
    lines
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            (f[name].to_string(), f[pred].to_string())
        })
        .collect()
}

pub fn csv_pairs(out: &str) -> Vec<(String, String)> {
    let mut reader = csv::Reader::from_reader(out.as_bytes());
    let head = reader.headers().unwrap().clone();
    let name = head.iter().position(|h| h == "name").unwrap();
    let pred = head.iter().position(|h| h == "prediction").unwrap();
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[name].to_string(), r[pred].to_string())
        })
        .collect()
}

pub fn json_pairs(out: &str) -> Vec<(String, String)> {
    let value: serde_json::Value = serde_json::from_str(out).unwrap();
    value
        .as_array()
        .unwrap()
        .iter()
        .map(|row| {
            (
                row["name"].as_str().unwrap().to_string(),
                row["prediction"].as_str().unwrap().to_string(),
            )
        })
        .collect()
}
