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
