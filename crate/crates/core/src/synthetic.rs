//! Generated labeled corpora for tests, benchmarks, and the bundled model.
//!
//! Bots draw their messages from one to a few templates with variable slots
//! (package names, versions, PR numbers). Humans write free-form sentences
//! over a development vocabulary with the occasional stock phrase. A share of
//! each class is deliberately atypical so the classes overlap a little.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classifier::Label;
use crate::evaluation::{DatasetEntry, LabeledDataset};
use crate::features::MessageCorpus;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyntheticSpec {
    pub n_bots: usize,
    pub n_humans: usize,
    pub min_messages: usize,
    pub max_messages: usize,
    /// Percentage of each class generated with atypical behaviour.
    pub atypical_percent: u32,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            n_bots: 200,
            n_humans: 200,
            min_messages: 10,
            max_messages: 100,
            atypical_percent: 10,
            seed: 7,
        }
    }
}

const PACKAGES: &[&str] = &[
    "lodash",
    "react",
    "webpack",
    "eslint",
    "serde",
    "tokio",
    "requests",
    "numpy",
    "pytest",
    "jest",
    "babel-core",
    "typescript",
    "express",
    "django",
    "rails",
    "guava",
    "junit",
    "mocha",
    "axios",
    "moment",
    "chalk",
    "commander",
    "yargs",
    "prettier",
    "rollup",
];
const ORGS: &[&str] = &[
    "acme", "octo", "contoso", "initech", "globex", "umbrella", "hooli",
];
const BRANCHES: &[&str] = &[
    "feature", "fix", "patch", "release", "hotfix", "docs", "refactor", "deps", "ci",
];
const LANGS: &[&str] = &["fr", "de", "es", "it", "ja", "pt_BR", "zh_CN", "ru", "nl"];
const FILES: &[&str] = &[
    "README.md",
    "CHANGELOG.md",
    "package.json",
    "Cargo.lock",
    "yarn.lock",
    "docs/index.html",
    "data/stats.json",
    "AUTHORS",
];
const VERBS: &[&str] = &[
    "fix",
    "add",
    "remove",
    "refactor",
    "improve",
    "rewrite",
    "document",
    "simplify",
    "rename",
    "extract",
    "handle",
    "support",
    "optimize",
    "clean",
    "move",
    "test",
    "implement",
    "revert",
    "allow",
    "prevent",
    "use",
    "avoid",
    "expose",
    "validate",
];
const WORDS: &[&str] = &[
    "parser",
    "lexer",
    "cache",
    "config",
    "loader",
    "scheduler",
    "worker",
    "queue",
    "socket",
    "timeout",
    "retry",
    "logging",
    "metrics",
    "buffer",
    "allocator",
    "iterator",
    "callback",
    "promise",
    "thread",
    "mutex",
    "deadlock",
    "race",
    "condition",
    "null",
    "pointer",
    "overflow",
    "index",
    "offset",
    "encoding",
    "unicode",
    "utf8",
    "path",
    "windows",
    "macos",
    "linux",
    "build",
    "script",
    "makefile",
    "dockerfile",
    "image",
    "layout",
    "sidebar",
    "button",
    "modal",
    "form",
    "input",
    "validation",
    "schema",
    "migration",
    "database",
    "query",
    "join",
    "column",
    "table",
    "index",
    "auth",
    "token",
    "session",
    "cookie",
    "header",
    "request",
    "response",
    "handler",
    "router",
    "middleware",
    "template",
    "renderer",
    "canvas",
    "shader",
    "texture",
    "audio",
    "codec",
    "stream",
    "chunk",
    "frame",
    "packet",
    "protocol",
    "handshake",
    "tls",
    "certificate",
    "key",
    "signature",
    "hash",
    "checksum",
    "compression",
    "archive",
    "upload",
    "download",
    "progress",
    "spinner",
    "cli",
    "flag",
    "option",
    "argument",
    "help",
    "message",
    "error",
    "warning",
    "panic",
    "crash",
    "leak",
    "memory",
    "performance",
    "benchmark",
    "test",
    "fixture",
    "mock",
    "snapshot",
    "coverage",
    "lint",
    "format",
    "style",
    "typo",
    "comment",
    "docs",
    "example",
    "tutorial",
    "api",
    "endpoint",
    "client",
    "server",
    "plugin",
    "extension",
    "theme",
    "dark",
    "mode",
    "settings",
    "preferences",
    "locale",
    "translation",
    "date",
    "time",
    "zone",
    "calendar",
    "search",
    "filter",
    "sort",
    "pagination",
    "export",
    "import",
    "csv",
    "json",
    "yaml",
    "xml",
    "regex",
    "edge",
    "case",
    "corner",
    "when",
    "empty",
    "missing",
    "large",
    "files",
    "for",
    "in",
    "on",
    "with",
    "the",
    "from",
    "after",
    "before",
    "during",
    "unused",
];
const STOCK_PHRASES: &[&str] = &[
    "fix typo",
    "wip",
    "update readme",
    "minor fixes",
    "cleanup",
    "fix tests",
    "refactor",
    "merge branch 'master'",
    "small fix",
    "update docs",
];

fn version<R: Rng>(rng: &mut R) -> String {
    format!(
        "{}.{}.{}",
        rng.gen_range(0..20),
        rng.gen_range(0..40),
        rng.gen_range(0..60)
    )
}

fn pick<'a, R: Rng>(rng: &mut R, items: &'a [&'a str]) -> &'a str {
    items.choose(rng).copied().unwrap_or_default()
}

const N_TEMPLATES: usize = 12;

fn bot_template<R: Rng>(template: usize, rng: &mut R) -> String {
    match template {
        0 => format!(
            "Bump {} from {} to {}",
            pick(rng, PACKAGES),
            version(rng),
            version(rng)
        ),
        1 => format!(
            "Merge pull request #{} from {}/{}-{}",
            rng.gen_range(1..5000),
            pick(rng, ORGS),
            pick(rng, BRANCHES),
            rng.gen_range(1..300)
        ),
        2 => format!(
            "chore(deps): update dependency {} to v{}",
            pick(rng, PACKAGES),
            version(rng)
        ),
        3 => "Update translations".to_string(),
        4 => format!("[ci skip] Automated build {}", rng.gen_range(1000..99999)),
        5 => format!(
            "Auto-generated documentation for commit {:07x}",
            rng.gen_range(0..0x0fff_ffffu32)
        ),
        6 => format!(
            "Translate '{}/messages.po' in '{}'",
            pick(rng, &["src", "app", "web", "core"]),
            pick(rng, LANGS)
        ),
        7 => format!("Release v{}", version(rng)),
        8 => format!("Update {}", pick(rng, FILES)),
        9 => "Sync with upstream".to_string(),
        10 => format!(
            "Scheduled daily dependency update on {}",
            pick(
                rng,
                &["monday", "tuesday", "wednesday", "thursday", "friday"]
            )
        ),
        _ => format!(
            "Publish {}@{} to registry",
            pick(rng, PACKAGES),
            version(rng)
        ),
    }
}

/// Messages of one templated bot. Atypical bots mix many templates.
pub fn bot_messages<R: Rng>(rng: &mut R, n: usize, atypical: bool) -> Vec<String> {
    let n_templates = if atypical {
        rng.gen_range(4..=7)
    } else {
        rng.gen_range(1..=3)
    };
    let mut templates: Vec<usize> = (0..N_TEMPLATES).collect();
    templates.shuffle(rng);
    templates.truncate(n_templates);
    let dominance: f64 = if atypical {
        0.3
    } else {
        rng.gen_range(0.6..0.95)
    };
    let empty_rate: f64 = if rng.gen_bool(0.2) {
        rng.gen_range(0.0..0.1)
    } else {
        0.0
    };
    (0..n)
        .map(|_| {
            if rng.gen_bool(empty_rate) {
                return String::new();
            }
            let t = if rng.gen_bool(dominance) {
                templates[0]
            } else {
                templates[rng.gen_range(0..templates.len())]
            };
            bot_template(t, rng)
        })
        .collect()
}

fn sentence<R: Rng>(rng: &mut R) -> String {
    let mut words = vec![pick(rng, VERBS).to_string()];
    for _ in 0..rng.gen_range(2..=9) {
        words.push(pick(rng, WORDS).to_string());
    }
    if rng.gen_bool(0.15) {
        words.push(format!("(#{})", rng.gen_range(1..3000)));
    }
    let mut text = words.join(" ");
    if rng.gen_bool(0.5) {
        // capitalise the first letter
        text = text[..1].to_uppercase() + &text[1..];
    }
    if rng.gen_bool(0.25) {
        text.push_str("\n\n");
        text.push_str(&sentence_body(rng));
    }
    text
}

fn sentence_body<R: Rng>(rng: &mut R) -> String {
    (0..rng.gen_range(5..20))
        .map(|_| pick(rng, WORDS))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Messages of one human. Atypical humans lean heavily on stock phrases.
pub fn human_messages<R: Rng>(rng: &mut R, n: usize, atypical: bool) -> Vec<String> {
    let stock_rate = if atypical {
        rng.gen_range(0.4..0.7)
    } else {
        rng.gen_range(0.0..0.12)
    };
    (0..n)
        .map(|_| {
            if rng.gen_bool(0.01) {
                String::new()
            } else if rng.gen_bool(stock_rate) {
                pick(rng, STOCK_PHRASES).to_string()
            } else {
                sentence(rng)
            }
        })
        .collect()
}

/// A labeled dataset with bots first, then humans, each spread over 40 repositories.
pub fn generate(spec: &SyntheticSpec) -> LabeledDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut entries = Vec::with_capacity(spec.n_bots + spec.n_humans);
    let classes = [(Label::Bot, spec.n_bots), (Label::Human, spec.n_humans)];
    for (label, count) in classes {
        for i in 0..count {
            let n = rng.gen_range(spec.min_messages..=spec.max_messages);
            let atypical = rng.gen_range(0..100) < spec.atypical_percent;
            let messages = match label {
                Label::Bot => bot_messages(&mut rng, n, atypical),
                Label::Human => human_messages(&mut rng, n, atypical),
            };
            let contributor = match label {
                Label::Bot => format!("bot-{i:04}"),
                Label::Human => format!("human-{i:04}"),
            };
            entries.push(DatasetEntry {
                repository: format!("repo-{:02}", rng.gen_range(0..40)),
                corpus: MessageCorpus::from_texts(&contributor, messages),
                contributor,
                label,
            });
        }
    }
    LabeledDataset {
        entries,
        excluded: 0,
        provenance: format!("synthetic corpus {spec:?}"),
    }
}
