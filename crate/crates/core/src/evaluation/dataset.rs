//! Labeled commit-message datasets.
//!
//! The native format is CSV with one message per row:
//! `contributor_id,repository_id,label,message`, where `label` is `bot` or
//! `human` and `message` is quoted when it contains commas, quotes, or newlines.
//! Rows of one (contributor, repository) pair are listed most recent first.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use super::EvaluationError;
use crate::classifier::Label;
use crate::features::MessageCorpus;

pub const DATASET_HEADER: [&str; 4] = ["contributor_id", "repository_id", "label", "message"];

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetEntry {
    pub contributor: String,
    pub repository: String,
    pub label: Label,
    pub corpus: MessageCorpus,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LabeledDataset {
    pub entries: Vec<DatasetEntry>,
    /// Pairs dropped for having fewer than the minimum number of messages.
    pub excluded: usize,
    pub provenance: String,
}

impl LabeledDataset {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count(&self, label: Label) -> usize {
        self.entries.iter().filter(|e| e.label == label).count()
    }

    pub fn total_messages(&self) -> usize {
        self.entries.iter().map(|e| e.corpus.len()).sum()
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), EvaluationError> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(DATASET_HEADER)?;
        for entry in &self.entries {
            let label = match entry.label {
                Label::Bot => "bot",
                Label::Human => "human",
            };
            for text in entry.corpus.texts() {
                out.write_record([&entry.contributor, &entry.repository, label, text])?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

pub fn parse_label(token: &str) -> Option<Label> {
    match token.trim().to_ascii_lowercase().as_str() {
        "bot" => Some(Label::Bot),
        "human" => Some(Label::Human),
        _ => None,
    }
}

/// Groups rows into per-(contributor, repository) corpora, dropping those with
/// fewer than `min_messages` messages. Pairs keep their first-appearance order.
pub fn read_dataset<R: Read>(
    reader: R,
    min_messages: usize,
) -> Result<LabeledDataset, EvaluationError> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut index: HashMap<(String, String), usize> = HashMap::new();
    let mut entries: Vec<DatasetEntry> = Vec::new();

    for (row, record) in csv.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(row as u64 + 1, |p| p.line());
        if record.len() != 4 {
            return Err(EvaluationError::MalformedDataset {
                line,
                detail: format!("expected 4 fields, found {}", record.len()),
            });
        }
        if row == 0 && record.iter().eq(DATASET_HEADER) {
            continue;
        }
        let label = parse_label(&record[2]).ok_or_else(|| EvaluationError::MalformedDataset {
            line,
            detail: format!("unknown label {:?}", &record[2]),
        })?;
        let key = (record[0].to_string(), record[1].to_string());
        let slot = match index.get(&key) {
            Some(&slot) => slot,
            None => {
                index.insert(key.clone(), entries.len());
                entries.push(DatasetEntry {
                    contributor: key.0,
                    repository: key.1,
                    label,
                    corpus: MessageCorpus::new(&record[0]),
                });
                entries.len() - 1
            }
        };
        let entry = &mut entries[slot];
        if entry.label != label {
            return Err(EvaluationError::MalformedDataset {
                line,
                detail: format!(
                    "{} in {} is labeled both {} and {}",
                    entry.contributor, entry.repository, entry.label, label
                ),
            });
        }
        entry.corpus.messages.push(crate::features::CorpusMessage {
            timestamp: None,
            text: record[3].to_string(),
        });
    }

    let before = entries.len();
    entries.retain(|e| e.corpus.len() >= min_messages);
    let excluded = before - entries.len();
    if excluded > 0 {
        log::warn!("excluded {excluded} contributor/repository pairs with fewer than {min_messages} messages");
    }
    Ok(LabeledDataset {
        entries,
        excluded,
        provenance: String::new(),
    })
}

pub fn load_dataset(path: &Path, min_messages: usize) -> Result<LabeledDataset, EvaluationError> {
    let file = std::fs::File::open(path)?;
    let mut dataset = read_dataset(file, min_messages)?;
    dataset.provenance = path.display().to_string();
    Ok(dataset)
}

const CONTRIBUTOR_COLUMNS: &[&str] = &[
    "contributor_id",
    "contributor",
    "author",
    "author_name",
    "login",
    "account",
    "name",
];
const REPOSITORY_COLUMNS: &[&str] = &[
    "repository_id",
    "repository",
    "repo",
    "project",
    "repo_name",
];
const LABEL_COLUMNS: &[&str] = &["label", "type", "class", "is_bot", "bot"];
const MESSAGE_COLUMNS: &[&str] = &[
    "message",
    "commit_message",
    "msg",
    "comment",
    "body",
    "text",
];

fn archive_label(token: &str) -> Option<Label> {
    parse_label(token).or_else(|| match token.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "b" => Some(Label::Bot),
        "0" | "false" | "no" | "h" => Some(Label::Human),
        _ => None,
    })
}

/// Rewrites a headed CSV archive into the native dataset format.
///
/// Columns are located by (case-insensitive) header name; labels may be
/// `bot`/`human`, `1`/`0`, or `true`/`false`. Returns the number of rows written.
pub fn convert_archive<R: Read, W: Write>(reader: R, writer: W) -> Result<usize, EvaluationError> {
    let mut input = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers: Vec<String> = input
        .headers()?
        .iter()
        .map(|h| h.trim().to_ascii_lowercase())
        .collect();
    let find = |names: &[&str], role: &str| {
        names
            .iter()
            .find_map(|n| headers.iter().position(|h| h == n))
            .ok_or_else(|| EvaluationError::MalformedDataset {
                line: 1,
                detail: format!("no {role} column among {headers:?}"),
            })
    };
    let columns = [
        find(CONTRIBUTOR_COLUMNS, "contributor")?,
        find(REPOSITORY_COLUMNS, "repository")?,
        find(LABEL_COLUMNS, "label")?,
        find(MESSAGE_COLUMNS, "message")?,
    ];

    let mut out = csv::Writer::from_writer(writer);
    out.write_record(DATASET_HEADER)?;
    let mut written = 0;
    for (row, record) in input.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(row as u64 + 2, |p| p.line());
        let field = |i: usize| {
            record
                .get(columns[i])
                .ok_or_else(|| EvaluationError::MalformedDataset {
                    line,
                    detail: format!("missing column {}", headers[columns[i]]),
                })
        };
        let label = field(2)?;
        let label = archive_label(label).ok_or_else(|| EvaluationError::MalformedDataset {
            line,
            detail: format!("unknown label {label:?}"),
        })?;
        let label = match label {
            Label::Bot => "bot",
            Label::Human => "human",
        };
        out.write_record([field(0)?, field(1)?, label, field(3)?])?;
        written += 1;
    }
    out.flush()?;
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(contributor: &str, repo: &str, label: &str, n: usize) -> String {
        (0..n)
            .map(|i| format!("{contributor},{repo},{label},\"message {i}, with comma\"\n"))
            .collect()
    }

    #[test]
    fn groups_rows_per_pair() {
        let text = rows("alice", "r1", "human", 12) + &rows("dep-bot", "r1", "bot", 12);
        let ds = read_dataset(text.as_bytes(), 10).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.excluded, 0);
        assert_eq!(ds.entries[0].contributor, "alice");
        assert_eq!(ds.entries[1].label, Label::Bot);
        assert_eq!(
            ds.entries[0].corpus.messages[3].text,
            "message 3, with comma"
        );
    }

    #[test]
    fn same_contributor_in_two_repositories_is_two_examples() {
        let text = rows("alice", "r1", "human", 10) + &rows("alice", "r2", "human", 10);
        let ds = read_dataset(text.as_bytes(), 10).unwrap();
        assert_eq!(ds.len(), 2);
    }

    #[test]
    fn small_pairs_are_excluded() {
        let text = format!(
            "{}\n{}{}",
            DATASET_HEADER.join(","),
            rows("alice", "r1", "human", 12),
            rows("tiny", "r1", "bot", 9)
        );
        let ds = read_dataset(text.as_bytes(), 10).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds.excluded, 1);
    }

    #[test]
    fn bad_rows() {
        let err = read_dataset("a,r,robot,hello\n".as_bytes(), 1).unwrap_err();
        assert!(matches!(err, EvaluationError::MalformedDataset { .. }));
        let err = read_dataset("a,r,bot\n".as_bytes(), 1).unwrap_err();
        assert!(matches!(err, EvaluationError::MalformedDataset { .. }));
        let err = read_dataset("a,r,bot,x\na,r,human,y\n".as_bytes(), 1).unwrap_err();
        assert!(matches!(
            err,
            EvaluationError::MalformedDataset { line: 2, .. }
        ));
    }

    #[test]
    fn multiline_messages_survive_a_write_read_cycle() {
        let text =
            rows("alice", "r1", "human", 9) + "alice,r1,human,\"subject\n\nbody \"\"quoted\"\"\"\n";
        let ds = read_dataset(text.as_bytes(), 10).unwrap();
        let mut buf = Vec::new();
        ds.write_csv(&mut buf).unwrap();
        let again = read_dataset(buf.as_slice(), 10).unwrap();
        assert_eq!(again.entries, ds.entries);
        assert_eq!(
            again.entries[0].corpus.messages[9].text,
            "subject\n\nbody \"quoted\""
        );
    }

    #[test]
    fn converts_archive_layout() {
        let archive = "Repo,Author,Message,is_bot\nr1,x,\"hi, there\",1\nr1,y,hello,0\n";
        let mut out = Vec::new();
        assert_eq!(convert_archive(archive.as_bytes(), &mut out).unwrap(), 2);
        let text = String::from_utf8(out).unwrap();
        assert_eq!(
            text,
            "contributor_id,repository_id,label,message\nx,r1,bot,\"hi, there\"\ny,r1,human,hello\n"
        );
        assert!(convert_archive("a,b\n1,2\n".as_bytes(), Vec::new()).is_err());
    }
}
