//! Merging of contributor names into identities from a two-column CSV file.
//!
//! Each row maps a name to an identity. Mapping a name to `IGNORE` removes
//! that name's commits from the analysis altogether.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use thiserror::Error;

use crate::features::MessageCorpus;

/// Reserved identity that drops a name. Matched case-sensitively.
pub const IGNORE: &str = "IGNORE";

#[derive(Debug, Error)]
pub enum IdentityError {
    #[error("cannot read mapping file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed mapping at line {line}: {detail}")]
    MalformedMapping { line: u64, detail: String },
    #[error("name {name:?} is mapped to both {first:?} and {second:?}")]
    DuplicateName {
        name: String,
        first: String,
        second: String,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdentityMapping {
    entries: BTreeMap<String, String>,
}

impl IdentityMapping {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds one name; re-adding the same pair is allowed, a conflicting pair is not.
    pub fn insert(
        &mut self,
        name: impl Into<String>,
        identity: impl Into<String>,
    ) -> Result<(), IdentityError> {
        let (name, identity) = (name.into(), identity.into());
        if let Some(existing) = self.entries.get(&name) {
            if *existing != identity {
                return Err(IdentityError::DuplicateName {
                    name,
                    first: existing.clone(),
                    second: identity,
                });
            }
            return Ok(());
        }
        self.entries.insert(name, identity);
        Ok(())
    }

    pub fn identity_of(&self, name: &str) -> Option<&str> {
        self.entries.get(name).map(String::as_str)
    }

    pub fn is_ignored(&self, name: &str) -> bool {
        self.identity_of(name) == Some(IGNORE)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self, IdentityError> {
        let mut csv = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(reader);
        let mut mapping = Self::new();
        for (index, record) in csv.records().enumerate() {
            let record = record.map_err(|e| IdentityError::MalformedMapping {
                line: e.position().map_or(0, |p| p.line()),
                detail: e.to_string(),
            })?;
            let line = record.position().map_or(index as u64 + 1, |p| p.line());
            if record.len() != 2 {
                // A lone blank line parses as one empty field.
                if record.len() == 1 && record[0].trim().is_empty() {
                    continue;
                }
                return Err(IdentityError::MalformedMapping {
                    line,
                    detail: format!("expected 2 fields, found {}", record.len()),
                });
            }
            let (name, identity) = (&record[0], &record[1]);
            if index == 0 && name == "name" && identity == "identity" {
                continue;
            }
            if identity.is_empty() {
                return Err(IdentityError::MalformedMapping {
                    line,
                    detail: format!("empty identity for {name:?}"),
                });
            }
            mapping.insert(name, identity)?;
        }
        Ok(mapping)
    }
}

pub fn load_mapping(path: &Path) -> Result<IdentityMapping, IdentityError> {
    IdentityMapping::from_reader(std::fs::File::open(path)?)
}

/// Renames corpora by identity, merging corpora that share an identity and
/// dropping ignored names. Merged corpora are re-sorted newest first.
pub fn apply_mapping(
    groups: BTreeMap<String, MessageCorpus>,
    mapping: &IdentityMapping,
) -> BTreeMap<String, MessageCorpus> {
    let mut merged: BTreeMap<String, MessageCorpus> = BTreeMap::new();
    let mut touched = Vec::new();
    // BTreeMap iteration is sorted by name, so merges are order-independent.
    for (name, corpus) in groups {
        let identity = match mapping.identity_of(&name) {
            Some(IGNORE) => continue,
            Some(identity) => identity.to_string(),
            None => name,
        };
        match merged.get_mut(&identity) {
            Some(existing) => {
                existing.messages.extend(corpus.messages);
                touched.push(identity);
            }
            None => {
                merged.insert(
                    identity.clone(),
                    MessageCorpus {
                        contributor: identity,
                        messages: corpus.messages,
                    },
                );
            }
        }
    }
    for identity in touched {
        if let Some(corpus) = merged.get_mut(&identity) {
            corpus.sort_most_recent_first();
        }
    }
    merged
}
