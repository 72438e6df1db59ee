//! Corpus handling: tokenization, label sets, dataset loading, vocabulary
//! construction, and stratified fold assignment.

mod folds;
mod sst;
mod tokenize;
mod vocab;

pub use folds::stratified_kfold;
pub use sst::{load_sst, parse_ptb_tree, sst_label_set};
pub use tokenize::{lowercase_tokens, tokenize};
pub use vocab::{Vocabulary, PAD_INDEX, PAD_TOKEN, RESERVED, UNK_INDEX, UNK_TOKEN};

use std::fs;
use std::path::Path;

use chrono::{DateTime, Utc};

use crate::error::{Error, Result};

/// Ordered set of class names; the position of a name is its label index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSet {
    names: Vec<String>,
}

impl LabelSet {
    pub fn new(names: Vec<String>) -> Result<Self> {
        if names.len() < 2 {
            return Err(Error::invalid(format!(
                "a label set needs at least 2 classes, got {}",
                names.len()
            )));
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::invalid(format!("label {i} is empty")));
            }
            if names[..i].contains(name) {
                return Err(Error::invalid(format!("duplicate label `{name}`")));
            }
        }
        Ok(LabelSet { names })
    }

    /// Reads one class name per line; order defines the label indices.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let names: Vec<String> = text
            .lines()
            .map(|l| l.trim().to_string())
            .filter(|l| !l.is_empty())
            .collect();
        LabelSet::new(names)
    }

    /// Number of classes, `C`.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Resolves a label field to its index: an exact name match first, then
    /// a bare integer in range.
    pub fn resolve(&self, field: &str) -> Option<usize> {
        if let Some(i) = self.names.iter().position(|n| n == field) {
            return Some(i);
        }
        match field.parse::<usize>() {
            Ok(i) if i < self.names.len() => Some(i),
            _ => None,
        }
    }
}

/// One labeled, tokenized document.
#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub tokens: Vec<String>,
    pub label: usize,
    /// Present only for timestamped streams (timeline input).
    pub timestamp: Option<DateTime<Utc>>,
}

/// A set of examples with the label set they are indexed against.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub examples: Vec<Example>,
    pub labels: LabelSet,
}

impl Dataset {
    /// Validates that every example has tokens and an in-range label.
    pub fn new(examples: Vec<Example>, labels: LabelSet) -> Result<Self> {
        for (i, ex) in examples.iter().enumerate() {
            if ex.tokens.is_empty() {
                return Err(Error::invalid(format!("example {i} has no tokens")));
            }
            if ex.label >= labels.len() {
                return Err(Error::invalid(format!(
                    "example {i} has label {} but there are only {} classes",
                    ex.label,
                    labels.len()
                )));
            }
        }
        Ok(Dataset { examples, labels })
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn n_classes(&self) -> usize {
        self.labels.len()
    }

    /// Number of examples per class.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.labels.len()];
        for ex in &self.examples {
            counts[ex.label] += 1;
        }
        counts
    }

    /// A new dataset holding the examples at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            examples: indices.iter().map(|&i| self.examples[i].clone()).collect(),
            labels: self.labels.clone(),
        }
    }
}

/// A skipped input line with the reason it was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineIssue {
    pub line: usize,
    pub msg: String,
}

/// Result of a resilient load: the usable dataset plus line diagnostics.
#[derive(Debug)]
pub struct LoadedData {
    pub dataset: Dataset,
    pub skipped: Vec<LineIssue>,
}

/// Loads `label<TAB>text` lines. Malformed lines (no tab, unknown label,
/// or text that tokenizes to nothing) are skipped and reported in
/// `skipped`; only I/O failures abort the load.
pub fn load_tsv(path: &Path, labels: &LabelSet, twitter_normalize: bool) -> Result<LoadedData> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut examples = Vec::new();
    let mut skipped = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        if line.is_empty() {
            skipped.push(LineIssue {
                line: lineno,
                msg: "empty line".into(),
            });
            continue;
        }
        let Some((label_field, body)) = line.split_once('\t') else {
            skipped.push(LineIssue {
                line: lineno,
                msg: "no tab separator".into(),
            });
            continue;
        };
        let Some(label) = labels.resolve(label_field.trim()) else {
            skipped.push(LineIssue {
                line: lineno,
                msg: format!("unknown label `{}`", label_field.trim()),
            });
            continue;
        };
        let tokens = tokenize(body, twitter_normalize);
        if tokens.is_empty() {
            skipped.push(LineIssue {
                line: lineno,
                msg: "text tokenizes to nothing".into(),
            });
            continue;
        }
        examples.push(Example {
            tokens,
            label,
            timestamp: None,
        });
    }
    Ok(LoadedData {
        dataset: Dataset::new(examples, labels.clone())?,
        skipped,
    })
}
