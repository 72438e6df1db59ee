use std::fs;
use std::path::Path;

use crate::corpus::{lowercase_tokens, tokenize, Dataset, Example, LabelSet};
use crate::error::{Error, Result};

/// The fixed five-way sentiment label set used by the treebank format,
/// ordered most negative to most positive.
pub fn sst_label_set() -> LabelSet {
    LabelSet::new(
        [
            "very_negative",
            "negative",
            "neutral",
            "positive",
            "very_positive",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
    )
    .expect("static label set")
}

/// Parses one s-expression constituency tree like
/// `(3 (2 The) (4 (2 very) (4 good)))` and returns the root label with the
/// leaf tokens in order. Errors carry the byte offset of the problem.
pub fn parse_ptb_tree(line: &str) -> Result<(usize, Vec<String>)> {
    let mut p = TreeParser {
        bytes: line.as_bytes(),
        src: line,
        pos: 0,
    };
    p.skip_ws();
    let (label, tokens) = p.node()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("trailing content after the root tree"));
    }
    Ok((label, tokens))
}

struct TreeParser<'a> {
    bytes: &'a [u8],
    src: &'a str,
    pos: usize,
}

impl<'a> TreeParser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::TreeParse {
            offset: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn node(&mut self) -> Result<(usize, Vec<String>)> {
        if self.pos >= self.bytes.len() {
            return Err(self.err("unexpected end of input, expected `(`"));
        }
        if self.bytes[self.pos] != b'(' {
            return Err(self.err("expected `(`"));
        }
        self.pos += 1;
        self.skip_ws();

        let label_start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == label_start {
            return Err(self.err("expected an integer node label"));
        }
        // A label must be a whole field: `(3x ...)` is not an integer label.
        if self.pos < self.bytes.len()
            && !self.bytes[self.pos].is_ascii_whitespace()
            && self.bytes[self.pos] != b'('
            && self.bytes[self.pos] != b')'
        {
            return Err(self.err("expected an integer node label"));
        }
        let label: usize = self.src[label_start..self.pos]
            .parse()
            .map_err(|_| self.err("node label out of range"))?;

        let mut tokens = Vec::new();
        let mut n_children = 0;
        loop {
            self.skip_ws();
            if self.pos >= self.bytes.len() {
                return Err(self.err("unexpected end of input, unbalanced parentheses"));
            }
            match self.bytes[self.pos] {
                b')' => {
                    self.pos += 1;
                    if n_children == 0 {
                        return Err(self.err("empty tree: node has no children"));
                    }
                    return Ok((label, tokens));
                }
                b'(' => {
                    let (_, child_tokens) = self.node()?;
                    tokens.extend(child_tokens);
                    n_children += 1;
                }
                _ => {
                    let start = self.pos;
                    while self.pos < self.bytes.len()
                        && !self.bytes[self.pos].is_ascii_whitespace()
                        && self.bytes[self.pos] != b'('
                        && self.bytes[self.pos] != b')'
                    {
                        self.pos += 1;
                    }
                    tokens.push(self.src[start..self.pos].to_string());
                    n_children += 1;
                }
            }
        }
    }
}

/// Loads a file of one tree per line into a 5-class dataset. Leaves are
/// lowercased; with `twitter_normalize` they additionally pass through the
/// full tokenizer (which may split them). Any malformed line aborts the
/// load with its line number.
pub fn load_sst(path: &Path, twitter_normalize: bool) -> Result<Dataset> {
    let labels = sst_label_set();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut examples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        if line.trim().is_empty() {
            continue;
        }
        let (label, leaves) = parse_ptb_tree(line).map_err(|e| match e {
            Error::TreeParse { offset, msg } => {
                Error::data(path, lineno, format!("offset {offset}: {msg}"))
            }
            other => other,
        })?;
        if label >= labels.len() {
            return Err(Error::data(
                path,
                lineno,
                format!("root label {label} out of range for {} classes", labels.len()),
            ));
        }
        let tokens = if twitter_normalize {
            let mut out = Vec::new();
            for leaf in &leaves {
                out.extend(tokenize(leaf, true));
            }
            out
        } else {
            lowercase_tokens(&leaves)
        };
        if tokens.is_empty() {
            return Err(Error::data(path, lineno, "tree has no usable tokens"));
        }
        examples.push(Example {
            tokens,
            label,
            timestamp: None,
        });
    }
    Dataset::new(examples, labels)
}
