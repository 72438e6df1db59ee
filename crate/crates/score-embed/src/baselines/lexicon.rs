use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Polarity classes of the counting rule, in label order negative(0),
/// neutral(1), positive(2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Negative,
    Neutral,
    Positive,
}

impl Polarity {
    pub fn as_label(self) -> usize {
        match self {
            Polarity::Negative => 0,
            Polarity::Neutral => 1,
            Polarity::Positive => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Polarity::Negative => "negative",
            Polarity::Neutral => "neutral",
            Polarity::Positive => "positive",
        }
    }
}

/// Two disjoint polarity word lists.
#[derive(Debug, Clone)]
pub struct Lexicon {
    positive: BTreeSet<String>,
    negative: BTreeSet<String>,
}

/// A loaded lexicon plus any words dropped for appearing in both lists.
#[derive(Debug)]
pub struct LexiconLoad {
    pub lexicon: Lexicon,
    pub dropped: Vec<String>,
}

fn read_word_list(path: &Path) -> Result<Vec<String>> {
    // These lists circulate in Latin-1; fall back when UTF-8 fails.
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let text = match String::from_utf8(bytes) {
        Ok(t) => t,
        Err(e) => e.into_bytes().iter().map(|&b| b as char).collect(),
    };
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with(';'))
        .map(|l| l.to_lowercase())
        .collect())
}

/// Loads positive and negative word lists, one word per line, `;` comment
/// lines skipped. A word on both lists is dropped from both and reported.
pub fn load_lexicon(positive_path: &Path, negative_path: &Path) -> Result<LexiconLoad> {
    let mut positive: BTreeSet<String> = read_word_list(positive_path)?.into_iter().collect();
    let mut negative: BTreeSet<String> = read_word_list(negative_path)?.into_iter().collect();
    let dropped: Vec<String> = positive.intersection(&negative).cloned().collect();
    for w in &dropped {
        positive.remove(w);
        negative.remove(w);
    }
    Ok(LexiconLoad {
        lexicon: Lexicon { positive, negative },
        dropped,
    })
}

impl Lexicon {
    pub fn new(positive: impl IntoIterator<Item = String>, negative: impl IntoIterator<Item = String>) -> Lexicon {
        Lexicon {
            positive: positive.into_iter().collect(),
            negative: negative.into_iter().collect(),
        }
    }

    pub fn n_positive(&self) -> usize {
        self.positive.len()
    }

    pub fn n_negative(&self) -> usize {
        self.negative.len()
    }

    /// The counting rule: more positive matches than negative is positive,
    /// fewer is negative, an exact tie (zero matches included) is neutral.
    pub fn classify(&self, tokens: &[String]) -> Polarity {
        let mut pos = 0usize;
        let mut neg = 0usize;
        for t in tokens {
            if self.positive.contains(t) {
                pos += 1;
            } else if self.negative.contains(t) {
                neg += 1;
            }
        }
        match pos.cmp(&neg) {
            std::cmp::Ordering::Greater => Polarity::Positive,
            std::cmp::Ordering::Less => Polarity::Negative,
            std::cmp::Ordering::Equal => Polarity::Neutral,
        }
    }
}
