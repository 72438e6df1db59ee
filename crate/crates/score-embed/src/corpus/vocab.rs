use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::corpus::Dataset;

/// Index of the padding marker; its embedding row stays zero and is never
/// updated.
pub const PAD_INDEX: usize = 0;
/// Index of the unknown-word marker.
pub const UNK_INDEX: usize = 1;
/// Number of reserved indices preceding real words.
pub const RESERVED: usize = 2;

pub const PAD_TOKEN: &str = "<pad>";
pub const UNK_TOKEN: &str = "<unk>";

/// Frequency-ordered token index. Indices 0 and 1 are reserved for PAD and
/// UNK; real words occupy `2..len()+2`, ordered by descending training
/// frequency with lexicographic tie-break.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    word_to_index: HashMap<String, usize>,
    index_to_word: Vec<String>,
    counts: Vec<u64>,
}

impl Vocabulary {
    /// Builds a vocabulary from the training split, keeping words whose
    /// token frequency is at least `min_freq`.
    pub fn build(data: &Dataset, min_freq: u64) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::invalid("cannot build a vocabulary from an empty dataset"));
        }
        let mut freq: HashMap<&str, u64> = HashMap::new();
        for ex in data.examples.iter() {
            for tok in &ex.tokens {
                *freq.entry(tok.as_str()).or_insert(0) += 1;
            }
        }
        let mut kept: Vec<(&str, u64)> = freq
            .into_iter()
            .filter(|&(_, n)| n >= min_freq)
            .collect();
        kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));

        let words: Vec<String> = kept.iter().map(|(w, _)| w.to_string()).collect();
        let counts: Vec<u64> = kept.iter().map(|&(_, n)| n).collect();
        Ok(Self::from_parts(words, counts))
    }

    /// Reassembles a vocabulary from word/count lists in index order
    /// (as stored in a model file). Words must be unique.
    pub fn from_parts(words: Vec<String>, counts: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), counts.len());
        let mut index_to_word = Vec::with_capacity(words.len() + RESERVED);
        index_to_word.push(PAD_TOKEN.to_string());
        index_to_word.push(UNK_TOKEN.to_string());
        index_to_word.extend(words);
        let mut full_counts = vec![0u64, 0];
        full_counts.extend(counts);
        let word_to_index = index_to_word
            .iter()
            .enumerate()
            .skip(RESERVED)
            .map(|(i, w)| (w.clone(), i))
            .collect();
        Vocabulary {
            word_to_index,
            index_to_word,
            counts: full_counts,
        }
    }

    /// Number of real words, excluding the two reserved indices.
    pub fn len(&self) -> usize {
        self.index_to_word.len() - RESERVED
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Total number of embedding rows: `len() + 2`.
    pub fn n_rows(&self) -> usize {
        self.index_to_word.len()
    }

    /// Index of a real word, if present. The reserved markers are not
    /// looked up through here.
    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.word_to_index.get(token).copied()
    }

    pub fn word_at(&self, index: usize) -> &str {
        &self.index_to_word[index]
    }

    pub fn count_at(&self, index: usize) -> u64 {
        self.counts[index]
    }

    /// Real words with their indices, in index order.
    pub fn iter_words(&self) -> impl Iterator<Item = (usize, &str)> {
        self.index_to_word
            .iter()
            .enumerate()
            .skip(RESERVED)
            .map(|(i, w)| (i, w.as_str()))
    }

    /// Word and count lists in index order, for serialization.
    pub fn to_parts(&self) -> (Vec<String>, Vec<u64>) {
        (
            self.index_to_word[RESERVED..].to_vec(),
            self.counts[RESERVED..].to_vec(),
        )
    }

    /// Maps tokens to indices (unknown words to UNK) and right-pads with PAD
    /// up to `min_len`.
    pub fn encode(&self, tokens: &[String], min_len: usize) -> Vec<usize> {
        let mut out: Vec<usize> = tokens
            .iter()
            .map(|t| self.index_of(t).unwrap_or(UNK_INDEX))
            .collect();
        while out.len() < min_len {
            out.push(PAD_INDEX);
        }
        out
    }
}
