//! Count-derived per-class word scores: every in-vocabulary word gets a
//! C-dimensional vector of class-conditional proportions, learned by counting
//! label-conditioned occurrences over the training split.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::corpus::{Dataset, Vocabulary, PAD_TOKEN, RESERVED};
use crate::error::{Error, Result};

/// What a word's per-class count counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMode {
    /// Every token occurrence contributes.
    TokenOccurrences,
    /// A word contributes at most once per document.
    DocumentFrequency,
}

/// How per-word vectors combine into one sentence feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    Mean,
    Sum,
}

/// Row-stochastic `|V| x C` table of word scores, plus the raw counts it
/// was derived from. Row `r` corresponds to vocabulary index `r + 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    scores: Vec<f64>,
    counts: Vec<u64>,
    vocab_size: usize,
    classes: usize,
    smoothing: f64,
    count_mode: CountMode,
}

impl ScoreTable {
    /// Learns scores by counting: score(w, c) = (count(w, c) + alpha) /
    /// (total(w) + C * alpha). A word with zero total count and zero
    /// smoothing gets the uniform row 1/C.
    pub fn learn(data: &Dataset, vocab: &Vocabulary, smoothing: f64, count_mode: CountMode) -> ScoreTable {
        let c = data.n_classes();
        let v = vocab.len();
        let mut counts = vec![0u64; v * c];
        let mut seen = HashSet::new();
        for ex in &data.examples {
            match count_mode {
                CountMode::TokenOccurrences => {
                    for tok in &ex.tokens {
                        if let Some(idx) = vocab.index_of(tok) {
                            counts[(idx - RESERVED) * c + ex.label] += 1;
                        }
                    }
                }
                CountMode::DocumentFrequency => {
                    seen.clear();
                    for tok in &ex.tokens {
                        if let Some(idx) = vocab.index_of(tok) {
                            if seen.insert(idx) {
                                counts[(idx - RESERVED) * c + ex.label] += 1;
                            }
                        }
                    }
                }
            }
        }
        let mut scores = vec![0.0f64; v * c];
        for w in 0..v {
            let row = &counts[w * c..(w + 1) * c];
            let total: u64 = row.iter().sum();
            let out = &mut scores[w * c..(w + 1) * c];
            if total == 0 && smoothing == 0.0 {
                out.fill(1.0 / c as f64);
            } else {
                let denom = total as f64 + c as f64 * smoothing;
                for (o, &n) in out.iter_mut().zip(row) {
                    *o = (n as f64 + smoothing) / denom;
                }
            }
        }
        ScoreTable {
            scores,
            counts,
            vocab_size: v,
            classes: c,
            smoothing,
            count_mode,
        }
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn smoothing(&self) -> f64 {
        self.smoothing
    }

    pub fn count_mode(&self) -> CountMode {
        self.count_mode
    }

    /// Score row for table row `r` (vocabulary index `r + 2`).
    pub fn row(&self, r: usize) -> &[f64] {
        &self.scores[r * self.classes..(r + 1) * self.classes]
    }

    /// Raw count row for table row `r`.
    pub fn count_row(&self, r: usize) -> &[u64] {
        &self.counts[r * self.classes..(r + 1) * self.classes]
    }

    /// Score vector for a token: its table row if in vocabulary, the uniform
    /// vector for unknown words, all zeros for the padding marker.
    pub fn word_score(&self, token: &str, vocab: &Vocabulary) -> Vec<f64> {
        if token == PAD_TOKEN {
            return vec![0.0; self.classes];
        }
        match vocab.index_of(token) {
            Some(idx) => self.row(idx - RESERVED).to_vec(),
            None => vec![1.0 / self.classes as f64; self.classes],
        }
    }

    /// Element-wise aggregation of word scores over non-PAD tokens.
    /// Errors when no token contributes.
    pub fn sentence_feature(
        &self,
        tokens: &[String],
        vocab: &Vocabulary,
        aggregation: Aggregation,
    ) -> Result<Vec<f64>> {
        let mut acc = vec![0.0f64; self.classes];
        let mut n = 0usize;
        for tok in tokens {
            if tok == PAD_TOKEN {
                continue;
            }
            let s = self.word_score(tok, vocab);
            for (a, v) in acc.iter_mut().zip(&s) {
                *a += v;
            }
            n += 1;
        }
        if n == 0 {
            return Err(Error::invalid(
                "cannot build a sentence feature from an empty token list",
            ));
        }
        if aggregation == Aggregation::Mean {
            for a in acc.iter_mut() {
                *a /= n as f64;
            }
        }
        Ok(acc)
    }

    /// Renders `word<TAB>score_0<TAB>...<TAB>score_{C-1}` lines. With
    /// `top_k`, each class in turn contributes its `k` highest-scoring
    /// words (ties broken by word, ascending), so a word strong in several
    /// classes appears once per class; otherwise every word appears in
    /// vocabulary order. Floats use the shortest representation that
    /// round-trips exactly.
    pub fn export(&self, vocab: &Vocabulary, top_k: Option<usize>) -> String {
        let rows: Vec<usize> = match top_k {
            None => (0..self.vocab_size).collect(),
            Some(k) => {
                let mut selected = Vec::new();
                for class in 0..self.classes {
                    let mut order: Vec<usize> = (0..self.vocab_size).collect();
                    order.sort_by(|&a, &b| {
                        self.row(b)[class]
                            .partial_cmp(&self.row(a)[class])
                            .unwrap()
                            .then_with(|| {
                                vocab.word_at(a + RESERVED).cmp(vocab.word_at(b + RESERVED))
                            })
                    });
                    selected.extend(order.into_iter().take(k));
                }
                selected
            }
        };
        let mut out = String::new();
        for r in rows {
            out.push_str(vocab.word_at(r + RESERVED));
            for s in self.row(r) {
                out.push('\t');
                out.push_str(&format!("{s}"));
            }
            out.push('\n');
        }
        out
    }

    /// Parses lines produced by [`export`] back into a table aligned to
    /// `vocab`. Lines starting with `# ` are comments (tokens are
    /// whitespace-free, so no word line can start that way). Every word
    /// line's word must be in the vocabulary and every vocabulary word must
    /// appear; raw counts are not recoverable and are left at zero.
    pub fn import(text: &str, vocab: &Vocabulary) -> Result<ScoreTable> {
        let v = vocab.len();
        let mut classes = None;
        let mut scores: Vec<Option<Vec<f64>>> = vec![None; v];
        for (lineno, line) in text.lines().enumerate() {
            let lineno = lineno + 1;
            if line.is_empty() || line.starts_with("# ") {
                continue;
            }
            let mut fields = line.split('\t');
            let word = fields.next().unwrap();
            let idx = vocab.index_of(word).ok_or_else(|| {
                Error::invalid(format!("line {lineno}: word `{word}` is not in the vocabulary"))
            })?;
            let values: Vec<f64> = fields
                .map(|f| {
                    f.parse::<f64>().map_err(|_| {
                        Error::invalid(format!("line {lineno}: bad score field `{f}`"))
                    })
                })
                .collect::<Result<_>>()?;
            if values.is_empty() {
                return Err(Error::invalid(format!("line {lineno}: no score fields")));
            }
            match classes {
                None => classes = Some(values.len()),
                Some(c) if c != values.len() => {
                    return Err(Error::invalid(format!(
                        "line {lineno}: expected {c} scores, got {}",
                        values.len()
                    )))
                }
                _ => {}
            }
            scores[idx - RESERVED] = Some(values);
        }
        let classes = classes.ok_or_else(|| Error::invalid("empty score file"))?;
        let mut flat = Vec::with_capacity(v * classes);
        for (r, row) in scores.into_iter().enumerate() {
            let row = row.ok_or_else(|| {
                Error::invalid(format!(
                    "vocabulary word `{}` is missing from the score file",
                    vocab.word_at(r + RESERVED)
                ))
            })?;
            flat.extend(row);
        }
        Ok(ScoreTable {
            scores: flat,
            counts: vec![0; v * classes],
            vocab_size: v,
            classes,
            smoothing: 0.0,
            count_mode: CountMode::TokenOccurrences,
        })
    }
}
