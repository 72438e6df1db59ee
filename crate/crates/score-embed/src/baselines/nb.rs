use crate::corpus::{Dataset, Vocabulary, RESERVED};
use crate::error::{Error, Result};

/// Multinomial naive Bayes over vocabulary tokens with Laplace-smoothed
/// likelihoods. Out-of-vocabulary tokens are skipped at prediction time.
#[derive(Debug, Clone)]
pub struct NbModel {
    /// Log prior per class; `-inf` for classes absent from the training set.
    log_priors: Vec<f64>,
    /// `C x |V|` log likelihoods, class-major.
    log_likelihoods: Vec<f64>,
    vocab_size: usize,
    classes: usize,
    pub smoothing: f64,
}

/// Counts token occurrences per class and forms
/// p(w|c) = (count(w,c) + beta) / (total_c + beta * |V|).
pub fn train_nb(data: &Dataset, vocab: &Vocabulary, smoothing: f64) -> Result<NbModel> {
    if data.is_empty() {
        return Err(Error::invalid("cannot train naive Bayes on an empty dataset"));
    }
    if !(smoothing.is_finite() && smoothing > 0.0) {
        return Err(Error::invalid(format!(
            "naive Bayes smoothing must be positive, got {smoothing}"
        )));
    }
    let c = data.n_classes();
    let v = vocab.len();
    let mut word_counts = vec![0u64; c * v];
    let mut class_tokens = vec![0u64; c];
    let mut class_docs = vec![0u64; c];
    for ex in &data.examples {
        class_docs[ex.label] += 1;
        for tok in &ex.tokens {
            if let Some(idx) = vocab.index_of(tok) {
                word_counts[ex.label * v + (idx - RESERVED)] += 1;
                class_tokens[ex.label] += 1;
            }
        }
    }
    let n = data.len() as f64;
    let log_priors: Vec<f64> = class_docs
        .iter()
        .map(|&d| (d as f64 / n).ln())
        .collect();
    let mut log_likelihoods = vec![0.0f64; c * v];
    for class in 0..c {
        let denom = class_tokens[class] as f64 + smoothing * v as f64;
        for w in 0..v {
            log_likelihoods[class * v + w] =
                ((word_counts[class * v + w] as f64 + smoothing) / denom).ln();
        }
    }
    Ok(NbModel {
        log_priors,
        log_likelihoods,
        vocab_size: v,
        classes: c,
        smoothing,
    })
}

impl NbModel {
    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn log_prior(&self, class: usize) -> f64 {
        self.log_priors[class]
    }

    pub fn log_likelihood(&self, class: usize, word_row: usize) -> f64 {
        self.log_likelihoods[class * self.vocab_size + word_row]
    }

    /// Log-posterior of each class, up to the shared evidence constant.
    pub fn log_posteriors(&self, tokens: &[String], vocab: &Vocabulary) -> Vec<f64> {
        let mut scores = self.log_priors.clone();
        for tok in tokens {
            if let Some(idx) = vocab.index_of(tok) {
                let w = idx - RESERVED;
                for (class, s) in scores.iter_mut().enumerate() {
                    *s += self.log_likelihoods[class * self.vocab_size + w];
                }
            }
        }
        scores
    }

    /// Most probable class; ties break to the lowest index. A document with
    /// no in-vocabulary tokens falls back to the prior argmax.
    pub fn predict(&self, tokens: &[String], vocab: &Vocabulary) -> usize {
        let scores = self.log_posteriors(tokens, vocab);
        let mut best = 0;
        for class in 1..self.classes {
            if scores[class] > scores[best] {
                best = class;
            }
        }
        best
    }
}
