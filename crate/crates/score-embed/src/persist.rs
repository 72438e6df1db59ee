//! Model serialization: one self-describing JSON document carrying the
//! format version, the fully resolved training configuration, the label set,
//! the vocabulary, and every parameter array. Writes are atomic
//! (temp file + rename) and byte-deterministic for identical models.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{LabelSet, Vocabulary, PAD_INDEX};
use crate::error::{Error, Result};
use crate::model::{EmbeddingMatrix, ModelParams, WidthBank};
use crate::optim::TrainConfig;

pub const MODEL_FORMAT_VERSION: &str = "score-embed/1";

#[derive(Debug, Serialize, Deserialize)]
struct StoredVocabulary {
    words: Vec<String>,
    counts: Vec<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct StoredFilter {
    weights: Vec<f64>,
    bias: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct StoredBank {
    width: usize,
    filters: Vec<StoredFilter>,
}

#[derive(Debug, Serialize, Deserialize)]
struct StoredParams {
    embedding: Vec<Vec<f64>>,
    banks: Vec<StoredBank>,
    dense_weights: Vec<Vec<f64>>,
    dense_bias: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    version: String,
    config: TrainConfig,
    labels: Vec<String>,
    vocabulary: StoredVocabulary,
    params: StoredParams,
}

/// A deserialized model with everything needed to run it.
#[derive(Debug)]
pub struct LoadedModel {
    pub params: ModelParams,
    pub vocab: Vocabulary,
    pub labels: LabelSet,
    pub config: TrainConfig,
}

/// Serializes a model to `path` atomically: the document is written to a
/// sibling temp file and renamed into place, so a crash never leaves a
/// truncated model behind.
pub fn save_model(
    path: &Path,
    params: &ModelParams,
    vocab: &Vocabulary,
    labels: &LabelSet,
    config: &TrainConfig,
) -> Result<()> {
    params.validate()?;
    let c = params.classes();
    if labels.len() != c {
        return Err(Error::invalid(format!(
            "label set has {} classes but the model has {c}",
            labels.len()
        )));
    }
    if vocab.n_rows() != params.embedding.n_rows() {
        return Err(Error::invalid(format!(
            "vocabulary has {} rows but the embedding has {}",
            vocab.n_rows(),
            params.embedding.n_rows()
        )));
    }
    if params.activation != config.activation
        || params.dropout_rate != config.dropout_rate
        || params.seed != config.seed
    {
        return Err(Error::invalid(
            "model parameters disagree with the training configuration being saved".to_string(),
        ));
    }
    let (words, counts) = vocab.to_parts();
    let embedding: Vec<Vec<f64>> = (0..params.embedding.n_rows())
        .map(|r| params.embedding.row(r).to_vec())
        .collect();
    let banks: Vec<StoredBank> = params
        .banks
        .iter()
        .map(|bank| StoredBank {
            width: bank.width,
            filters: (0..bank.n_filters())
                .map(|f| StoredFilter {
                    weights: bank.filter(f, c).to_vec(),
                    bias: bank.bias[f],
                })
                .collect(),
        })
        .collect();
    let dense_weights: Vec<Vec<f64>> = (0..params.total_filters())
        .map(|j| params.dense_weights[j * c..(j + 1) * c].to_vec())
        .collect();
    let doc = ModelFile {
        version: MODEL_FORMAT_VERSION.to_string(),
        config: config.clone(),
        labels: labels.names().to_vec(),
        vocabulary: StoredVocabulary { words, counts },
        params: StoredParams {
            embedding,
            banks,
            dense_weights,
            dense_bias: params.dense_bias.clone(),
        },
    };
    let mut text = serde_json::to_string_pretty(&doc)
        .map_err(|e| Error::invalid(format!("model serialization failed: {e}")))?;
    text.push('\n');

    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, text.as_bytes()).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Loads and validates a model file: version first, then every shape and
/// parameter invariant (dimensions, finite values, zero PAD row, dropout
/// range).
pub fn load_model(path: &Path) -> Result<LoadedModel> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let doc: ModelFile = serde_json::from_str(&text)
        .map_err(|e| Error::model_file(path, format!("not a valid model document: {e}")))?;
    if doc.version != MODEL_FORMAT_VERSION {
        return Err(Error::model_file(
            path,
            format!(
                "unsupported format version `{}`, expected `{MODEL_FORMAT_VERSION}`",
                doc.version
            ),
        ));
    }
    let labels = LabelSet::new(doc.labels).map_err(|e| Error::model_file(path, e.to_string()))?;
    let c = labels.len();
    if doc.vocabulary.words.len() != doc.vocabulary.counts.len() {
        return Err(Error::model_file(path, "vocabulary words and counts differ in length"));
    }
    let vocab = Vocabulary::from_parts(doc.vocabulary.words, doc.vocabulary.counts);

    if doc.params.embedding.len() != vocab.n_rows() {
        return Err(Error::model_file(
            path,
            format!(
                "embedding has {} rows, vocabulary implies {}",
                doc.params.embedding.len(),
                vocab.n_rows()
            ),
        ));
    }
    let mut values = Vec::with_capacity(vocab.n_rows() * c);
    for (r, row) in doc.params.embedding.iter().enumerate() {
        if row.len() != c {
            return Err(Error::model_file(
                path,
                format!("embedding row {r} has {} values, expected {c}", row.len()),
            ));
        }
        values.extend_from_slice(row);
    }
    let embedding = EmbeddingMatrix::new(values, vocab.n_rows(), c);

    let mut banks = Vec::with_capacity(doc.params.banks.len());
    for stored in &doc.params.banks {
        let mut weights = Vec::new();
        let mut bias = Vec::new();
        for (f, filt) in stored.filters.iter().enumerate() {
            if filt.weights.len() != stored.width * c {
                return Err(Error::model_file(
                    path,
                    format!(
                        "width-{} filter {f} has {} weights, expected {}",
                        stored.width,
                        filt.weights.len(),
                        stored.width * c
                    ),
                ));
            }
            weights.extend_from_slice(&filt.weights);
            bias.push(filt.bias);
        }
        banks.push(WidthBank {
            width: stored.width,
            weights,
            bias,
        });
    }

    let total: usize = banks.iter().map(|b| b.n_filters()).sum();
    if doc.params.dense_weights.len() != total {
        return Err(Error::model_file(
            path,
            format!(
                "dense layer has {} weight rows, expected {total}",
                doc.params.dense_weights.len()
            ),
        ));
    }
    let mut dense_weights = Vec::with_capacity(total * c);
    for (j, row) in doc.params.dense_weights.iter().enumerate() {
        if row.len() != c {
            return Err(Error::model_file(
                path,
                format!("dense row {j} has {} values, expected {c}", row.len()),
            ));
        }
        dense_weights.extend_from_slice(row);
    }

    let params = ModelParams {
        embedding,
        banks,
        activation: doc.config.activation,
        dense_weights,
        dense_bias: doc.params.dense_bias,
        dropout_rate: doc.config.dropout_rate,
        seed: doc.config.seed,
    };
    params.validate().map_err(|e| Error::model_file(path, e.to_string()))?;
    if params.embedding.row(PAD_INDEX).iter().any(|&v| v != 0.0) {
        return Err(Error::model_file(path, "PAD embedding row is not zero"));
    }
    doc.config
        .validate()
        .map_err(|e| Error::model_file(path, format!("stored config invalid: {e}")))?;
    Ok(LoadedModel {
        params,
        vocab,
        labels,
        config: doc.config,
    })
}
