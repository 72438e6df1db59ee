//! The score-embedding classifier: the score table becomes a trainable
//! C-dimensional word embedding feeding a one-layer convolutional net with
//! max-over-time pooling and a softmax output.

mod backward;
mod check;
mod forward;

pub use backward::{backward, BankTensors, ExampleGradients, Gradients};
pub use check::{fd_well_conditioned, grad_check, relative_error};
pub use forward::{
    conv_feature, feature_map, forward, log_likelihood, max_over_time, softmax, ForwardMode,
    ForwardTrace,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Vocabulary, PAD_INDEX, RESERVED, UNK_INDEX};
use crate::error::{Error, Result};
use crate::scorerep::ScoreTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Relu,
    Tanh,
}

impl Activation {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Relu => {
                if x > 0.0 {
                    x
                } else {
                    0.0
                }
            }
            Activation::Tanh => x.tanh(),
        }
    }

    /// Derivative expressed through the activation output `y = a(x)`.
    pub fn derivative_from_output(self, y: f64) -> f64 {
        match self {
            Activation::Relu => {
                if y > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Tanh => 1.0 - y * y,
        }
    }
}

/// `(|V| + 2) x C` trainable word representation. Row 0 is the PAD row and
/// stays identically zero through init and every update.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    values: Vec<f64>,
    n_rows: usize,
    classes: usize,
}

impl EmbeddingMatrix {
    pub fn new(values: Vec<f64>, n_rows: usize, classes: usize) -> Self {
        debug_assert_eq!(values.len(), n_rows * classes);
        EmbeddingMatrix {
            values,
            n_rows,
            classes,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.values[r * self.classes..(r + 1) * self.classes]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.values[r * self.classes..(r + 1) * self.classes]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }
}

/// All filters of one width: `filters` is `F x (width * C)` row-major, with
/// one bias per filter.
#[derive(Debug, Clone, PartialEq)]
pub struct WidthBank {
    pub width: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl WidthBank {
    pub fn n_filters(&self) -> usize {
        self.bias.len()
    }

    pub fn window_len(&self, classes: usize) -> usize {
        self.width * classes
    }

    pub fn filter(&self, f: usize, classes: usize) -> &[f64] {
        let w = self.window_len(classes);
        &self.weights[f * w..(f + 1) * w]
    }
}

/// Full parameter set of the classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub embedding: EmbeddingMatrix,
    pub banks: Vec<WidthBank>,
    pub activation: Activation,
    /// Output layer: `total_filters x C` weights plus one bias per class.
    pub dense_weights: Vec<f64>,
    pub dense_bias: Vec<f64>,
    pub dropout_rate: f64,
    pub seed: u64,
}

impl ModelParams {
    pub fn classes(&self) -> usize {
        self.embedding.classes()
    }

    pub fn total_filters(&self) -> usize {
        self.banks.iter().map(|b| b.n_filters()).sum()
    }

    pub fn max_width(&self) -> usize {
        self.banks.iter().map(|b| b.width).max().unwrap_or(1)
    }

    /// Checks every structural invariant a well-formed parameter set must
    /// satisfy; used after deserialization.
    pub fn validate(&self) -> Result<()> {
        let c = self.classes();
        if c < 2 {
            return Err(Error::invalid(format!("model has {c} classes, need at least 2")));
        }
        if self.embedding.row(PAD_INDEX).iter().any(|&v| v != 0.0) {
            return Err(Error::invalid("PAD embedding row is not all zero"));
        }
        if !self.embedding.values().iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("embedding contains non-finite values"));
        }
        if self.banks.is_empty() {
            return Err(Error::invalid("model has no filter banks"));
        }
        for bank in &self.banks {
            if bank.width == 0 {
                return Err(Error::invalid("filter width 0"));
            }
            if bank.weights.len() != bank.n_filters() * bank.width * c {
                return Err(Error::invalid(format!(
                    "width-{} bank has {} weights for {} filters",
                    bank.width,
                    bank.weights.len(),
                    bank.n_filters()
                )));
            }
            if !bank.weights.iter().chain(bank.bias.iter()).all(|v| v.is_finite()) {
                return Err(Error::invalid("conv parameters contain non-finite values"));
            }
        }
        if self.dense_weights.len() != self.total_filters() * c || self.dense_bias.len() != c {
            return Err(Error::invalid("dense layer dimensions are inconsistent"));
        }
        if !self
            .dense_weights
            .iter()
            .chain(self.dense_bias.iter())
            .all(|v| v.is_finite())
        {
            return Err(Error::invalid("dense parameters contain non-finite values"));
        }
        if !(0.0..1.0).contains(&self.dropout_rate) {
            return Err(Error::invalid(format!(
                "dropout rate {} outside [0, 1)",
                self.dropout_rate
            )));
        }
        Ok(())
    }
}

/// Architecture knobs consumed by [`init_params`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub widths: Vec<usize>,
    pub filters_per_width: usize,
    pub activation: Activation,
    pub dropout_rate: f64,
    pub seed: u64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            widths: vec![3, 4, 5],
            filters_per_width: 128,
            activation: Activation::Relu,
            dropout_rate: 0.5,
            seed: 42,
        }
    }
}

fn glorot_bound(fan_in: usize, fan_out: usize) -> f64 {
    (6.0 / (fan_in + fan_out) as f64).sqrt()
}

fn sample_uniform(rng: &mut ChaCha8Rng, bound: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| (rng.random::<f64>() * 2.0 - 1.0) * bound)
        .collect()
}

/// Builds initial parameters: the embedding starts from the score table
/// (PAD row zero, UNK row uniform), conv and dense weights draw from
/// symmetric uniform ranges scaled by their fan sizes, and biases start at
/// zero. The same seed always produces the same parameters.
pub fn init_params(table: &ScoreTable, vocab: &Vocabulary, config: &ModelConfig) -> Result<ModelParams> {
    let c = table.classes();
    if table.vocab_size() != vocab.len() {
        return Err(Error::invalid(format!(
            "score table covers {} words but the vocabulary has {}",
            table.vocab_size(),
            vocab.len()
        )));
    }
    if config.widths.is_empty() {
        return Err(Error::invalid("at least one filter width is required"));
    }
    if config.widths.iter().any(|&w| w == 0) {
        return Err(Error::invalid("filter widths must be positive"));
    }
    if config.filters_per_width == 0 {
        return Err(Error::invalid("filters_per_width must be positive"));
    }
    if !(0.0..1.0).contains(&config.dropout_rate) {
        return Err(Error::invalid(format!(
            "dropout rate {} outside [0, 1)",
            config.dropout_rate
        )));
    }

    let n_rows = vocab.n_rows();
    let mut values = vec![0.0f64; n_rows * c];
    values[UNK_INDEX * c..(UNK_INDEX + 1) * c].fill(1.0 / c as f64);
    for r in 0..table.vocab_size() {
        values[(r + RESERVED) * c..(r + RESERVED + 1) * c].copy_from_slice(table.row(r));
    }
    let embedding = EmbeddingMatrix::new(values, n_rows, c);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let f = config.filters_per_width;
    let mut banks = Vec::with_capacity(config.widths.len());
    for &width in &config.widths {
        let bound = glorot_bound(c * width, f * width);
        banks.push(WidthBank {
            width,
            weights: sample_uniform(&mut rng, bound, f * width * c),
            bias: vec![0.0; f],
        });
    }
    let total = f * config.widths.len();
    let dense_bound = glorot_bound(total, c);
    let dense_weights = sample_uniform(&mut rng, dense_bound, total * c);

    Ok(ModelParams {
        embedding,
        banks,
        activation: config.activation,
        dense_weights,
        dense_bias: vec![0.0; c],
        dropout_rate: config.dropout_rate,
        seed: config.seed,
    })
}

/// Looks up embedding rows for an index sequence, producing the flattened
/// `n x C` sentence matrix.
pub fn embed_sentence(params: &ModelParams, indices: &[usize]) -> Result<Vec<f64>> {
    let c = params.classes();
    let mut out = Vec::with_capacity(indices.len() * c);
    for &idx in indices {
        if idx >= params.embedding.n_rows() {
            return Err(Error::invalid(format!(
                "token index {idx} out of range for {} embedding rows",
                params.embedding.n_rows()
            )));
        }
        out.extend_from_slice(params.embedding.row(idx));
    }
    Ok(out)
}

#[cfg(test)]
pub(crate) fn tiny_fixture(seed: u64) -> (ModelParams, Vocabulary) {
    use crate::corpus::{Dataset, Example, LabelSet};
    use crate::scorerep::CountMode;

    let labels = LabelSet::new(vec!["a".into(), "b".into(), "c".into()]).unwrap();
    let mk = |text: &str, label| Example {
        tokens: text.split_whitespace().map(String::from).collect(),
        label,
        timestamp: None,
    };
    let data = Dataset::new(
        vec![
            mk("red red blue", 0),
            mk("blue green", 1),
            mk("green gold red", 2),
            mk("gold gold", 1),
        ],
        labels,
    )
    .unwrap();
    let vocab = Vocabulary::build(&data, 1).unwrap();
    let table = ScoreTable::learn(&data, &vocab, 0.5, CountMode::TokenOccurrences);
    let config = ModelConfig {
        widths: vec![2, 3],
        filters_per_width: 2,
        activation: Activation::Relu,
        dropout_rate: 0.5,
        seed,
    };
    let params = init_params(&table, &vocab, &config).unwrap();
    (params, vocab)
}
