use std::collections::BTreeMap;

use crate::corpus::PAD_INDEX;
use crate::error::{Error, Result};
use crate::model::{softmax, ForwardTrace, ModelParams};

/// Weight and bias arrays shaped like one filter bank; reused for gradients
/// and optimizer accumulators.
#[derive(Debug, Clone, PartialEq)]
pub struct BankTensors {
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

/// Dense gradients for every parameter block, shaped exactly like
/// [`ModelParams`].
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    /// Flattened `(|V| + 2) x C`, PAD row always zero.
    pub embedding: Vec<f64>,
    pub banks: Vec<BankTensors>,
    pub dense_weights: Vec<f64>,
    pub dense_bias: Vec<f64>,
}

impl Gradients {
    pub fn zeros_like(params: &ModelParams) -> Gradients {
        Gradients {
            embedding: vec![0.0; params.embedding.values().len()],
            banks: params
                .banks
                .iter()
                .map(|b| BankTensors {
                    weights: vec![0.0; b.weights.len()],
                    bias: vec![0.0; b.bias.len()],
                })
                .collect(),
            dense_weights: vec![0.0; params.dense_weights.len()],
            dense_bias: vec![0.0; params.dense_bias.len()],
        }
    }

    pub fn zero(&mut self) {
        self.embedding.fill(0.0);
        for b in &mut self.banks {
            b.weights.fill(0.0);
            b.bias.fill(0.0);
        }
        self.dense_weights.fill(0.0);
        self.dense_bias.fill(0.0);
    }

    /// Adds `scale * eg` into this accumulator. The order of calls is the
    /// batch order, keeping reductions deterministic.
    pub fn add_example(&mut self, eg: &ExampleGradients, scale: f64, classes: usize) {
        for (row, g) in &eg.embedding_rows {
            let dst = &mut self.embedding[row * classes..(row + 1) * classes];
            for (d, v) in dst.iter_mut().zip(g) {
                *d += scale * v;
            }
        }
        for (dst, src) in self.banks.iter_mut().zip(&eg.banks) {
            for (d, v) in dst.weights.iter_mut().zip(&src.weights) {
                *d += scale * v;
            }
            for (d, v) in dst.bias.iter_mut().zip(&src.bias) {
                *d += scale * v;
            }
        }
        for (d, v) in self.dense_weights.iter_mut().zip(&eg.dense_weights) {
            *d += scale * v;
        }
        for (d, v) in self.dense_bias.iter_mut().zip(&eg.dense_bias) {
            *d += scale * v;
        }
    }
}

/// Per-example gradients. The embedding part is sparse: only rows of tokens
/// that occur in the example appear, sorted by row index, each accumulated
/// across repeated occurrences. The PAD row never appears.
#[derive(Debug, Clone, PartialEq)]
pub struct ExampleGradients {
    pub embedding_rows: Vec<(usize, Vec<f64>)>,
    pub banks: Vec<BankTensors>,
    pub dense_weights: Vec<f64>,
    pub dense_bias: Vec<f64>,
    /// Negative log-likelihood of the example under the traced forward pass.
    pub loss: f64,
}

/// Exact gradients of the negative log-likelihood for one example, derived
/// from a stored forward trace. Pooling routes gradient only to each
/// filter's recorded argmax window; dropout scales pass through as constants.
pub fn backward(params: &ModelParams, trace: &ForwardTrace, label: usize) -> Result<ExampleGradients> {
    let c = params.classes();
    if label >= c {
        return Err(Error::invalid(format!(
            "label {label} out of range for {c} classes"
        )));
    }
    if trace.feature_maps.len() != params.total_filters()
        || trace.sentence.len() != trace.n * c
        || trace.logits.len() != c
    {
        return Err(Error::invalid(
            "forward trace does not match the model it is replayed against",
        ));
    }

    let probs = softmax(&trace.logits);
    let loss = -crate::model::log_likelihood(&trace.logits, label);
    let mut dlogits = probs;
    dlogits[label] -= 1.0;

    let total = params.total_filters();
    let mut dense_weights = vec![0.0f64; total * c];
    let dense_bias = dlogits.clone();
    let mut dpooled = vec![0.0f64; total];
    for j in 0..total {
        let dropped = trace.pooled[j] * trace.dropout_scale[j];
        let w_row = &params.dense_weights[j * c..(j + 1) * c];
        let g_row = &mut dense_weights[j * c..(j + 1) * c];
        let mut acc = 0.0;
        for k in 0..c {
            g_row[k] = dropped * dlogits[k];
            acc += w_row[k] * dlogits[k];
        }
        dpooled[j] = acc * trace.dropout_scale[j];
    }

    let mut banks: Vec<BankTensors> = params
        .banks
        .iter()
        .map(|b| BankTensors {
            weights: vec![0.0; b.weights.len()],
            bias: vec![0.0; b.bias.len()],
        })
        .collect();
    let mut dsentence = vec![0.0f64; trace.sentence.len()];

    let mut j = 0;
    for (bank, grads) in params.banks.iter().zip(banks.iter_mut()) {
        let window_len = bank.width * c;
        for f in 0..bank.n_filters() {
            let y = trace.pooled[j];
            let g = dpooled[j] * params.activation.derivative_from_output(y);
            if g != 0.0 {
                let t_star = trace.argmax[j];
                let window = &trace.sentence[t_star * c..t_star * c + window_len];
                let w = &bank.weights[f * window_len..(f + 1) * window_len];
                let gw = &mut grads.weights[f * window_len..(f + 1) * window_len];
                let dwin = &mut dsentence[t_star * c..t_star * c + window_len];
                for k in 0..window_len {
                    gw[k] = g * window[k];
                    dwin[k] += g * w[k];
                }
                grads.bias[f] = g;
            }
            j += 1;
        }
    }

    let mut rows: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for (t, &idx) in trace.indices.iter().enumerate() {
        if idx == PAD_INDEX {
            continue;
        }
        let src = &dsentence[t * c..(t + 1) * c];
        if src.iter().all(|&v| v == 0.0) {
            continue;
        }
        let entry = rows.entry(idx).or_insert_with(|| vec![0.0; c]);
        for (e, v) in entry.iter_mut().zip(src) {
            *e += v;
        }
    }

    Ok(ExampleGradients {
        embedding_rows: rows.into_iter().collect(),
        banks,
        dense_weights,
        dense_bias,
        loss,
    })
}
