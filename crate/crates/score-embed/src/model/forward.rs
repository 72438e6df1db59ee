use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{embed_sentence, Activation, ModelParams};

/// Dropout behavior of a forward pass. Training mode draws one keep/drop
/// decision per pooled feature from the supplied generator; eval mode is the
/// identity (inverted dropout needs no rescaling at test time).
pub enum ForwardMode<'a> {
    Train(&'a mut ChaCha8Rng),
    Eval,
}

/// Everything the backward pass needs from a forward pass.
#[derive(Debug, Clone)]
pub struct ForwardTrace {
    pub indices: Vec<usize>,
    /// Flattened `n x C` sentence matrix.
    pub sentence: Vec<f64>,
    pub n: usize,
    /// Activated feature map per filter, banks in order, filters in order.
    pub feature_maps: Vec<Vec<f64>>,
    /// Position of the pooled maximum per filter (first occurrence).
    pub argmax: Vec<usize>,
    /// Pooled maxima before dropout.
    pub pooled: Vec<f64>,
    /// Per-feature dropout scale: 0 for dropped, 1/(1-rate) for kept, 1 in
    /// eval mode.
    pub dropout_scale: Vec<f64>,
    pub logits: Vec<f64>,
}

/// One convolution unit: activation(w . window + b).
pub fn conv_feature(weights: &[f64], bias: f64, activation: Activation, window: &[f64]) -> f64 {
    debug_assert_eq!(weights.len(), window.len());
    let mut acc = bias;
    for (w, x) in weights.iter().zip(window) {
        acc += w * x;
    }
    activation.apply(acc)
}

/// Slides one filter over the sentence matrix, producing the
/// `n - width + 1` activated responses.
pub fn feature_map(
    weights: &[f64],
    bias: f64,
    activation: Activation,
    sentence: &[f64],
    classes: usize,
    width: usize,
) -> Result<Vec<f64>> {
    debug_assert_eq!(sentence.len() % classes, 0);
    let n = sentence.len() / classes;
    if n < width {
        return Err(Error::invalid(format!(
            "sentence of {n} tokens is shorter than filter width {width}"
        )));
    }
    let window_len = width * classes;
    let mut map = Vec::with_capacity(n - width + 1);
    for t in 0..=(n - width) {
        let window = &sentence[t * classes..t * classes + window_len];
        map.push(conv_feature(weights, bias, activation, window));
    }
    Ok(map)
}

/// Maximum of a feature map and the position of its first occurrence.
pub fn max_over_time(map: &[f64]) -> Result<(f64, usize)> {
    if map.is_empty() {
        return Err(Error::invalid("cannot pool an empty feature map"));
    }
    let mut best = map[0];
    let mut pos = 0;
    for (t, &v) in map.iter().enumerate().skip(1) {
        if v > best {
            best = v;
            pos = t;
        }
    }
    Ok((best, pos))
}

/// Numerically stable softmax.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&z| (z - m).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// Log-probability of `label` under softmax(logits), via a stable
/// log-sum-exp.
pub fn log_likelihood(logits: &[f64], label: usize) -> f64 {
    let m = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lse = m + logits.iter().map(|&z| (z - m).exp()).sum::<f64>().ln();
    logits[label] - lse
}

/// Full forward pass: embed, convolve each filter, pool, apply dropout, and
/// project to class logits. Returns the logits with the trace the backward
/// pass consumes.
pub fn forward(
    params: &ModelParams,
    indices: &[usize],
    mode: ForwardMode,
) -> Result<(Vec<f64>, ForwardTrace)> {
    let c = params.classes();
    let sentence = embed_sentence(params, indices)?;
    let n = indices.len();

    let total = params.total_filters();
    let mut feature_maps = Vec::with_capacity(total);
    let mut argmax = Vec::with_capacity(total);
    let mut pooled = Vec::with_capacity(total);
    for bank in &params.banks {
        for f in 0..bank.n_filters() {
            let map = feature_map(
                bank.filter(f, c),
                bank.bias[f],
                params.activation,
                &sentence,
                c,
                bank.width,
            )?;
            let (mx, pos) = max_over_time(&map)?;
            feature_maps.push(map);
            argmax.push(pos);
            pooled.push(mx);
        }
    }

    let rate = params.dropout_rate;
    let dropout_scale: Vec<f64> = match mode {
        ForwardMode::Eval => vec![1.0; total],
        ForwardMode::Train(rng) => (0..total)
            .map(|_| {
                if rng.random::<f64>() < rate {
                    0.0
                } else {
                    1.0 / (1.0 - rate)
                }
            })
            .collect(),
    };

    let mut logits = params.dense_bias.clone();
    for (j, (&p, &s)) in pooled.iter().zip(&dropout_scale).enumerate() {
        let dropped = p * s;
        if dropped == 0.0 {
            continue;
        }
        let row = &params.dense_weights[j * c..(j + 1) * c];
        for (l, w) in logits.iter_mut().zip(row) {
            *l += dropped * w;
        }
    }

    let trace = ForwardTrace {
        indices: indices.to_vec(),
        sentence,
        n,
        feature_maps,
        argmax,
        pooled,
        dropout_scale,
        logits: logits.clone(),
    };
    Ok((logits, trace))
}
