//! Reference implementations shared by the integration test targets. The
//! naive forward pass is written straight from the definitions, with
//! explicit double loops and no shared code with the library.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use score_embed::model::{
    forward, Activation, EmbeddingMatrix, ForwardMode, ModelParams, WidthBank,
};

pub struct NaiveOutput {
    pub sentence: Vec<Vec<f64>>,
    pub feature_maps: Vec<Vec<f64>>,
    pub pooled: Vec<f64>,
    pub argmax: Vec<usize>,
    pub logits: Vec<f64>,
}

fn naive_activation(a: Activation, x: f64) -> f64 {
    match a {
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

/// Reference forward pass in eval mode, built from nested index loops.
pub fn naive_forward(params: &ModelParams, indices: &[usize]) -> NaiveOutput {
    let c = params.classes();
    let n = indices.len();
    let mut sentence = Vec::with_capacity(n);
    for &ix in indices {
        let mut row = Vec::with_capacity(c);
        for j in 0..c {
            row.push(params.embedding.row(ix)[j]);
        }
        sentence.push(row);
    }

    let mut feature_maps = Vec::new();
    let mut pooled = Vec::new();
    let mut argmax = Vec::new();
    for bank in &params.banks {
        let h = bank.width;
        for f in 0..bank.n_filters() {
            let mut map = Vec::new();
            for t in 0..=(n - h) {
                let mut acc = bank.bias[f];
                for k in 0..h {
                    for j in 0..c {
                        let w = bank.weights[f * h * c + k * c + j];
                        acc += w * sentence[t + k][j];
                    }
                }
                map.push(naive_activation(params.activation, acc));
            }
            let mut best = f64::NEG_INFINITY;
            let mut pos = 0;
            for (t, &v) in map.iter().enumerate() {
                if v > best {
                    best = v;
                    pos = t;
                }
            }
            feature_maps.push(map);
            pooled.push(best);
            argmax.push(pos);
        }
    }

    let total = pooled.len();
    let mut logits = Vec::with_capacity(c);
    for j in 0..c {
        let mut acc = params.dense_bias[j];
        for (i, &p) in pooled.iter().enumerate().take(total) {
            acc += p * params.dense_weights[i * c + j];
        }
        logits.push(acc);
    }

    NaiveOutput {
        sentence,
        feature_maps,
        pooled,
        argmax,
        logits,
    }
}

/// A random small model: 2 to 5 classes, 1 to 3 distinct filter widths,
/// both activations, PAD row zeroed.
pub fn random_params(rng: &mut ChaCha8Rng) -> ModelParams {
    let c = rng.random_range(2..=5usize);
    let words = rng.random_range(3..=12usize);
    let n_rows = words + 2;
    let mut values = vec![0.0; n_rows * c];
    for v in values.iter_mut().skip(c) {
        *v = rng.random::<f64>() * 2.0 - 1.0;
    }
    let embedding = EmbeddingMatrix::new(values, n_rows, c);

    let n_widths = rng.random_range(1..=3usize);
    let mut widths: Vec<usize> = Vec::new();
    while widths.len() < n_widths {
        let w = rng.random_range(1..=4usize);
        if !widths.contains(&w) {
            widths.push(w);
        }
    }
    let filters = rng.random_range(1..=4usize);
    let banks: Vec<WidthBank> = widths
        .iter()
        .map(|&width| WidthBank {
            width,
            weights: (0..filters * width * c)
                .map(|_| rng.random::<f64>() * 2.0 - 1.0)
                .collect(),
            bias: (0..filters).map(|_| rng.random::<f64>() - 0.5).collect(),
        })
        .collect();

    let total = filters * widths.len();
    let activation = if rng.random::<bool>() {
        Activation::Relu
    } else {
        Activation::Tanh
    };
    ModelParams {
        embedding,
        banks,
        activation,
        dense_weights: (0..total * c)
            .map(|_| rng.random::<f64>() * 2.0 - 1.0)
            .collect(),
        dense_bias: (0..c).map(|_| rng.random::<f64>() - 0.5).collect(),
        dropout_rate: 0.0,
        seed: 0,
    }
}

/// Runs the library forward pass on one random case and compares every
/// intermediate against the naive reference at `tol`. Panics with `tag` in
/// the message on the first mismatch.
pub fn assert_forward_matches(
    params: &ModelParams,
    indices: &[usize],
    tol: f64,
    tag: &str,
) {
    let c = params.classes();
    let reference = naive_forward(params, indices);
    let (logits, trace) = forward(params, indices, ForwardMode::Eval).unwrap();

    for (t, row) in reference.sentence.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let got = trace.sentence[t * c + j];
            assert!(
                (got - v).abs() <= tol,
                "{tag}: sentence[{t}][{j}] {got} vs {v}"
            );
        }
    }
    assert_eq!(trace.feature_maps.len(), reference.feature_maps.len());
    for (i, map) in reference.feature_maps.iter().enumerate() {
        assert_eq!(trace.feature_maps[i].len(), map.len(), "{tag}: map {i}");
        for (t, &v) in map.iter().enumerate() {
            let got = trace.feature_maps[i][t];
            assert!(
                (got - v).abs() <= tol,
                "{tag}: map {i} position {t}: {got} vs {v}"
            );
        }
    }
    for (i, (&p, &a)) in reference.pooled.iter().zip(&reference.argmax).enumerate() {
        assert!((trace.pooled[i] - p).abs() <= tol, "{tag}: pooled {i}");
        assert_eq!(trace.argmax[i], a, "{tag}: argmax {i}");
    }
    for (j, &v) in reference.logits.iter().enumerate() {
        assert!(
            (logits[j] - v).abs() <= tol,
            "{tag}: logit {j}: {} vs {v}",
            logits[j]
        );
    }
}

/// Random sentence over the model's rows, never shorter than the widest
/// filter.
pub fn random_sentence(rng: &mut ChaCha8Rng, params: &ModelParams) -> Vec<usize> {
    let max_w = params.max_width();
    let n = rng.random_range(max_w..=max_w + 6);
    (0..n)
        .map(|_| rng.random_range(0..params.embedding.n_rows()))
        .collect()
}

/// Seeded generator matching the published oracle sweep.
pub fn oracle_rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xF0A2)
}
