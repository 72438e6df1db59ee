//! AdaGrad optimization, the mini-batch training loop, evaluation metrics,
//! and cross-validation.

mod cv;
mod metrics;

pub use cv::{cross_validate, CvReport, FoldResult};
pub use metrics::{cohen_kappa, evaluate, predict_label, Metrics};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Dataset, Vocabulary, PAD_INDEX};
use crate::error::{Error, Result};
use crate::model::{
    backward, forward, init_params, Activation, BankTensors, ForwardMode, Gradients, ModelConfig,
    ModelParams,
};
use crate::par;
use crate::scorerep::{Aggregation, CountMode, ScoreTable};

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Derives an independent stream seed from a base seed, a stream tag, and a
/// position, so shuffling, dropout, and splitting never share state.
pub(crate) fn derive_seed(base: u64, stream: u64, position: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(base) ^ stream) ^ position)
}

const STREAM_SHUFFLE: u64 = 1;
const STREAM_DROPOUT: u64 = 2;
const STREAM_SPLIT: u64 = 3;

/// Per-element squared-gradient accumulators plus the step hyperparameters.
#[derive(Debug, Clone)]
pub struct AdaGradState {
    pub embedding: Vec<f64>,
    pub banks: Vec<BankTensors>,
    pub dense_weights: Vec<f64>,
    pub dense_bias: Vec<f64>,
    pub lr: f64,
    pub epsilon: f64,
}

impl AdaGradState {
    pub fn new(params: &ModelParams, lr: f64, epsilon: f64) -> AdaGradState {
        AdaGradState {
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
            lr,
            epsilon,
        }
    }
}

fn apply_block(theta: &mut [f64], accum: &mut [f64], grad: &[f64], lr: f64, eps: f64) {
    for ((t, a), &g) in theta.iter_mut().zip(accum.iter_mut()).zip(grad) {
        if g == 0.0 {
            continue;
        }
        *a += g * g;
        *t -= lr * g / (a.sqrt() + eps);
    }
}

fn check_finite(block: &str, grad: &[f64]) -> Result<()> {
    if grad.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite {
            what: "gradient",
            block: block.to_string(),
        })
    }
}

/// One AdaGrad step: per element, the squared gradient joins the accumulator
/// and the parameter moves by `lr * g / (sqrt(G) + eps)`. Elements with zero
/// gradient are untouched, accumulator included, so sparse batches only pay
/// for what they touched. The PAD embedding row never moves. A non-finite
/// gradient aborts before any parameter changes, naming the offending block.
pub fn adagrad_update(
    state: &mut AdaGradState,
    params: &mut ModelParams,
    grads: &Gradients,
) -> Result<()> {
    check_finite("embedding", &grads.embedding)?;
    for (i, bank) in grads.banks.iter().enumerate() {
        check_finite(&format!("conv bank {i} weights"), &bank.weights)?;
        check_finite(&format!("conv bank {i} bias"), &bank.bias)?;
    }
    check_finite("dense weights", &grads.dense_weights)?;
    check_finite("dense bias", &grads.dense_bias)?;

    let c = params.classes();
    let pad_end = (PAD_INDEX + 1) * c;
    apply_block(
        &mut params.embedding.values_mut()[pad_end..],
        &mut state.embedding[pad_end..],
        &grads.embedding[pad_end..],
        state.lr,
        state.epsilon,
    );
    for ((bank, accum), grad) in params
        .banks
        .iter_mut()
        .zip(state.banks.iter_mut())
        .zip(&grads.banks)
    {
        apply_block(&mut bank.weights, &mut accum.weights, &grad.weights, state.lr, state.epsilon);
        apply_block(&mut bank.bias, &mut accum.bias, &grad.bias, state.lr, state.epsilon);
    }
    apply_block(
        &mut params.dense_weights,
        &mut state.dense_weights,
        &grads.dense_weights,
        state.lr,
        state.epsilon,
    );
    apply_block(
        &mut params.dense_bias,
        &mut state.dense_bias,
        &grads.dense_bias,
        state.lr,
        state.epsilon,
    );
    Ok(())
}

/// Everything a training run needs beyond the data itself. Defaults follow
/// the standard recipe: lr 0.05, eps 1e-8, batches of 50, 25 epochs,
/// dropout 0.5, patience 5.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub lr: f64,
    pub epsilon: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub dropout_rate: f64,
    pub seed: u64,
    pub min_freq: u64,
    pub smoothing: f64,
    pub count_mode: CountMode,
    pub aggregation: Aggregation,
    pub widths: Vec<usize>,
    pub filters_per_width: usize,
    pub activation: Activation,
    pub dev_fraction: f64,
    pub patience: usize,
    pub min_len: usize,
    pub twitter_normalize: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            lr: 0.05,
            epsilon: 1e-8,
            batch_size: 50,
            epochs: 25,
            dropout_rate: 0.5,
            seed: 42,
            min_freq: 1,
            smoothing: 0.0,
            count_mode: CountMode::TokenOccurrences,
            aggregation: Aggregation::Mean,
            widths: vec![3, 4, 5],
            filters_per_width: 128,
            activation: Activation::Relu,
            dev_fraction: 0.1,
            patience: 5,
            min_len: 5,
            twitter_normalize: false,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lr.is_finite() && self.lr > 0.0) {
            return Err(Error::invalid(format!("learning rate {} must be positive", self.lr)));
        }
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return Err(Error::invalid("epsilon must be non-negative"));
        }
        if self.batch_size == 0 {
            return Err(Error::invalid("batch size must be at least 1"));
        }
        if self.epochs == 0 {
            return Err(Error::invalid("epoch count must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.dropout_rate) {
            return Err(Error::invalid(format!(
                "dropout rate {} outside [0, 1)",
                self.dropout_rate
            )));
        }
        if !(self.smoothing.is_finite() && self.smoothing >= 0.0) {
            return Err(Error::invalid("smoothing must be non-negative"));
        }
        if self.widths.is_empty() || self.widths.iter().any(|&w| w == 0) {
            return Err(Error::invalid("filter widths must be a non-empty list of positive sizes"));
        }
        if self.filters_per_width == 0 {
            return Err(Error::invalid("filters_per_width must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.dev_fraction) {
            return Err(Error::invalid(format!(
                "dev fraction {} outside [0, 1)",
                self.dev_fraction
            )));
        }
        if self.patience == 0 {
            return Err(Error::invalid("patience must be at least 1"));
        }
        Ok(())
    }

    pub fn model_config(&self) -> ModelConfig {
        ModelConfig {
            widths: self.widths.clone(),
            filters_per_width: self.filters_per_width,
            activation: self.activation,
            dropout_rate: self.dropout_rate,
            seed: self.seed,
        }
    }

    /// Padding length actually used: never below the widest filter.
    pub fn effective_min_len(&self) -> usize {
        self.min_len.max(self.widths.iter().copied().max().unwrap_or(1))
    }
}

/// One row of the training history.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_loss: f64,
    pub dev_accuracy: f64,
}

/// A trained model with its per-epoch history and the epoch whose dev
/// accuracy won.
#[derive(Debug)]
pub struct TrainOutcome {
    pub params: ModelParams,
    pub history: Vec<EpochStats>,
    pub best_epoch: usize,
}

/// Renders the history as `epoch,train_loss,dev_accuracy` CSV.
pub fn history_csv(history: &[EpochStats]) -> String {
    let mut out = String::from("epoch,train_loss,dev_accuracy\n");
    for row in history {
        out.push_str(&format!("{},{},{}\n", row.epoch, row.train_loss, row.dev_accuracy));
    }
    out
}

/// One example prepared for the gradient kernel: encoded indices, the label,
/// and the seed of its private dropout stream.
#[derive(Debug, Clone)]
pub struct BatchItem {
    pub indices: Vec<usize>,
    pub label: usize,
    pub dropout_seed: u64,
}

/// Computes mean gradients and mean loss over one batch. Per-example work
/// runs data-parallel; the reduction happens sequentially in batch order, so
/// the result does not depend on the thread count.
pub fn batch_gradients(params: &ModelParams, items: &[BatchItem]) -> Result<(Gradients, f64)> {
    let results = par::map_ordered(items, |_, item| {
        let mut rng = ChaCha8Rng::seed_from_u64(item.dropout_seed);
        let (_, trace) = forward(params, &item.indices, ForwardMode::Train(&mut rng))?;
        backward(params, &trace, item.label)
    });
    let mut grads = Gradients::zeros_like(params);
    let mut loss_sum = 0.0;
    let scale = 1.0 / items.len() as f64;
    let c = params.classes();
    for result in results {
        let eg = result?;
        grads.add_example(&eg, scale, c);
        loss_sum += eg.loss;
    }
    Ok((grads, loss_sum * scale))
}

/// Sequential twin of [`batch_gradients`]; the benches race the two lanes.
pub fn batch_gradients_seq(params: &ModelParams, items: &[BatchItem]) -> Result<(Gradients, f64)> {
    let results = par::map_ordered_seq(items, |_, item| {
        let mut rng = ChaCha8Rng::seed_from_u64(item.dropout_seed);
        let (_, trace) = forward(params, &item.indices, ForwardMode::Train(&mut rng))?;
        backward(params, &trace, item.label)
    });
    let mut grads = Gradients::zeros_like(params);
    let mut loss_sum = 0.0;
    let scale = 1.0 / items.len() as f64;
    let c = params.classes();
    for result in results {
        let eg = result?;
        grads.add_example(&eg, scale, c);
        loss_sum += eg.loss;
    }
    Ok((grads, loss_sum * scale))
}

/// Trains a score-embedding classifier: scores seed the embedding, then
/// mini-batch AdaGrad fine-tunes everything against the negative
/// log-likelihood, keeping the parameters of the best dev-accuracy epoch.
///
/// Identical inputs and config produce identical outcomes, for any thread
/// count: the epoch shuffle advances one dedicated generator, and every
/// example's dropout stream is derived from (seed, epoch, example index)
/// rather than from shared mutable state.
pub fn train(
    train_data: &Dataset,
    dev_data: &Dataset,
    table: &ScoreTable,
    vocab: &Vocabulary,
    config: &TrainConfig,
) -> Result<TrainOutcome> {
    config.validate()?;
    if train_data.is_empty() {
        return Err(Error::invalid("cannot train on an empty dataset"));
    }
    if dev_data.is_empty() {
        return Err(Error::invalid("cannot early-stop against an empty dev set"));
    }
    let min_len = config.effective_min_len();
    let encoded: Vec<Vec<usize>> = train_data
        .examples
        .iter()
        .map(|ex| vocab.encode(&ex.tokens, min_len))
        .collect();

    let mut params = init_params(table, vocab, &config.model_config())?;
    let mut state = AdaGradState::new(&params, config.lr, config.epsilon);
    let mut shuffle_rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, STREAM_SHUFFLE, 0));
    let mut order: Vec<usize> = (0..train_data.len()).collect();

    let mut history = Vec::with_capacity(config.epochs);
    let mut best_params = params.clone();
    let mut best_acc = f64::NEG_INFINITY;
    let mut best_epoch = 0;
    let mut stale = 0;

    for epoch in 1..=config.epochs {
        order.shuffle(&mut shuffle_rng);
        let mut loss_sum = 0.0;
        for (batch_no, batch) in order.chunks(config.batch_size).enumerate() {
            let items: Vec<BatchItem> = batch
                .iter()
                .map(|&i| BatchItem {
                    indices: encoded[i].clone(),
                    label: train_data.examples[i].label,
                    dropout_seed: derive_seed(
                        config.seed,
                        STREAM_DROPOUT,
                        ((epoch as u64) << 40) | i as u64,
                    ),
                })
                .collect();
            let (grads, batch_loss) = batch_gradients(&params, &items)?;
            if !batch_loss.is_finite() {
                return Err(Error::Diverged {
                    epoch,
                    batch: batch_no,
                    msg: format!("batch loss became {batch_loss}"),
                });
            }
            loss_sum += batch_loss * batch.len() as f64;
            adagrad_update(&mut state, &mut params, &grads)?;
        }
        let train_loss = loss_sum / train_data.len() as f64;
        let dev_metrics = evaluate(&params, dev_data, vocab, min_len)?;
        history.push(EpochStats {
            epoch,
            train_loss,
            dev_accuracy: dev_metrics.accuracy,
        });
        if dev_metrics.accuracy > best_acc {
            best_acc = dev_metrics.accuracy;
            best_params = params.clone();
            best_epoch = epoch;
            stale = 0;
        } else {
            stale += 1;
            if stale >= config.patience {
                break;
            }
        }
    }

    Ok(TrainOutcome {
        params: best_params,
        history,
        best_epoch,
    })
}

/// Splits a dataset into train and dev parts by a seeded shuffle: about
/// `fraction` of the examples (at least one, never all) become the dev set.
pub fn split_train_dev(data: &Dataset, fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if data.len() < 2 {
        return Err(Error::invalid("need at least 2 examples to split off a dev set"));
    }
    if !(0.0..1.0).contains(&fraction) || fraction == 0.0 {
        return Err(Error::invalid(format!("dev fraction {fraction} outside (0, 1)")));
    }
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, STREAM_SPLIT, 0));
    order.shuffle(&mut rng);
    let dev_n = ((data.len() as f64 * fraction).round() as usize)
        .max(1)
        .min(data.len() - 1);
    let dev_idx = &order[..dev_n];
    let train_idx = &order[dev_n..];
    let mut train_sorted = train_idx.to_vec();
    let mut dev_sorted = dev_idx.to_vec();
    train_sorted.sort_unstable();
    dev_sorted.sort_unstable();
    Ok((data.subset(&train_sorted), data.subset(&dev_sorted)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Example, LabelSet};

    fn toy_params() -> (ModelParams, AdaGradState) {
        let (params, _) = crate::model::tiny_fixture(1);
        let state = AdaGradState::new(&params, 0.1, 0.0);
        (params, state)
    }

    #[test]
    fn single_step_closed_form() {
        let (mut params, mut state) = toy_params();
        // One scalar: theta=1, g=0.5, G=0.25, lr=0.1, eps=0.
        params.dense_bias[0] = 1.0;
        state.dense_bias[0] = 0.25;
        let mut grads = Gradients::zeros_like(&params);
        grads.dense_bias[0] = 0.5;
        adagrad_update(&mut state, &mut params, &grads).unwrap();
        assert!((state.dense_bias[0] - 0.5).abs() < 1e-15);
        let expected = 1.0 - 0.1 * 0.5 / 0.5f64.sqrt();
        assert!((params.dense_bias[0] - expected).abs() < 1e-9);
    }

    #[test]
    fn zero_gradient_is_an_exact_no_op() {
        let (mut params, mut state) = toy_params();
        let before_params = params.clone();
        state.dense_weights[3] = 0.7;
        let before_accum = state.clone();
        let grads = Gradients::zeros_like(&params);
        adagrad_update(&mut state, &mut params, &grads).unwrap();
        assert_eq!(params, before_params);
        assert_eq!(state.dense_weights, before_accum.dense_weights);
        assert_eq!(state.embedding, before_accum.embedding);
    }

    #[test]
    fn non_finite_gradient_names_its_block() {
        let (mut params, mut state) = toy_params();
        let before = params.clone();
        let mut grads = Gradients::zeros_like(&params);
        grads.banks[1].weights[2] = f64::NAN;
        let err = adagrad_update(&mut state, &mut params, &grads).unwrap_err();
        assert!(err.to_string().contains("conv bank 1"));
        // Nothing moved.
        assert_eq!(params, before);
    }

    #[test]
    fn pad_row_never_moves() {
        let (mut params, mut state) = toy_params();
        let mut grads = Gradients::zeros_like(&params);
        let c = params.classes();
        // Even a rogue PAD gradient must not move the PAD row.
        grads.embedding[..c].iter_mut().for_each(|g| *g = 1.0);
        grads.embedding[c..2 * c].iter_mut().for_each(|g| *g = 1.0);
        adagrad_update(&mut state, &mut params, &grads).unwrap();
        assert!(params.embedding.row(0).iter().all(|&v| v == 0.0));
        // The UNK row does train.
        assert!(params.embedding.row(1).iter().any(|&v| (v - 1.0 / 3.0).abs() > 1e-12));
    }

    #[test]
    fn accumulators_shrink_late_steps() {
        let (mut params, mut state) = toy_params();
        params.dense_bias[0] = 0.0;
        let mut grads = Gradients::zeros_like(&params);
        grads.dense_bias[0] = 1.0;
        adagrad_update(&mut state, &mut params, &grads).unwrap();
        let first_step = params.dense_bias[0].abs();
        adagrad_update(&mut state, &mut params, &grads).unwrap();
        let second_step = (params.dense_bias[0].abs() - first_step).abs();
        assert!(second_step < first_step);
    }

    fn toy_corpus() -> (Dataset, Dataset) {
        let labels = LabelSet::new(vec!["down".into(), "up".into()]).unwrap();
        let mk = |text: &str, label| Example {
            tokens: text.split_whitespace().map(String::from).collect(),
            label,
            timestamp: None,
        };
        let mut examples = Vec::new();
        for _ in 0..8 {
            examples.push(mk("aa aa aa", 0));
            examples.push(mk("bb bb bb", 1));
        }
        let train = Dataset::new(examples, labels.clone()).unwrap();
        let dev = Dataset::new(
            vec![mk("aa aa aa", 0), mk("bb bb bb", 1), mk("aa aa bb", 0), mk("bb bb aa", 1)],
            labels,
        )
        .unwrap();
        (train, dev)
    }

    fn toy_config() -> TrainConfig {
        TrainConfig {
            widths: vec![2, 3],
            filters_per_width: 4,
            batch_size: 4,
            epochs: 25,
            lr: 0.1,
            dropout_rate: 0.0,
            min_len: 3,
            dev_fraction: 0.2,
            ..TrainConfig::default()
        }
    }

    #[test]
    fn separable_toy_task_reaches_perfect_dev_accuracy() {
        let (train_data, dev_data) = toy_corpus();
        let vocab = Vocabulary::build(&train_data, 1).unwrap();
        let table = ScoreTable::learn(&train_data, &vocab, 0.0, CountMode::TokenOccurrences);
        let out = train(&train_data, &dev_data, &table, &vocab, &toy_config()).unwrap();
        let best_acc = out
            .history
            .iter()
            .map(|h| h.dev_accuracy)
            .fold(0.0f64, f64::max);
        assert_eq!(best_acc, 1.0, "history: {:?}", out.history);
        assert!(out.best_epoch >= 1);
        let metrics = evaluate(&out.params, &dev_data, &vocab, 3).unwrap();
        assert_eq!(metrics.accuracy, 1.0);
    }

    #[test]
    fn training_is_reproducible() {
        let (train_data, dev_data) = toy_corpus();
        let vocab = Vocabulary::build(&train_data, 1).unwrap();
        let table = ScoreTable::learn(&train_data, &vocab, 0.0, CountMode::TokenOccurrences);
        let mut config = toy_config();
        config.dropout_rate = 0.4;
        config.epochs = 5;
        let a = train(&train_data, &dev_data, &table, &vocab, &config).unwrap();
        let b = train(&train_data, &dev_data, &table, &vocab, &config).unwrap();
        assert_eq!(a.params, b.params);
        assert_eq!(a.history, b.history);
        config.seed += 1;
        let c = train(&train_data, &dev_data, &table, &vocab, &config).unwrap();
        assert!(a.params != c.params);
    }

    #[test]
    fn thread_count_does_not_change_training() {
        let (train_data, dev_data) = toy_corpus();
        let vocab = Vocabulary::build(&train_data, 1).unwrap();
        let table = ScoreTable::learn(&train_data, &vocab, 0.0, CountMode::TokenOccurrences);
        let mut config = toy_config();
        config.dropout_rate = 0.4;
        config.epochs = 4;
        let one = par::run_with_threads(1, || {
            train(&train_data, &dev_data, &table, &vocab, &config)
        })
        .unwrap();
        let four = par::run_with_threads(4, || {
            train(&train_data, &dev_data, &table, &vocab, &config)
        })
        .unwrap();
        assert_eq!(one.params, four.params);
        assert_eq!(one.history, four.history);
    }

    #[test]
    fn batch_gradients_parallel_and_sequential_agree_exactly() {
        let (train_data, _) = toy_corpus();
        let vocab = Vocabulary::build(&train_data, 1).unwrap();
        let table = ScoreTable::learn(&train_data, &vocab, 0.0, CountMode::TokenOccurrences);
        let config = toy_config();
        let params = init_params(&table, &vocab, &config.model_config()).unwrap();
        let items: Vec<BatchItem> = train_data
            .examples
            .iter()
            .enumerate()
            .map(|(i, ex)| BatchItem {
                indices: vocab.encode(&ex.tokens, 3),
                label: ex.label,
                dropout_seed: derive_seed(7, STREAM_DROPOUT, i as u64),
            })
            .collect();
        let (gp, lp) = batch_gradients(&params, &items).unwrap();
        let (gs, ls) = batch_gradients_seq(&params, &items).unwrap();
        assert_eq!(gp, gs);
        assert_eq!(lp, ls);
    }

    #[test]
    fn empty_train_or_dev_is_rejected() {
        let (train_data, dev_data) = toy_corpus();
        let vocab = Vocabulary::build(&train_data, 1).unwrap();
        let table = ScoreTable::learn(&train_data, &vocab, 0.0, CountMode::TokenOccurrences);
        let empty = Dataset::new(vec![], train_data.labels.clone()).unwrap();
        assert!(train(&empty, &dev_data, &table, &vocab, &toy_config()).is_err());
        assert!(train(&train_data, &empty, &table, &vocab, &toy_config()).is_err());
    }

    #[test]
    fn split_train_dev_is_seeded_and_covers_everything() {
        let (train_data, _) = toy_corpus();
        let (tr1, dv1) = split_train_dev(&train_data, 0.25, 9).unwrap();
        let (tr2, dv2) = split_train_dev(&train_data, 0.25, 9).unwrap();
        assert_eq!(tr1.len(), tr2.len());
        assert_eq!(dv1.len(), dv2.len());
        assert_eq!(tr1.len() + dv1.len(), train_data.len());
        assert_eq!(dv1.len(), 4);
        assert_eq!(dv1.examples, dv2.examples);
        // Every original example lands in exactly one part.
        let mut all = tr1.examples.clone();
        all.extend(dv1.examples.clone());
        assert_eq!(all.len(), train_data.len());
    }

    #[test]
    fn history_csv_shape() {
        let rows = vec![
            EpochStats { epoch: 1, train_loss: 1.5, dev_accuracy: 0.5 },
            EpochStats { epoch: 2, train_loss: 0.75, dev_accuracy: 1.0 },
        ];
        let csv = history_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "epoch,train_loss,dev_accuracy");
        assert_eq!(lines[1], "1,1.5,0.5");
        assert_eq!(lines[2], "2,0.75,1");
    }
}
