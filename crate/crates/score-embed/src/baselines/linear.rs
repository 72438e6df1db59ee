use serde::{Deserialize, Serialize};

use crate::corpus::{Dataset, Vocabulary};
use crate::error::{Error, Result};
use crate::model::{log_likelihood, relative_error, softmax};
use crate::scorerep::{Aggregation, ScoreTable};

/// Multinomial logistic regression over C-dimensional sentence score
/// features: logits = W^T x + b.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearScoreModel {
    /// `feature_dim x C` row-major weights.
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
    pub feature_dim: usize,
    pub classes: usize,
    pub aggregation: Aggregation,
}

/// Hyperparameters of the full-batch trainer.
#[derive(Debug, Clone, Copy)]
pub struct LinearTrainConfig {
    pub lr: f64,
    pub epsilon: f64,
    pub max_epochs: usize,
    /// Stop when the epoch loss changes by less than this.
    pub tolerance: f64,
}

impl Default for LinearTrainConfig {
    fn default() -> Self {
        LinearTrainConfig {
            lr: 0.5,
            epsilon: 1e-8,
            max_epochs: 500,
            tolerance: 1e-7,
        }
    }
}

impl LinearScoreModel {
    pub fn logits(&self, feature: &[f64]) -> Result<Vec<f64>> {
        if feature.len() != self.feature_dim {
            return Err(Error::invalid(format!(
                "feature has {} dimensions, model expects {}",
                feature.len(),
                self.feature_dim
            )));
        }
        if !feature.iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("feature contains non-finite values"));
        }
        let mut logits = self.bias.clone();
        for (d, &x) in feature.iter().enumerate() {
            let row = &self.weights[d * self.classes..(d + 1) * self.classes];
            for (l, w) in logits.iter_mut().zip(row) {
                *l += x * w;
            }
        }
        Ok(logits)
    }
}

/// Predicted class for one feature vector; ties break to the lowest index.
pub fn predict_linear(model: &LinearScoreModel, feature: &[f64]) -> Result<usize> {
    let logits = model.logits(feature)?;
    let mut best = 0;
    for c in 1..logits.len() {
        if logits[c] > logits[best] {
            best = c;
        }
    }
    Ok(best)
}

fn mean_loss_and_grads(
    features: &[Vec<f64>],
    labels: &[usize],
    model: &LinearScoreModel,
) -> Result<(f64, Vec<f64>, Vec<f64>)> {
    let c = model.classes;
    let d = model.feature_dim;
    let mut gw = vec![0.0f64; d * c];
    let mut gb = vec![0.0f64; c];
    let mut loss = 0.0;
    for (x, &y) in features.iter().zip(labels) {
        let logits = model.logits(x)?;
        loss -= log_likelihood(&logits, y);
        let mut dlogits = softmax(&logits);
        dlogits[y] -= 1.0;
        for (k, &g) in dlogits.iter().enumerate() {
            gb[k] += g;
            for (dim, &xv) in x.iter().enumerate() {
                gw[dim * c + k] += g * xv;
            }
        }
    }
    let scale = 1.0 / features.len() as f64;
    loss *= scale;
    gw.iter_mut().for_each(|g| *g *= scale);
    gb.iter_mut().for_each(|g| *g *= scale);
    Ok((loss, gw, gb))
}

/// Trains the linear baseline by full-batch AdaGrad on the mean negative
/// log-likelihood, from zero-initialized parameters, stopping when the loss
/// change falls under the tolerance or the epoch budget runs out. Returns
/// the model with its per-epoch loss curve.
pub fn train_linear_on_scores(
    data: &Dataset,
    table: &ScoreTable,
    vocab: &Vocabulary,
    aggregation: Aggregation,
    config: &LinearTrainConfig,
) -> Result<(LinearScoreModel, Vec<f64>)> {
    if data.is_empty() {
        return Err(Error::invalid("cannot train on an empty dataset"));
    }
    let class_counts = data.class_counts();
    let present = class_counts.iter().filter(|&&n| n > 0).count();
    if present < 2 {
        return Err(Error::invalid(
            "training data is degenerate: fewer than 2 classes are present",
        ));
    }
    if !(config.lr.is_finite() && config.lr > 0.0) {
        return Err(Error::invalid("learning rate must be positive"));
    }
    let c = data.n_classes();
    let features: Vec<Vec<f64>> = data
        .examples
        .iter()
        .map(|ex| table.sentence_feature(&ex.tokens, vocab, aggregation))
        .collect::<Result<_>>()?;
    let labels: Vec<usize> = data.examples.iter().map(|ex| ex.label).collect();

    let mut model = LinearScoreModel {
        weights: vec![0.0; c * c],
        bias: vec![0.0; c],
        feature_dim: c,
        classes: c,
        aggregation,
    };
    let mut accum_w = vec![0.0f64; c * c];
    let mut accum_b = vec![0.0f64; c];
    let mut history = Vec::new();
    let mut prev_loss = f64::INFINITY;
    for _ in 0..config.max_epochs {
        let (loss, gw, gb) = mean_loss_and_grads(&features, &labels, &model)?;
        if !loss.is_finite() {
            return Err(Error::NonFinite {
                what: "loss",
                block: "linear baseline".to_string(),
            });
        }
        history.push(loss);
        for ((w, a), &g) in model.weights.iter_mut().zip(&mut accum_w).zip(&gw) {
            if g == 0.0 {
                continue;
            }
            *a += g * g;
            *w -= config.lr * g / (a.sqrt() + config.epsilon);
        }
        for ((b, a), &g) in model.bias.iter_mut().zip(&mut accum_b).zip(&gb) {
            if g == 0.0 {
                continue;
            }
            *a += g * g;
            *b -= config.lr * g / (a.sqrt() + config.epsilon);
        }
        if (prev_loss - loss).abs() < config.tolerance {
            break;
        }
        prev_loss = loss;
    }
    Ok((model, history))
}

/// Finite-difference check of the linear trainer's gradient at a given
/// parameter point; returns the maximum relative error over all weights and
/// biases.
pub fn linear_grad_check(
    features: &[Vec<f64>],
    labels: &[usize],
    model: &LinearScoreModel,
    epsilon: f64,
) -> Result<f64> {
    let (_, gw, gb) = mean_loss_and_grads(features, labels, model)?;
    let mut work = model.clone();
    let mut max_err = 0.0f64;
    let loss_at = |m: &LinearScoreModel| -> Result<f64> {
        let (loss, _, _) = mean_loss_and_grads(features, labels, m)?;
        Ok(loss)
    };
    for i in 0..work.weights.len() {
        let orig = work.weights[i];
        work.weights[i] = orig + epsilon;
        let up = loss_at(&work)?;
        work.weights[i] = orig - epsilon;
        let down = loss_at(&work)?;
        work.weights[i] = orig;
        let gn = (up - down) / (2.0 * epsilon);
        max_err = max_err.max(relative_error(gw[i], gn));
    }
    for i in 0..work.bias.len() {
        let orig = work.bias[i];
        work.bias[i] = orig + epsilon;
        let up = loss_at(&work)?;
        work.bias[i] = orig - epsilon;
        let down = loss_at(&work)?;
        work.bias[i] = orig;
        let gn = (up - down) / (2.0 * epsilon);
        max_err = max_err.max(relative_error(gb[i], gn));
    }
    Ok(max_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Example, LabelSet};
    use crate::scorerep::CountMode;

    fn ex(text: &str, label: usize) -> Example {
        Example {
            tokens: text.split_whitespace().map(String::from).collect(),
            label,
            timestamp: None,
        }
    }

    fn corpus() -> (Dataset, Vocabulary, ScoreTable) {
        let labels = LabelSet::new(vec!["neg".into(), "neu".into(), "pos".into()]).unwrap();
        let mut examples = Vec::new();
        for _ in 0..6 {
            examples.push(ex("bad awful thing", 0));
            examples.push(ex("plain normal thing", 1));
            examples.push(ex("good great thing", 2));
        }
        let data = Dataset::new(examples, labels).unwrap();
        let vocab = Vocabulary::build(&data, 1).unwrap();
        let table = ScoreTable::learn(&data, &vocab, 0.0, CountMode::TokenOccurrences);
        (data, vocab, table)
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let (data, vocab, table) = corpus();
        let features: Vec<Vec<f64>> = data
            .examples
            .iter()
            .map(|e| table.sentence_feature(&e.tokens, &vocab, Aggregation::Mean).unwrap())
            .collect();
        let labels: Vec<usize> = data.examples.iter().map(|e| e.label).collect();
        // Check at a non-trivial parameter point.
        let model = LinearScoreModel {
            weights: (0..9).map(|i| (i as f64 - 4.0) * 0.3).collect(),
            bias: vec![0.1, -0.2, 0.05],
            feature_dim: 3,
            classes: 3,
            aggregation: Aggregation::Mean,
        };
        let err = linear_grad_check(&features, &labels, &model, 1e-5).unwrap();
        assert!(err < 1e-4, "max relative error {err}");
    }

    #[test]
    fn training_converges_and_separates_easy_data() {
        let (data, vocab, table) = corpus();
        let (model, history) = train_linear_on_scores(
            &data,
            &table,
            &vocab,
            Aggregation::Mean,
            &LinearTrainConfig::default(),
        )
        .unwrap();
        assert!(history.len() <= 500);
        assert!(history.last().unwrap() < &history[0]);
        let mut correct = 0;
        for e in &data.examples {
            let f = table.sentence_feature(&e.tokens, &vocab, Aggregation::Mean).unwrap();
            if predict_linear(&model, &f).unwrap() == e.label {
                correct += 1;
            }
        }
        assert_eq!(correct, data.len());
    }

    #[test]
    fn loss_curve_is_monotone_on_easy_data() {
        let (data, vocab, table) = corpus();
        let (_, history) = train_linear_on_scores(
            &data,
            &table,
            &vocab,
            Aggregation::Mean,
            &LinearTrainConfig { lr: 0.1, ..Default::default() },
        )
        .unwrap();
        for pair in history.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-9, "loss rose: {pair:?}");
        }
    }

    #[test]
    fn predictions_match_hand_computation_on_fixed_features() {
        let model = LinearScoreModel {
            weights: vec![
                1.0, 0.0, -1.0,
                0.0, 2.0, 0.0,
                -1.0, 0.0, 1.0,
            ],
            bias: vec![0.0, -0.5, 0.0],
            feature_dim: 3,
            classes: 3,
            aggregation: Aggregation::Mean,
        };
        // logits = W^T x + b computed by hand for five fixed features.
        let cases: Vec<(Vec<f64>, usize)> = vec![
            (vec![1.0, 0.0, 0.0], 0),  // logits (1, -0.5, -1)
            (vec![0.0, 1.0, 0.0], 1),  // logits (0, 1.5, 0)
            (vec![0.0, 0.0, 1.0], 2),  // logits (-1, -0.5, 1)
            (vec![0.5, 0.0, 0.5], 0),  // logits (0, -0.5, 0): tie -> lowest
            (vec![0.2, 0.6, 0.2], 1),  // logits (0, 0.7, 0)
        ];
        for (feature, expected) in cases {
            assert_eq!(predict_linear(&model, &feature).unwrap(), expected);
        }
    }

    #[test]
    fn dimension_and_finiteness_checks() {
        let model = LinearScoreModel {
            weights: vec![0.0; 9],
            bias: vec![0.0; 3],
            feature_dim: 3,
            classes: 3,
            aggregation: Aggregation::Mean,
        };
        assert!(predict_linear(&model, &[0.1, 0.2]).is_err());
        assert!(predict_linear(&model, &[0.1, f64::NAN, 0.2]).is_err());
    }

    #[test]
    fn single_class_data_is_degenerate() {
        let labels = LabelSet::new(vec!["a".into(), "b".into()]).unwrap();
        let data = Dataset::new(vec![ex("x", 0), ex("y", 0)], labels).unwrap();
        let vocab = Vocabulary::build(&data, 1).unwrap();
        let table = ScoreTable::learn(&data, &vocab, 0.0, CountMode::TokenOccurrences);
        let err = train_linear_on_scores(
            &data,
            &table,
            &vocab,
            Aggregation::Mean,
            &LinearTrainConfig::default(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("degenerate"));
    }
}
