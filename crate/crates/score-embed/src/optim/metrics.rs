use crate::corpus::{Dataset, Vocabulary};
use crate::error::{Error, Result};
use crate::model::{forward, ForwardMode, ModelParams};
use crate::par;

/// Accuracy, macro-averaged F1, and the full confusion matrix
/// (rows = true class, columns = predicted class).
#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    pub accuracy: f64,
    pub macro_f1: f64,
    confusion: Vec<u64>,
    classes: usize,
    pub n: usize,
}

impl Metrics {
    /// Tallies (true, predicted) pairs. Errors on an empty iterator or an
    /// out-of-range class.
    pub fn from_pairs(pairs: &[(usize, usize)], classes: usize) -> Result<Metrics> {
        if pairs.is_empty() {
            return Err(Error::invalid("cannot compute metrics over zero examples"));
        }
        let mut confusion = vec![0u64; classes * classes];
        for &(truth, pred) in pairs {
            if truth >= classes || pred >= classes {
                return Err(Error::invalid(format!(
                    "class pair ({truth}, {pred}) out of range for {classes} classes"
                )));
            }
            confusion[truth * classes + pred] += 1;
        }
        let n = pairs.len();
        let correct: u64 = (0..classes).map(|c| confusion[c * classes + c]).sum();
        let accuracy = correct as f64 / n as f64;

        let mut f1_sum = 0.0;
        for c in 0..classes {
            let tp = confusion[c * classes + c] as f64;
            let fp: f64 = (0..classes)
                .filter(|&t| t != c)
                .map(|t| confusion[t * classes + c] as f64)
                .sum();
            let fn_: f64 = (0..classes)
                .filter(|&p| p != c)
                .map(|p| confusion[c * classes + p] as f64)
                .sum();
            let precision = if tp + fp > 0.0 { tp / (tp + fp) } else { 0.0 };
            let recall = if tp + fn_ > 0.0 { tp / (tp + fn_) } else { 0.0 };
            let f1 = if precision + recall > 0.0 {
                2.0 * precision * recall / (precision + recall)
            } else {
                0.0
            };
            f1_sum += f1;
        }
        Ok(Metrics {
            accuracy,
            macro_f1: f1_sum / classes as f64,
            confusion,
            classes,
            n,
        })
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn confusion_at(&self, truth: usize, pred: usize) -> u64 {
        self.confusion[truth * self.classes + pred]
    }

    /// Row of the confusion matrix for one true class.
    pub fn confusion_row(&self, truth: usize) -> &[u64] {
        &self.confusion[truth * self.classes..(truth + 1) * self.classes]
    }

    /// Renders `accuracy`, `macro_f1`, `n`, and the confusion rows as CSV.
    pub fn to_csv(&self, labels: &[String]) -> String {
        let mut out = String::new();
        out.push_str(&format!("accuracy,{}\n", self.accuracy));
        out.push_str(&format!("macro_f1,{}\n", self.macro_f1));
        out.push_str(&format!("n,{}\n", self.n));
        for t in 0..self.classes {
            out.push_str(&format!("confusion_{}", labels[t]));
            for p in 0..self.classes {
                out.push_str(&format!(",{}", self.confusion_at(t, p)));
            }
            out.push('\n');
        }
        out
    }
}

/// Predicted class of an encoded sentence: the argmax logit, ties to the
/// lowest class index.
pub fn predict_label(params: &ModelParams, indices: &[usize]) -> Result<usize> {
    let (logits, _) = forward(params, indices, ForwardMode::Eval)?;
    let mut best = 0;
    for c in 1..logits.len() {
        if logits[c] > logits[best] {
            best = c;
        }
    }
    Ok(best)
}

/// Evaluates a model over a dataset (dropout disabled). Per-example
/// prediction runs data-parallel; tallying is sequential in dataset order.
pub fn evaluate(
    params: &ModelParams,
    data: &Dataset,
    vocab: &Vocabulary,
    min_len: usize,
) -> Result<Metrics> {
    if data.is_empty() {
        return Err(Error::invalid("cannot evaluate on an empty dataset"));
    }
    let min_len = min_len.max(params.max_width());
    let predictions = par::map_ordered(&data.examples, |_, ex| {
        let indices = vocab.encode(&ex.tokens, min_len);
        predict_label(params, &indices)
    });
    let mut pairs = Vec::with_capacity(data.len());
    for (ex, pred) in data.examples.iter().zip(predictions) {
        pairs.push((ex.label, pred?));
    }
    Metrics::from_pairs(&pairs, data.n_classes())
}

/// Cohen's kappa between two equal-length label sequences: agreement
/// corrected by the chance agreement of the marginal distributions. When
/// chance agreement is total, the result is 1 for perfect agreement and 0
/// otherwise.
pub fn cohen_kappa(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::invalid(format!(
            "sequences differ in length: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Err(Error::invalid("cannot compute kappa over zero items"));
    }
    let classes = a.iter().chain(b.iter()).max().unwrap() + 1;
    let n = a.len() as f64;
    let mut marg_a = vec![0u64; classes];
    let mut marg_b = vec![0u64; classes];
    let mut agree = 0u64;
    for (&x, &y) in a.iter().zip(b) {
        marg_a[x] += 1;
        marg_b[y] += 1;
        if x == y {
            agree += 1;
        }
    }
    let po = agree as f64 / n;
    let pe: f64 = marg_a
        .iter()
        .zip(&marg_b)
        .map(|(&x, &y)| (x as f64 / n) * (y as f64 / n))
        .sum();
    if pe == 1.0 {
        return Ok(if po == 1.0 { 1.0 } else { 0.0 });
    }
    Ok((po - pe) / (1.0 - pe))
}
