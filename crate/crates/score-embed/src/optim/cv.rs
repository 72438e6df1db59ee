use crate::corpus::{stratified_kfold, Dataset, Vocabulary};
use crate::error::Result;
use crate::optim::{derive_seed, evaluate, split_train_dev, train, Metrics, TrainConfig};
use crate::scorerep::ScoreTable;

const STREAM_CV_DEV: u64 = 4;

/// Held-out metrics of one fold.
#[derive(Debug, Clone)]
pub struct FoldResult {
    pub fold: usize,
    pub metrics: Metrics,
}

/// Per-fold metrics with their mean and sample standard deviation.
#[derive(Debug, Clone)]
pub struct CvReport {
    pub folds: Vec<FoldResult>,
    pub mean_accuracy: f64,
    pub stdev_accuracy: f64,
    pub mean_macro_f1: f64,
    pub stdev_macro_f1: f64,
}

fn mean_and_stdev(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

impl CvReport {
    fn from_folds(folds: Vec<FoldResult>) -> CvReport {
        let accs: Vec<f64> = folds.iter().map(|f| f.metrics.accuracy).collect();
        let f1s: Vec<f64> = folds.iter().map(|f| f.metrics.macro_f1).collect();
        let (mean_accuracy, stdev_accuracy) = mean_and_stdev(&accs);
        let (mean_macro_f1, stdev_macro_f1) = mean_and_stdev(&f1s);
        CvReport {
            folds,
            mean_accuracy,
            stdev_accuracy,
            mean_macro_f1,
            stdev_macro_f1,
        }
    }

    /// Renders `fold,n,accuracy,macro_f1` rows followed by a `mean` row and
    /// a `stdev` row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("fold,n,accuracy,macro_f1\n");
        for f in &self.folds {
            out.push_str(&format!(
                "{},{},{},{}\n",
                f.fold, f.metrics.n, f.metrics.accuracy, f.metrics.macro_f1
            ));
        }
        let total: usize = self.folds.iter().map(|f| f.metrics.n).sum();
        out.push_str(&format!(
            "mean,{},{},{}\n",
            total, self.mean_accuracy, self.mean_macro_f1
        ));
        out.push_str(&format!(
            "stdev,,{},{}\n",
            self.stdev_accuracy, self.stdev_macro_f1
        ));
        out
    }
}

/// Stratified k-fold cross-validation of the full pipeline. Each fold
/// rebuilds the vocabulary and the score table from its own training
/// portion only, so held-out words stay genuinely unseen; the dev carve-out
/// for early stopping also comes from the training portion.
pub fn cross_validate(data: &Dataset, config: &TrainConfig, k: usize) -> Result<CvReport> {
    config.validate()?;
    let fold_of = stratified_kfold(data, k, config.seed)?;
    let mut folds = Vec::with_capacity(k);
    for fold in 0..k {
        let test_idx: Vec<usize> = (0..data.len()).filter(|&i| fold_of[i] == fold).collect();
        let pool_idx: Vec<usize> = (0..data.len()).filter(|&i| fold_of[i] != fold).collect();
        let test_data = data.subset(&test_idx);
        let pool = data.subset(&pool_idx);
        let (train_data, dev_data) = split_train_dev(
            &pool,
            config.dev_fraction,
            derive_seed(config.seed, STREAM_CV_DEV, fold as u64),
        )?;
        let vocab = Vocabulary::build(&train_data, config.min_freq)?;
        let table = ScoreTable::learn(&train_data, &vocab, config.smoothing, config.count_mode);
        let outcome = train(&train_data, &dev_data, &table, &vocab, config)?;
        let metrics = evaluate(
            &outcome.params,
            &test_data,
            &vocab,
            config.effective_min_len(),
        )?;
        folds.push(FoldResult { fold, metrics });
    }
    Ok(CvReport::from_folds(folds))
}
