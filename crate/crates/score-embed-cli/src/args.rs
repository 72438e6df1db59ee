use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "score-embed",
    version,
    about = "Text categorization with class-score word representations",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a classifier and write a model file
    Train(TrainArgs),
    /// Evaluate a model (or a lexicon rule) on labeled data
    Eval(EvalArgs),
    /// Classify standard-input lines with a trained model
    Predict(PredictArgs),
    /// Learn a score table and write it as tab-separated text
    ExportScores(ExportScoresArgs),
    /// Verify analytic gradients against finite differences
    Gradcheck(GradcheckArgs),
    /// Stratified k-fold cross-validation
    Cv(CvArgs),
    /// Aggregate per-day class counts over timestamped records
    Timeline(TimelineArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DataFormat {
    /// label<TAB>text lines
    Tsv,
    /// Constituency trees with sentiment node labels
    Sst,
}

/// Flags shared by the subcommands that read labeled data and resolve a
/// training configuration.
#[derive(Debug, Args)]
pub struct SharedArgs {
    /// Label names file, one per line (tsv format; sst fixes its own labels)
    #[arg(long)]
    pub labels: Option<PathBuf>,

    /// Seed override; wins over the config file
    #[arg(long)]
    pub seed: Option<u64>,

    /// key=value settings file (# comments allowed)
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Input data format
    #[arg(long, value_enum, default_value_t = DataFormat::Tsv)]
    pub format: DataFormat,

    /// Worker threads (0 = one per core)
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Training data file
    #[arg(long)]
    pub train: PathBuf,

    /// Development data file; omitted, a fraction of the training data is
    /// held out instead
    #[arg(long)]
    pub dev: Option<PathBuf>,

    /// Where to write the trained model
    #[arg(long)]
    pub model_out: PathBuf,

    /// Where to write the per-epoch history CSV
    #[arg(long)]
    pub history_out: Option<PathBuf>,

    #[command(flatten)]
    pub shared: SharedArgs,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Trained model file
    #[arg(long)]
    pub model: Option<PathBuf>,

    /// Labeled data to evaluate on
    #[arg(long)]
    pub data: PathBuf,

    /// Where to write the metrics CSV (stdout gets a readable report)
    #[arg(long)]
    pub csv_out: Option<PathBuf>,

    /// Positive word list: evaluates the counting rule instead of a model
    #[arg(long, requires = "lexicon_neg", conflicts_with = "model")]
    pub lexicon_pos: Option<PathBuf>,

    /// Negative word list for the counting rule
    #[arg(long, requires = "lexicon_pos", conflicts_with = "model")]
    pub lexicon_neg: Option<PathBuf>,

    /// Label names file, one per line (tsv format; sst fixes its own labels)
    #[arg(long)]
    pub labels: Option<PathBuf>,

    /// Input data format
    #[arg(long, value_enum, default_value_t = DataFormat::Tsv)]
    pub format: DataFormat,

    /// Worker threads (0 = one per core)
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Trained model file
    #[arg(long)]
    pub model: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExportScoresArgs {
    /// Labeled data to learn the table from
    #[arg(long)]
    pub train: PathBuf,

    /// Keep only each class's k highest-scoring words
    #[arg(long)]
    pub top_k: Option<usize>,

    /// Output file (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[command(flatten)]
    pub shared: SharedArgs,
}

#[derive(Debug, Args)]
pub struct GradcheckArgs {
    /// Number of randomly built models to check
    #[arg(long, default_value_t = 10)]
    pub trials: usize,

    /// Finite-difference step
    #[arg(long, default_value_t = 1e-5)]
    pub epsilon: f64,

    /// Base seed for the generated models
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CvArgs {
    /// Labeled data to fold
    #[arg(long)]
    pub data: PathBuf,

    /// Number of folds
    #[arg(long, default_value_t = 5)]
    pub k: usize,

    /// Output file (stdout when omitted)
    #[arg(long)]
    pub csv_out: Option<PathBuf>,

    #[command(flatten)]
    pub shared: SharedArgs,
}

#[derive(Debug, Args)]
pub struct TimelineArgs {
    /// Trained model file
    #[arg(long)]
    pub model: PathBuf,

    /// JSONL records with `ts` and `text` fields
    #[arg(long)]
    pub input: PathBuf,

    /// Output file (stdout when omitted)
    #[arg(long)]
    pub csv_out: Option<PathBuf>,
}
