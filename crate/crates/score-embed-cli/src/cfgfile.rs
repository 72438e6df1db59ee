//! key=value settings files. Lines are `key = value`, `#` starts a
//! comment, blank lines are ignored. Any problem here is a usage error:
//! the file configures the run, it is not run data.

use std::path::Path;

use score_embed::model::Activation;
use score_embed::scorerep::{Aggregation, CountMode};
use score_embed::TrainConfig;

use crate::CliError;

pub fn apply_config_file(path: &Path, config: &mut TrainConfig) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config file {}: {e}", path.display())))?;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            usage(path, line_no, format!("expected key=value, got `{line}`"))
        })?;
        let key = key.trim();
        let value = value.trim();
        apply_key(config, key, value)
            .map_err(|msg| usage(path, line_no, msg))?;
    }
    Ok(())
}

fn usage(path: &Path, line: usize, msg: String) -> CliError {
    CliError::Usage(format!("{}:{line}: {msg}", path.display()))
}

fn apply_key(config: &mut TrainConfig, key: &str, value: &str) -> Result<(), String> {
    match key {
        "lr" => config.lr = parse_num(key, value)?,
        "epsilon" => config.epsilon = parse_num(key, value)?,
        "batch_size" => config.batch_size = parse_num(key, value)?,
        "epochs" => config.epochs = parse_num(key, value)?,
        "dropout_rate" => config.dropout_rate = parse_num(key, value)?,
        "seed" => config.seed = parse_num(key, value)?,
        "min_freq" => config.min_freq = parse_num(key, value)?,
        "smoothing" => config.smoothing = parse_num(key, value)?,
        "count_mode" => {
            config.count_mode = match value {
                "token_occurrences" => CountMode::TokenOccurrences,
                "document_frequency" => CountMode::DocumentFrequency,
                other => {
                    return Err(format!(
                        "count_mode must be token_occurrences or document_frequency, got `{other}`"
                    ))
                }
            }
        }
        "aggregation" => {
            config.aggregation = match value {
                "mean" => Aggregation::Mean,
                "sum" => Aggregation::Sum,
                other => return Err(format!("aggregation must be mean or sum, got `{other}`")),
            }
        }
        "widths" => {
            let widths: Result<Vec<usize>, _> = value
                .split(',')
                .map(|w| w.trim().parse::<usize>())
                .collect();
            config.widths =
                widths.map_err(|_| format!("widths must be comma-separated integers, got `{value}`"))?;
        }
        "filters_per_width" => config.filters_per_width = parse_num(key, value)?,
        "activation" => {
            config.activation = match value {
                "relu" => Activation::Relu,
                "tanh" => Activation::Tanh,
                other => return Err(format!("activation must be relu or tanh, got `{other}`")),
            }
        }
        "dev_fraction" => config.dev_fraction = parse_num(key, value)?,
        "patience" => config.patience = parse_num(key, value)?,
        "min_len" => config.min_len = parse_num(key, value)?,
        "twitter_normalize" => {
            config.twitter_normalize = match value {
                "true" => true,
                "false" => false,
                other => {
                    return Err(format!("twitter_normalize must be true or false, got `{other}`"))
                }
            }
        }
        other => return Err(format!("unknown config key `{other}`")),
    }
    Ok(())
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .parse::<T>()
        .map_err(|_| format!("bad value for {key}: `{value}`"))
}

pub fn count_mode_name(mode: CountMode) -> &'static str {
    match mode {
        CountMode::TokenOccurrences => "token_occurrences",
        CountMode::DocumentFrequency => "document_frequency",
    }
}

pub fn aggregation_name(agg: Aggregation) -> &'static str {
    match agg {
        Aggregation::Mean => "mean",
        Aggregation::Sum => "sum",
    }
}

pub fn activation_name(act: Activation) -> &'static str {
    match act {
        Activation::Relu => "relu",
        Activation::Tanh => "tanh",
    }
}

/// Renders the fully resolved training configuration as key=value lines in
/// a fixed order, each prefixed with `# `.
pub fn config_banner(config: &TrainConfig) -> String {
    let widths: Vec<String> = config.widths.iter().map(|w| w.to_string()).collect();
    let mut out = String::new();
    for (key, value) in [
        ("lr", config.lr.to_string()),
        ("epsilon", config.epsilon.to_string()),
        ("batch_size", config.batch_size.to_string()),
        ("epochs", config.epochs.to_string()),
        ("dropout_rate", config.dropout_rate.to_string()),
        ("seed", config.seed.to_string()),
        ("min_freq", config.min_freq.to_string()),
        ("smoothing", config.smoothing.to_string()),
        ("count_mode", count_mode_name(config.count_mode).to_string()),
        ("aggregation", aggregation_name(config.aggregation).to_string()),
        ("widths", widths.join(",")),
        ("filters_per_width", config.filters_per_width.to_string()),
        ("activation", activation_name(config.activation).to_string()),
        ("dev_fraction", config.dev_fraction.to_string()),
        ("patience", config.patience.to_string()),
        ("min_len", config.min_len.to_string()),
        ("twitter_normalize", config.twitter_normalize.to_string()),
    ] {
        out.push_str(&format!("# {key}={value}\n"));
    }
    out
}
