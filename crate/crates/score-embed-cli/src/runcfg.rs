//! Resolution of run-level settings and the artifact banner every run
//! records its resolved configuration with.

use std::path::{Path, PathBuf};

use score_embed::corpus::{load_sst, load_tsv, sst_label_set, Dataset, LabelSet, LineIssue};
use score_embed::TrainConfig;

use crate::args::{DataFormat, SharedArgs};
use crate::cfgfile;
use crate::CliError;

/// Defaults, then the config file, then individual flag overrides; the
/// seed flag wins over a seed from the file.
pub fn resolve_train_config(shared: &SharedArgs) -> Result<TrainConfig, CliError> {
    let mut config = TrainConfig::default();
    if let Some(path) = &shared.config {
        cfgfile::apply_config_file(path, &mut config)?;
    }
    if let Some(seed) = shared.seed {
        config.seed = seed;
    }
    config
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(config)
}

/// The label set a run works with: fixed for sst, from `--labels` for tsv.
pub fn resolve_labels(
    format: DataFormat,
    labels: Option<&PathBuf>,
) -> Result<LabelSet, CliError> {
    match format {
        DataFormat::Sst => {
            if labels.is_some() {
                return Err(CliError::Usage(
                    "--labels cannot be combined with --format sst; the five sentiment labels are fixed"
                        .to_string(),
                ));
            }
            Ok(sst_label_set())
        }
        DataFormat::Tsv => {
            let path = labels.ok_or_else(|| {
                CliError::Usage("--labels is required with --format tsv".to_string())
            })?;
            Ok(LabelSet::from_file(path)?)
        }
    }
}

/// Loads one labeled data file. TSV loads are resilient and report the
/// lines they skip; SST loads reject the whole file on any malformed tree.
pub fn load_labeled(
    format: DataFormat,
    path: &Path,
    labels: &LabelSet,
    twitter_normalize: bool,
) -> Result<(Dataset, Vec<LineIssue>), CliError> {
    match format {
        DataFormat::Sst => {
            let data = load_sst(path, twitter_normalize)?;
            Ok((data, Vec::new()))
        }
        DataFormat::Tsv => {
            let loaded = load_tsv(path, labels, twitter_normalize)?;
            Ok((loaded.dataset, loaded.skipped))
        }
    }
}

pub fn report_skipped(path: &Path, skipped: &[LineIssue]) {
    for issue in skipped {
        eprintln!("skipped {}:{}: {}", path.display(), issue.line, issue.msg);
    }
}

/// `# key=value` lines describing the run: the subcommand, its paths and
/// settings, then the resolved training configuration when the run has
/// one. Written to stderr for every run and prepended to CSV artifacts.
pub fn run_banner(
    subcommand: &str,
    fields: &[(&str, String)],
    config: Option<&TrainConfig>,
) -> String {
    let mut out = String::from("# tool=score-embed\n");
    out.push_str(&format!("# subcommand={subcommand}\n"));
    for (key, value) in fields {
        out.push_str(&format!("# {key}={value}\n"));
    }
    if let Some(config) = config {
        out.push_str(&cfgfile::config_banner(config));
    }
    out
}

pub fn echo_banner(banner: &str) {
    eprint!("{banner}");
}

pub fn format_name(format: DataFormat) -> &'static str {
    match format {
        DataFormat::Tsv => "tsv",
        DataFormat::Sst => "sst",
    }
}

/// Writes a CSV artifact with the banner on top, or prints the bare
/// content to stdout when no path is given.
pub fn write_csv_artifact(
    out: Option<&PathBuf>,
    banner: &str,
    content: &str,
) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let full = format!("{banner}{content}");
            std::fs::write(path, full).map_err(|e| CliError::Lib(score_embed::Error::io(path, e)))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
