use score_embed::corpus::Vocabulary;
use score_embed::optim::{history_csv, split_train_dev, train};
use score_embed::par::run_with_threads;
use score_embed::persist::save_model;
use score_embed::ScoreTable;

use crate::args::TrainArgs;
use crate::runcfg::{
    echo_banner, format_name, load_labeled, report_skipped, resolve_labels, resolve_train_config,
    run_banner, write_csv_artifact,
};
use crate::CliError;

pub fn run(args: TrainArgs) -> Result<(), CliError> {
    let config = resolve_train_config(&args.shared)?;
    let labels = resolve_labels(args.shared.format, args.shared.labels.as_ref())?;

    let mut fields = vec![("train", args.train.display().to_string())];
    if let Some(dev) = &args.dev {
        fields.push(("dev", dev.display().to_string()));
    }
    if let Some(path) = &args.shared.labels {
        fields.push(("labels", path.display().to_string()));
    }
    fields.push(("model_out", args.model_out.display().to_string()));
    if let Some(path) = &args.history_out {
        fields.push(("history_out", path.display().to_string()));
    }
    fields.push(("format", format_name(args.shared.format).to_string()));
    fields.push(("threads", args.shared.threads.to_string()));
    let banner = run_banner("train", &fields, Some(&config));
    echo_banner(&banner);

    let (full_train, skipped) = load_labeled(
        args.shared.format,
        &args.train,
        &labels,
        config.twitter_normalize,
    )?;
    report_skipped(&args.train, &skipped);

    let (train_data, dev_data) = match &args.dev {
        Some(dev_path) => {
            let (dev_data, dev_skipped) = load_labeled(
                args.shared.format,
                dev_path,
                &labels,
                config.twitter_normalize,
            )?;
            report_skipped(dev_path, &dev_skipped);
            (full_train, dev_data)
        }
        None => split_train_dev(&full_train, config.dev_fraction, config.seed)?,
    };

    let vocab = Vocabulary::build(&train_data, config.min_freq)?;
    let table = ScoreTable::learn(&train_data, &vocab, config.smoothing, config.count_mode);

    let outcome = run_with_threads(args.shared.threads, || {
        train(&train_data, &dev_data, &table, &vocab, &config)
    })?;

    save_model(&args.model_out, &outcome.params, &vocab, &labels, &config)?;
    if args.history_out.is_some() {
        write_csv_artifact(
            args.history_out.as_ref(),
            &banner,
            &history_csv(&outcome.history),
        )?;
    }

    let best = &outcome.history[outcome.best_epoch - 1];
    println!(
        "trained on {} examples, validated on {}",
        train_data.len(),
        dev_data.len()
    );
    println!("vocabulary: {} words", vocab.len());
    println!(
        "best epoch {} of {}: dev accuracy {:.4}",
        best.epoch,
        outcome.history.len(),
        best.dev_accuracy
    );
    println!("model written to {}", args.model_out.display());
    Ok(())
}
