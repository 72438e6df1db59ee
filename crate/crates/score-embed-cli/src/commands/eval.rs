use std::path::PathBuf;

use score_embed::baselines::load_lexicon;
use score_embed::corpus::Dataset;
use score_embed::optim::{evaluate, Metrics};
use score_embed::par::run_with_threads;
use score_embed::persist::load_model;

use crate::args::{DataFormat, EvalArgs};
use crate::runcfg::{
    echo_banner, format_name, load_labeled, report_skipped, resolve_labels, run_banner,
    write_csv_artifact,
};
use crate::CliError;

pub fn run(args: EvalArgs) -> Result<(), CliError> {
    match (&args.model, &args.lexicon_pos, &args.lexicon_neg) {
        (Some(model), None, None) => eval_model(&args, model.clone()),
        (None, Some(pos), Some(neg)) => eval_lexicon(&args, pos.clone(), neg.clone()),
        _ => Err(CliError::Usage(
            "pass either --model or the --lexicon-pos/--lexicon-neg pair".to_string(),
        )),
    }
}

fn eval_model(args: &EvalArgs, model_path: PathBuf) -> Result<(), CliError> {
    let loaded = load_model(&model_path)?;

    let mut fields = vec![
        ("model", model_path.display().to_string()),
        ("data", args.data.display().to_string()),
    ];
    push_common(&mut fields, args);
    let banner = run_banner("eval", &fields, None);
    echo_banner(&banner);

    if args.format == DataFormat::Sst {
        if args.labels.is_some() {
            return Err(CliError::Usage(
                "--labels cannot be combined with --format sst; the five sentiment labels are fixed"
                    .to_string(),
            ));
        }
        let expected = score_embed::corpus::sst_label_set();
        if loaded.labels.names() != expected.names() {
            return Err(CliError::Lib(score_embed::Error::invalid(format!(
                "model labels {:?} do not match the sentiment treebank labels",
                loaded.labels.names()
            ))));
        }
    } else if args.labels.is_some() {
        return Err(CliError::Usage(
            "--labels cannot be used when evaluating a model; the model file fixes the labels"
                .to_string(),
        ));
    }

    let (data, skipped) = load_labeled(
        args.format,
        &args.data,
        &loaded.labels,
        loaded.config.twitter_normalize,
    )?;
    report_skipped(&args.data, &skipped);

    let min_len = loaded.config.effective_min_len();
    let metrics = run_with_threads(args.threads, || {
        evaluate(&loaded.params, &data, &loaded.vocab, min_len)
    })?;

    report(&metrics, loaded.labels.names());
    write_csv_artifact(
        args.csv_out.as_ref(),
        &banner,
        &metrics.to_csv(loaded.labels.names()),
    )
}

fn eval_lexicon(args: &EvalArgs, pos: PathBuf, neg: PathBuf) -> Result<(), CliError> {
    if args.format == DataFormat::Sst {
        return Err(CliError::Usage(
            "the lexicon rule is three-class; it cannot score the five-label sst format".to_string(),
        ));
    }
    let labels = resolve_labels(args.format, args.labels.as_ref())?;
    if labels.len() != 3 {
        return Err(CliError::Usage(format!(
            "the lexicon rule needs exactly 3 labels ordered negative, neutral, positive; got {}",
            labels.len()
        )));
    }

    let mut fields = vec![
        ("lexicon_pos", pos.display().to_string()),
        ("lexicon_neg", neg.display().to_string()),
        ("data", args.data.display().to_string()),
    ];
    if let Some(path) = &args.labels {
        fields.push(("labels", path.display().to_string()));
    }
    push_common(&mut fields, args);
    let banner = run_banner("eval", &fields, None);
    echo_banner(&banner);

    let load = load_lexicon(&pos, &neg)?;
    if !load.dropped.is_empty() {
        eprintln!(
            "dropped {} words present in both lexicon lists",
            load.dropped.len()
        );
    }
    let (data, skipped) = load_labeled(args.format, &args.data, &labels, false)?;
    report_skipped(&args.data, &skipped);

    let metrics = lexicon_metrics(&load.lexicon, &data)?;
    report(&metrics, labels.names());
    write_csv_artifact(args.csv_out.as_ref(), &banner, &metrics.to_csv(labels.names()))
}

pub fn lexicon_metrics(
    lexicon: &score_embed::baselines::Lexicon,
    data: &Dataset,
) -> Result<Metrics, CliError> {
    let pairs: Vec<(usize, usize)> = data
        .examples
        .iter()
        .map(|ex| (ex.label, lexicon.classify(&ex.tokens).as_label()))
        .collect();
    Ok(Metrics::from_pairs(&pairs, data.n_classes())?)
}

fn push_common(fields: &mut Vec<(&str, String)>, args: &EvalArgs) {
    if let Some(path) = &args.csv_out {
        fields.push(("csv_out", path.display().to_string()));
    }
    fields.push(("format", format_name(args.format).to_string()));
    fields.push(("threads", args.threads.to_string()));
}

fn report(metrics: &Metrics, labels: &[String]) {
    let correct: u64 = (0..labels.len()).map(|c| metrics.confusion_at(c, c)).sum();
    println!("accuracy {:.4} ({correct}/{})", metrics.accuracy, metrics.n);
    println!("macro F1 {:.4}", metrics.macro_f1);
    let name_width = labels.iter().map(|l| l.len()).max().unwrap_or(0);
    println!("confusion (rows = true label):");
    for (c, label) in labels.iter().enumerate() {
        let row: Vec<String> = (0..labels.len())
            .map(|p| metrics.confusion_at(c, p).to_string())
            .collect();
        println!("  {label:>name_width$}  {}", row.join(" "));
    }
}
