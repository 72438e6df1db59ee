use score_embed::optim::cross_validate;
use score_embed::par::run_with_threads;

use crate::args::CvArgs;
use crate::runcfg::{
    echo_banner, format_name, load_labeled, report_skipped, resolve_labels, resolve_train_config,
    run_banner, write_csv_artifact,
};
use crate::CliError;

pub fn run(args: CvArgs) -> Result<(), CliError> {
    let config = resolve_train_config(&args.shared)?;
    let labels = resolve_labels(args.shared.format, args.shared.labels.as_ref())?;

    let mut fields = vec![
        ("data", args.data.display().to_string()),
        ("k", args.k.to_string()),
    ];
    if let Some(path) = &args.shared.labels {
        fields.push(("labels", path.display().to_string()));
    }
    if let Some(path) = &args.csv_out {
        fields.push(("csv_out", path.display().to_string()));
    }
    fields.push(("format", format_name(args.shared.format).to_string()));
    fields.push(("threads", args.shared.threads.to_string()));
    let banner = run_banner("cv", &fields, Some(&config));
    echo_banner(&banner);

    let (data, skipped) = load_labeled(
        args.shared.format,
        &args.data,
        &labels,
        config.twitter_normalize,
    )?;
    report_skipped(&args.data, &skipped);

    let report = run_with_threads(args.shared.threads, || {
        cross_validate(&data, &config, args.k)
    })?;

    if args.csv_out.is_some() {
        println!(
            "{} folds over {} examples: mean accuracy {:.4} (stdev {:.4}), mean macro F1 {:.4}",
            args.k,
            data.len(),
            report.mean_accuracy,
            report.stdev_accuracy,
            report.mean_macro_f1
        );
    }
    write_csv_artifact(args.csv_out.as_ref(), &banner, &report.to_csv())
}
