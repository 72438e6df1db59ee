use score_embed::corpus::Vocabulary;
use score_embed::ScoreTable;

use crate::args::ExportScoresArgs;
use crate::runcfg::{
    echo_banner, format_name, load_labeled, report_skipped, resolve_labels, resolve_train_config,
    run_banner, write_csv_artifact,
};
use crate::CliError;

pub fn run(args: ExportScoresArgs) -> Result<(), CliError> {
    let config = resolve_train_config(&args.shared)?;
    let labels = resolve_labels(args.shared.format, args.shared.labels.as_ref())?;

    let mut fields = vec![("train", args.train.display().to_string())];
    if let Some(path) = &args.shared.labels {
        fields.push(("labels", path.display().to_string()));
    }
    if let Some(k) = args.top_k {
        fields.push(("top_k", k.to_string()));
    }
    if let Some(path) = &args.out {
        fields.push(("out", path.display().to_string()));
    }
    fields.push(("format", format_name(args.shared.format).to_string()));
    let banner = run_banner("export-scores", &fields, Some(&config));
    echo_banner(&banner);

    let (data, skipped) = load_labeled(
        args.shared.format,
        &args.train,
        &labels,
        config.twitter_normalize,
    )?;
    report_skipped(&args.train, &skipped);

    let vocab = Vocabulary::build(&data, config.min_freq)?;
    let table = ScoreTable::learn(&data, &vocab, config.smoothing, config.count_mode);
    write_csv_artifact(args.out.as_ref(), &banner, &table.export(&vocab, args.top_k))
}
