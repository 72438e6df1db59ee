use score_embed::corpus::tokenize;
use score_embed::optim::predict_label;
use score_embed::persist::load_model;
use score_embed::timeline::aggregate_timeline_file;

use crate::args::TimelineArgs;
use crate::runcfg::{echo_banner, run_banner, write_csv_artifact};
use crate::CliError;

pub fn run(args: TimelineArgs) -> Result<(), CliError> {
    let loaded = load_model(&args.model)?;

    let mut fields = vec![
        ("model", args.model.display().to_string()),
        ("input", args.input.display().to_string()),
    ];
    if let Some(path) = &args.csv_out {
        fields.push(("csv_out", path.display().to_string()));
    }
    let banner = run_banner("timeline", &fields, None);
    echo_banner(&banner);

    let min_len = loaded.config.effective_min_len();
    let classes = loaded.labels.len();
    let report = aggregate_timeline_file(&args.input, classes, |text| {
        let tokens = tokenize(text, loaded.config.twitter_normalize);
        if tokens.is_empty() {
            return None;
        }
        let indices = loaded.vocab.encode(&tokens, min_len);
        predict_label(&loaded.params, &indices).ok()
    })?;

    eprintln!(
        "accepted {} records, rejected {}",
        report.accepted, report.rejected
    );
    for (line, reason) in &report.reject_reasons {
        eprintln!("rejected {}:{line}: {reason}", args.input.display());
    }

    write_csv_artifact(
        args.csv_out.as_ref(),
        &banner,
        &report.to_csv(loaded.labels.names())?,
    )
}
