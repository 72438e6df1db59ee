use std::io::{BufRead, Write};
use std::path::Path;

use score_embed::corpus::tokenize;
use score_embed::model::{forward, softmax, ForwardMode};
use score_embed::persist::load_model;

use crate::args::PredictArgs;
use crate::runcfg::{echo_banner, run_banner};
use crate::CliError;

pub fn run(args: PredictArgs) -> Result<(), CliError> {
    let loaded = load_model(&args.model)?;
    let banner = run_banner(
        "predict",
        &[("model", args.model.display().to_string())],
        None,
    );
    echo_banner(&banner);

    let min_len = loaded.config.effective_min_len();
    let stdin = std::io::stdin();
    let mut input = stdin.lock();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut buf = Vec::new();
    loop {
        buf.clear();
        let n = input
            .read_until(b'\n', &mut buf)
            .map_err(|e| CliError::Lib(score_embed::Error::io(Path::new("stdin"), e)))?;
        if n == 0 {
            break;
        }
        while buf.last() == Some(&b'\n') || buf.last() == Some(&b'\r') {
            buf.pop();
        }
        let line = match std::str::from_utf8(&buf) {
            Ok(line) => line,
            Err(_) => {
                // Not decodable: echo it back marked, never guess a label.
                writeln!(out, "ERROR\t{}", String::from_utf8_lossy(&buf))
                    .map_err(|e| CliError::Lib(score_embed::Error::io(Path::new("stdout"), e)))?;
                continue;
            }
        };
        let tokens = tokenize(line, loaded.config.twitter_normalize);
        if tokens.is_empty() {
            writeln!(out, "ERROR\t{line}")
                .map_err(|e| CliError::Lib(score_embed::Error::io(Path::new("stdout"), e)))?;
            continue;
        }
        let indices = loaded.vocab.encode(&tokens, min_len);
        let (logits, _) = forward(&loaded.params, &indices, ForwardMode::Eval)?;
        let probs = softmax(&logits);
        let mut label = 0;
        for (c, &l) in logits.iter().enumerate() {
            if l > logits[label] {
                label = c;
            }
        }
        let rendered: Vec<String> = probs.iter().map(|p| format!("{p}")).collect();
        writeln!(out, "{}\t{}", loaded.labels.name(label), rendered.join("\t"))
            .map_err(|e| CliError::Lib(score_embed::Error::io(Path::new("stdout"), e)))?;
    }
    Ok(())
}
