use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

mod args;
mod cfgfile;
mod commands;
mod runcfg;

use args::{Cli, Command};

/// Exit taxonomy: 0 success, 1 usage, 2 data, 3 numeric failure.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(score_embed::Error),
    Numeric(String),
}

impl From<score_embed::Error> for CliError {
    fn from(e: score_embed::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Lib(e) => match e {
                score_embed::Error::NonFinite { .. } | score_embed::Error::Diverged { .. } => 3,
                _ => 2,
            },
            CliError::Numeric(_) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Lib(e) => e.to_string(),
            CliError::Numeric(m) => m.clone(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Train(a) => commands::train::run(a),
        Command::Eval(a) => commands::eval::run(a),
        Command::Predict(a) => commands::predict::run(a),
        Command::ExportScores(a) => commands::scores::run(a),
        Command::Gradcheck(a) => commands::gradcheck::run(a),
        Command::Cv(a) => commands::cv::run(a),
        Command::Timeline(a) => commands::timeline::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
