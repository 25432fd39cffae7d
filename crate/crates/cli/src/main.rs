mod args;
mod commands;
mod envelope;

use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use thiserror::Error;

use args::{Cli, Command};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INFEASIBLE: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] spincollapse_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("cannot read document: {0}")]
    Document(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(_) | CliError::Document(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_FAILURE,
        }
    }
}

/// Rendered output plus the exit status it should be reported with.
pub struct Output {
    pub text: String,
    pub code: u8,
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let (output, out_path) = match cli.command {
        Command::Solve(a) => {
            let out = a.common.out.clone();
            (commands::solve(&a)?, out)
        }
        Command::Landscape(a) => {
            let out = a.common.out.clone();
            (commands::landscape(&a)?, out)
        }
        Command::Oracle(a) => {
            let out = a.common.out.clone();
            (commands::oracle(&a)?, out)
        }
        Command::Simulate(a) => {
            let out = a.common.out.clone();
            (commands::simulate(&a)?, out)
        }
        Command::Replay(a) => (commands::replay(&a.document)?, a.out),
    };
    emit(out_path.as_deref(), &output.text)?;
    Ok(output.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
