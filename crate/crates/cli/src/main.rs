mod args;
mod commands;
mod config;
mod scanfile;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::Cli;
use crate::config::{Failure, RunConfig};

pub(crate) const SCHEMA_VERSION: u32 = 1;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}

fn execute(cli: Cli) -> Result<u8, Failure> {
    let config = RunConfig::from_cli(cli.command)?;
    let outcome = commands::run(&config)?;
    match &config.output {
        Some(path) => {
            std::fs::write(path, &outcome.document)
                .map_err(|e| Failure::validation(format!("cannot write {}: {e}", path.display())))?;
            if let Some(s) = &outcome.summary {
                print!("{s}");
            }
        }
        None => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(outcome.document.as_bytes());
            if let Some(s) = &outcome.summary {
                eprint!("{s}");
            }
        }
    }
    Ok(outcome.exit_code)
}
