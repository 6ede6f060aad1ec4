use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use singosc_cli::args::Cli;
use singosc_cli::config::RunConfig;
use singosc_cli::{commands, CliError, EXIT_CONFIG, EXIT_OK};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::from(EXIT_OK as u8);
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("{}", CliError::config(first.trim_start_matches("error: ")));
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::from(EXIT_OK as u8),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cli.apply(&mut cfg);
    let outcome = commands::run(&cli.command, &cfg)?;
    match cfg.output.str("out") {
        Some(path) => std::fs::write(Path::new(path), &outcome.text).map_err(|e| {
            CliError::config(format!(
                "{}: cannot write '{path}': {e}",
                cfg.output.locate("out")
            ))
        })?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(outcome.text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::solver(format!("cannot write to stdout: {e}")))?;
        }
    }
    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
