//! `pmcsynth`: parameter synthesis for parametric Markov chains.

mod args;
mod commands;
mod report;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    let json = cli.json;
    match commands::run(cli) {
        Ok(report) => {
            report.print(json);
            ExitCode::from(report.code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.error);
            if let Some(report) = failure.partial {
                report.print(json);
            }
            ExitCode::from(commands::exit_code(&failure.error))
        }
    }
}
