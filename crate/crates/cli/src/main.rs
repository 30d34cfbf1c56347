use std::process::ExitCode;

use clap::Parser;

mod artifacts;
mod commands;
mod config;
mod error;

use config::{Command, CommonArgs, RunConfig};
use error::CliError;

/// Batch experiments for the deformed harmonic oscillator.
#[derive(Debug, Parser)]
#[command(name = "gupo", version)]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&cli.common, &cli.command)?;
    let outputs = commands::run(&cfg)?;
    artifacts::write_run(&cfg.out, &cfg, &outputs)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
