mod args;
mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("BELLWALK_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("BELLWALK_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Runtime(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let settings = config::resolve(cli.command.name(), cli.command.args())?;
    for w in &settings.warnings {
        eprintln!("warning: {w}");
    }
    let outcome = match &cli.command {
        Command::Simulate(_) => commands::simulate(&settings),
        Command::CheckClosedForm(_) => commands::check_closed_form(&settings),
        Command::EntropySeries(_) => commands::entropy(&settings),
        Command::Grid(_) => commands::grid(&settings),
        Command::Epower(_) => commands::epower(&settings),
        Command::Renyi(_) => commands::renyi(&settings),
        Command::ContinuumCheck(_) => commands::continuum_check(&settings),
        Command::Fit(_) => commands::fit(&settings),
    }?;
    output::write(&outcome.payload, &settings.meta(), settings.format, settings.output.as_deref())?;
    match outcome.after {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bellwalk: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
