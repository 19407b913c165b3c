mod args;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::CliError;

const THREADS_VAR: &str = "THERMOCORR_THREADS";

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = match raw.trim().parse() {
        Ok(t) if t > 0 => t,
        _ => {
            return Err(CliError::Validation(format!(
                "{THREADS_VAR} must be a positive integer, got {raw:?}"
            )))
        }
    };
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    configure_threads()?;
    let seed = cli.common.seed;
    let (report, ok) = match (&cli.command, cli.selftest) {
        (_, true) => commands::selftest(cli.trials, seed)?,
        (Some(Command::Threshold(a)), _) => (commands::threshold(a)?, true),
        (Some(Command::Protocol(a)), _) => (commands::protocol(a)?, true),
        (Some(Command::Sweep(a)), _) => (commands::sweep(a, seed)?, true),
        (Some(Command::Optimize(a)), _) => (commands::optimize(a, seed)?, true),
        (None, false) => return Err(CliError::Validation("a command or --selftest is required".into())),
    };
    let bytes = report.render(cli.common.format).map_err(CliError::Internal)?;
    match &cli.common.out {
        Some(path) => std::fs::write(path, &bytes)
            .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))?,
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| CliError::Internal(e.to_string()))?,
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: invariant violations found");
            ExitCode::from(1)
        }
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
