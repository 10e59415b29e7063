//! `tc-squeeze` command-line front end.
//!
//! Exit status: 0 on success, 2 for bad input or configuration, 3 when the
//! numerics cannot meet their own accuracy bounds.

mod config;
mod run;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Config(anyhow::Error),
    Numerical(anyhow::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            Self::Config(_) => 2,
            Self::Numerical(_) => 3,
        }
    }
}

/// `TC_SQUEEZE_THREADS` caps the worker pool; unset or 0 means one per core.
fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("TC_SQUEEZE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Config(anyhow::anyhow!("TC_SQUEEZE_THREADS must be a count, got `{raw}`")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.into()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    let outcome = init_threads()
        .and_then(|()| RunConfig::from_cli(cli))
        .and_then(|cfg| run::run(&cfg));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (CliError::Config(msg) | CliError::Numerical(msg)) = &e;
            eprintln!("error: {msg:#}");
            ExitCode::from(e.code())
        }
    }
}
