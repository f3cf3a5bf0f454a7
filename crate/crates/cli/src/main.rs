use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

mod commands;
mod config;
mod error;
mod output;

use config::RunConfig;
use error::{exit, CliError};

/// Gauge-invariant quantum Rabi model runs driven by a JSON configuration.
///
/// Exit status: 0 ok, 1 i/o, 2 config, 3 low two-level validity,
/// 4 solver failure, 5 cutoff not converged, 6 gauge check failed.
#[derive(Debug, Parser)]
#[command(name = "gqrm", version)]
struct Cli {
    /// Run configuration (JSON).
    config: PathBuf,
    /// Override a config entry, e.g. `--set sweep.eta_max=3` (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("GQRM_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::config(format!("GQRM_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::config(format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = configure_threads()
        .and_then(|_| RunConfig::load(&cli.config, &cli.overrides))
        .and_then(|(config, base)| commands::run(&config, &base))
        .unwrap_or_else(|e| {
            eprintln!("error: {e}");
            e.exit_code()
        });
    debug_assert!((exit::OK..=exit::GAUGE_CHECK).contains(&code));
    ExitCode::from(code as u8)
}
