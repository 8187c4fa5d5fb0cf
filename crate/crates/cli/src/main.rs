use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qndsim_cli::{format_diagnostics, CliError, RunOptions, Scenario};

#[derive(Parser)]
#[command(name = "qndsim", version, about = "Heterodyne QND detection simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every scenario in a config and write artifacts plus a manifest.
    Run {
        config: PathBuf,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (default: config output_dir, then ./qndsim-out).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override a field, e.g. --set scenarios.0.probe.sideband_power_nw=120
        #[arg(long = "set", value_name = "PATH=VALUE")]
        set: Vec<String>,
    },
    /// Parse a config and report out-of-regime settings without running.
    Validate {
        config: PathBuf,
        #[arg(long = "set", value_name = "PATH=VALUE")]
        set: Vec<String>,
    },
    /// List the available scenario kinds.
    ListScenarios,
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config, seed, out, set } => {
            let options = RunOptions {
                seed,
                output_dir: out,
                overrides: set,
            };
            let (dir, manifest) = qndsim_cli::run(&config, &options)?;
            println!(
                "wrote {} artifacts for {} scenarios to {} (config {}, seed {})",
                manifest.artifacts.len(),
                manifest.scenarios.len(),
                dir.display(),
                &manifest.config_hash[..12],
                manifest.seed
            );
        }
        Command::Validate { config, set } => {
            let cfg = qndsim_cli::validate(&config, &set)?;
            println!("{}: ok ({} scenarios)", config.display(), cfg.scenarios.len());
        }
        Command::ListScenarios => {
            for (kind, about) in Scenario::KINDS {
                println!("{kind:<18} {about}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            match &err {
                CliError::Regime(diags) => eprintln!("error: out-of-regime configuration\n{}", format_diagnostics(diags)),
                other => eprintln!("error: {other:#}"),
            }
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
