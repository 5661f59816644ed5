//! `hyperlac <command> [--config PATH] [--out DIR] [--seed-grids default|fine]`
//!
//! Exit status: 0 when every check passes, 1 on a failed check or a
//! numerical failure, 2 on a configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use hyperlac::harness::{exit_code, run, validate_config, Command, ExperimentConfig, THREADS_ENV};
use hyperlac::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeedGrids {
    /// The configured grids.
    Default,
    /// The configured grids with both node counts doubled.
    Fine,
}

#[derive(Debug, Parser)]
#[command(
    name = "hyperlac",
    version,
    about = "Numerical checks for radial harmonic analysis on hyperbolic space"
)]
struct Cli {
    /// plancherel, symbol-estimates, i3, kunze-stein, cz-tails, maximal-sweep, region or all.
    command: String,
    /// Configuration file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory; overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = SeedGrids::Default)]
    seed_grids: SeedGrids,
}

fn configure(cli: &Cli) -> Result<(Command, ExperimentConfig), Error> {
    let command: Command = cli.command.parse()?;
    let text = match &cli.config {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Config {
            key: "--config".into(),
            msg: format!("cannot read {}: {e}", path.display()),
        })?,
        None => String::new(),
    };
    let mut config = validate_config(&text)?;
    if let Some(out) = &cli.out {
        config.output_dir = out.clone();
    }
    if cli.seed_grids == SeedGrids::Fine {
        config.grid = config.grid.refined();
    }
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let threads: usize = raw
            .trim()
            .parse()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| Error::Config {
                key: THREADS_ENV.into(),
                msg: format!("expected a positive integer, got `{raw}`"),
            })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::Config {
                key: THREADS_ENV.into(),
                msg: e.to_string(),
            })?;
    }
    Ok((command, config))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure(&cli).and_then(|(command, config)| run(command, &config));
    match &result {
        Ok(report) => {
            for e in &report.experiments {
                let failed = e.rows.iter().filter(|r| !r.passed()).count();
                println!(
                    "{:<17} {}  {:>8.2} s  {} ({} failed rows)",
                    e.command,
                    if e.pass { "pass" } else { "FAIL" },
                    e.wall_clock.as_secs_f64(),
                    e.csv_path.display(),
                    failed
                );
            }
            println!(
                "aggregate {} in {:.2} s",
                if report.pass() { "pass" } else { "FAIL" },
                report.wall_clock.as_secs_f64()
            );
        }
        Err(e) => eprintln!("hyperlac: {e}"),
    }
    ExitCode::from(exit_code(&result) as u8)
}
