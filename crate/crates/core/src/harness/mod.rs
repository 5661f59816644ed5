//! Experiment orchestration: configuration, the checks behind each command,
//! and CSV reports.
//!
//! Every command writes `<command>.csv` with the header [`CSV_HEADER`] into
//! the output directory. `symbol-estimates` also writes
//! `symbol-estimates-fits.csv`; `region` also writes one boundary polyline
//! (`inv_p,re_alpha,curve`) and one vertex table per dimension. Wall-clock
//! times and timestamps go to `metadata.txt` only, so CSV bodies are
//! identical across runs with the same configuration.

pub mod config;
pub mod experiments;
pub mod report;

use std::fmt;
use std::str::FromStr;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use crate::error::{Error, Result};

pub use config::{validate_config, AlphaSpec, ExperimentConfig, GridConfig};
pub use experiments::Context;
pub use report::{
    render_csv, ExperimentOutput, ExperimentRecord, Row, RunReport, Verdict, CSV_HEADER, POLYLINE_HEADER,
};

/// Environment variable selecting the worker thread count.
pub const THREADS_ENV: &str = "HYPERLAC_THREADS";

/// A harness command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Plancherel,
    SymbolEstimates,
    I3,
    KunzeStein,
    CzTails,
    MaximalSweep,
    Region,
    All,
}

impl Command {
    /// Every concrete command in execution order.
    pub const EACH: [Command; 7] = [
        Self::Plancherel,
        Self::SymbolEstimates,
        Self::I3,
        Self::KunzeStein,
        Self::CzTails,
        Self::MaximalSweep,
        Self::Region,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Plancherel => "plancherel",
            Self::SymbolEstimates => "symbol-estimates",
            Self::I3 => "i3",
            Self::KunzeStein => "kunze-stein",
            Self::CzTails => "cz-tails",
            Self::MaximalSweep => "maximal-sweep",
            Self::Region => "region",
            Self::All => "all",
        }
    }

    fn expand(self) -> Vec<Command> {
        match self {
            Self::All => Self::EACH.to_vec(),
            c => vec![c],
        }
    }

    fn execute(self, ctx: &Context) -> Result<ExperimentOutput> {
        match self {
            Self::Plancherel => experiments::plancherel(ctx),
            Self::SymbolEstimates => experiments::symbol_estimates(ctx),
            Self::I3 => experiments::i3(ctx),
            Self::KunzeStein => experiments::kunze_stein(ctx),
            Self::CzTails => experiments::cz_tails(ctx),
            Self::MaximalSweep => experiments::maximal_sweep(ctx),
            Self::Region => experiments::region(ctx),
            Self::All => unreachable!("`all` is expanded before execution"),
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::EACH
            .iter()
            .chain(std::iter::once(&Self::All))
            .find(|c| c.name() == s)
            .copied()
            .ok_or_else(|| Error::Config {
                key: "command".into(),
                msg: format!("unknown command `{s}`"),
            })
    }
}

fn unix_seconds() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

/// Runs `command` and writes its CSV files into `config.output_dir`.
/// Files are written after every check of the run has completed.
pub fn run(command: Command, config: &ExperimentConfig) -> Result<RunReport> {
    let started = unix_seconds();
    let clock = Instant::now();
    let ctx = Context::new(config);
    let mut outputs = Vec::new();
    for c in command.expand() {
        let t0 = Instant::now();
        let out = c.execute(&ctx)?;
        outputs.push((c, out, t0.elapsed()));
    }

    let dir = &config.output_dir;
    std::fs::create_dir_all(dir)?;
    let mut experiments = Vec::new();
    for (c, out, elapsed) in outputs {
        let csv_path = dir.join(format!("{}.csv", c.name()));
        report::write_atomic(&csv_path, &render_csv(&out.rows))?;
        let mut extra_paths = Vec::new();
        for (name, body) in &out.extra_files {
            let path = dir.join(name);
            report::write_atomic(&path, body)?;
            extra_paths.push(path);
        }
        experiments.push(ExperimentRecord {
            command: c.name().to_string(),
            csv_path,
            extra_paths,
            pass: out.pass(),
            rows: out.rows,
            wall_clock: elapsed,
        });
    }

    let wall_clock = clock.elapsed();
    let metadata_path = dir.join("metadata.txt");
    let mut meta = format!(
        "command = {command}\nstarted_unix = {started:.3}\nfinished_unix = {:.3}\nwall_clock_s = {:.3}\n",
        unix_seconds(),
        wall_clock.as_secs_f64()
    );
    for e in &experiments {
        meta.push_str(&format!(
            "experiment.{} = {} in {:.3} s ({} rows)\n",
            e.command,
            if e.pass { "pass" } else { "fail" },
            e.wall_clock.as_secs_f64(),
            e.rows.len()
        ));
    }
    meta.push_str(&format!(
        "aggregate = {}\n\n# configuration\n{}",
        if experiments.iter().all(|e| e.pass) {
            "pass"
        } else {
            "fail"
        },
        config.to_text()
    ));
    report::write_atomic(&metadata_path, &meta)?;

    Ok(RunReport {
        experiments,
        metadata_path,
        wall_clock,
    })
}

/// Exit status of the command-line tool: 0 on aggregate pass, 1 on a failed
/// check or numerical failure, 2 on a configuration error.
pub fn exit_code(result: &Result<RunReport>) -> i32 {
    match result {
        Ok(r) if r.pass() => 0,
        Ok(_) => 1,
        Err(Error::Config { .. }) => 2,
        Err(_) => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_names_round_trip() {
        for c in Command::EACH.iter().chain([Command::All].iter()) {
            assert_eq!(c.name().parse::<Command>().unwrap(), *c);
        }
        assert!("bogus".parse::<Command>().is_err());
        assert_eq!(Command::All.expand().len(), 7);
    }

    #[test]
    fn region_command_writes_polyline() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = validate_config("region.dimensions = 2").unwrap();
        cfg.output_dir = dir.path().to_path_buf();
        let rep = run(Command::Region, &cfg).unwrap();
        assert!(rep.pass());
        let poly = std::fs::read_to_string(dir.path().join("region-polyline-n2.csv")).unwrap();
        assert!(poly.starts_with(POLYLINE_HEADER));
        assert!(poly.contains("\n0.5,-0.5,lacunary\n"));
        assert!(poly.contains("\n1,0,lacunary\n"));
        assert_eq!(exit_code(&Ok(rep)), 0);
        let err = Err(Error::Config {
            key: "family".into(),
            msg: "empty".into(),
        });
        assert_eq!(exit_code(&err), 2);
    }
}
