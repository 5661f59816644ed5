//! Check rows, CSV rendering and run summaries.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Duration;

use crate::error::Result;

/// Header shared by every per-command CSV.
pub const CSV_HEADER: &str = "experiment_id,anchor,n,alpha,p,jk,t,family,value,tolerance,pass";

/// Header of the region polyline CSV.
pub const POLYLINE_HEADER: &str = "inv_p,re_alpha,curve";

/// Outcome of one row. `Info` rows report a measurement without a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Info,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Self::Pass
        } else {
            Self::Fail
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::Info => "info",
        })
    }
}

/// One CSV row. Empty strings mark columns that do not apply.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub experiment_id: String,
    /// Statement of the inequality or identity being checked.
    pub anchor: String,
    pub n: Option<usize>,
    pub alpha: String,
    pub p: String,
    pub jk: String,
    pub t: String,
    pub family: String,
    pub value: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl Row {
    pub fn new(experiment_id: &str, anchor: &str) -> Self {
        Self {
            experiment_id: experiment_id.to_string(),
            anchor: anchor.to_string(),
            n: None,
            alpha: String::new(),
            p: String::new(),
            jk: String::new(),
            t: String::new(),
            family: String::new(),
            value: f64::NAN,
            tolerance: f64::NAN,
            verdict: Verdict::Info,
        }
    }

    pub fn n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn alpha(mut self, alpha: impl fmt::Display) -> Self {
        self.alpha = alpha.to_string();
        self
    }

    pub fn p(mut self, p: impl fmt::Display) -> Self {
        self.p = p.to_string();
        self
    }

    pub fn jk(mut self, j: usize, k: usize) -> Self {
        self.jk = format!("({j};{k})");
        self
    }

    /// Free-form depth description, e.g. a pair of compared depths.
    pub fn depth(mut self, depth: impl Into<String>) -> Self {
        self.jk = depth.into();
        self
    }

    pub fn t(mut self, t: impl fmt::Display) -> Self {
        self.t = t.to_string();
        self
    }

    pub fn family(mut self, family: impl fmt::Display) -> Self {
        self.family = family.to_string();
        self
    }

    /// Records `value` as a measurement without a check.
    pub fn info(mut self, value: f64) -> Self {
        self.value = value;
        self.verdict = Verdict::Info;
        self
    }

    /// Passes when `value <= tolerance`.
    pub fn at_most(mut self, value: f64, tolerance: f64) -> Self {
        self.value = value;
        self.tolerance = tolerance;
        self.verdict = Verdict::from_bool(value <= tolerance);
        self
    }

    /// Records `value` and `tolerance` with an externally decided verdict.
    pub fn judged(mut self, value: f64, tolerance: f64, ok: bool) -> Self {
        self.value = value;
        self.tolerance = tolerance;
        self.verdict = Verdict::from_bool(ok);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }

    pub fn csv(&self) -> String {
        let num = |x: f64| if x.is_nan() { String::new() } else { format!("{x:.9e}") };
        let fields = [
            self.experiment_id.clone(),
            self.anchor.clone(),
            self.n.map(|n| n.to_string()).unwrap_or_default(),
            self.alpha.clone(),
            self.p.clone(),
            self.jk.clone(),
            self.t.clone(),
            self.family.clone(),
            num(self.value),
            num(self.tolerance),
            self.verdict.to_string(),
        ];
        fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",")
    }
}

/// Quotes a field that contains a comma, quote or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// A CSV body: header plus rows, newline terminated.
pub fn render_csv(rows: &[Row]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    out
}

/// Output of one command before it is written to disk.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub rows: Vec<Row>,
    /// Additional files as `(file name, contents)`.
    pub extra_files: Vec<(String, String)>,
}

impl ExperimentOutput {
    pub fn new(rows: Vec<Row>) -> Self {
        Self {
            rows,
            extra_files: Vec::new(),
        }
    }

    pub fn pass(&self) -> bool {
        self.rows.iter().all(Row::passed)
    }
}

/// Summary of one executed command.
#[derive(Debug, Clone)]
pub struct ExperimentRecord {
    pub command: String,
    pub csv_path: PathBuf,
    pub extra_paths: Vec<PathBuf>,
    pub rows: Vec<Row>,
    pub pass: bool,
    pub wall_clock: Duration,
}

/// Result of [`run`](super::run): aggregate pass holds iff every row passes.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub experiments: Vec<ExperimentRecord>,
    pub metadata_path: PathBuf,
    pub wall_clock: Duration,
}

impl RunReport {
    pub fn pass(&self) -> bool {
        self.experiments.iter().all(|e| e.pass)
    }

    pub fn experiment(&self, command: &str) -> Option<&ExperimentRecord> {
        self.experiments.iter().find(|e| e.command == command)
    }

    /// Every row of every experiment with the given id.
    pub fn rows(&self, experiment_id: &str) -> Vec<&Row> {
        self.experiments
            .iter()
            .flat_map(|e| e.rows.iter())
            .filter(|r| r.experiment_id == experiment_id)
            .collect()
    }

    pub fn csv_paths(&self) -> Vec<&Path> {
        self.experiments.iter().map(|e| e.csv_path.as_path()).collect()
    }
}

/// Writes `contents` to `path` through a temporary sibling and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_rendering() {
        let r = Row::new("x", "a <= b, always").n(2).alpha("0.5+1i").at_most(0.5, 1.0);
        assert_eq!(
            r.csv(),
            "x,\"a <= b, always\",2,0.5+1i,,,,,5.000000000e-1,1.000000000e0,pass"
        );
        let f = Row::new("y", "z").at_most(2.0, 1.0);
        assert!(!f.passed());
        assert!(Row::new("i", "m").info(3.0).passed());
        assert!(render_csv(&[r]).starts_with(CSV_HEADER));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.csv");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert!(!dir.path().join("a.tmp").exists());
    }
}
