//! The command-line tool: exit codes, diagnostics and output files.

use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_hyperlac");

fn hyperlac(args: &[&str], config: Option<&str>, dir: &Path) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args).arg("--out").arg(dir.join("out"));
    if let Some(text) = config {
        let path = dir.join("run.cfg");
        std::fs::write(&path, text).unwrap();
        cmd.arg("--config").arg(path);
    }
    cmd.env_remove("HYPERLAC_THREADS").output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn empty_family_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperlac(&["plancherel"], Some("family =\n"), dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`family`"), "{}", stderr(&o));
    assert!(!dir.path().join("out/plancherel.csv").exists());
}

#[test]
fn unknown_key_and_bad_value_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperlac(&["region"], Some("region.colour = red\n"), dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("region.colour"));
    let o = hyperlac(&["region"], Some("region.samples = many\n"), dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("region.samples"));
}

#[test]
fn alpha_on_the_boundary_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperlac(&["i3"], Some("i3.dimensions = 2\ni3.alphas = -0.5\n"), dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("i3.alphas"));
}

#[test]
fn unknown_command_and_bad_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(hyperlac(&["everything"], None, dir.path()).status.code(), Some(2));
    let o = Command::new(BIN)
        .args(["region", "--out"])
        .arg(dir.path())
        .env("HYPERLAC_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("HYPERLAC_THREADS"));
}

#[test]
fn region_writes_the_boundary_vertices() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperlac(&["region"], Some("region.dimensions = 2\n"), dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = dir.path().join("out");
    let poly = std::fs::read_to_string(out.join("region-polyline-n2.csv")).unwrap();
    assert!(poly.starts_with("inv_p,re_alpha,curve\n"));
    assert!(poly.contains("\n0.5,-0.5,lacunary\n"));
    assert!(poly.contains("\n1,0,lacunary\n"));
    let vertices = std::fs::read_to_string(out.join("region-vertices-n2.csv")).unwrap();
    for v in [
        "O,0,0,lacunary",
        "D,0.5,-0.5,lacunary",
        "E,1,0,lacunary",
        "A,0.25,-0.0625,full",
        "B,0.5,0,full",
        "C,1,1,full",
    ] {
        assert!(vertices.contains(v), "missing {v}");
    }
    assert!(out.join("region.csv").exists() && out.join("metadata.txt").exists());
}

#[test]
fn csv_bodies_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        for cmd in ["region", "cz-tails", "i3"] {
            assert_eq!(hyperlac(&[cmd], None, dir).status.code(), Some(0));
        }
    }
    for name in ["region.csv", "region-polyline-n3.csv", "cz-tails.csv", "i3.csv"] {
        let x = std::fs::read(a.path().join("out").join(name)).unwrap();
        let y = std::fs::read(b.path().join("out").join(name)).unwrap();
        assert_eq!(x, y, "{name} differs between runs");
    }
}

#[test]
fn numerical_failure_exits_with_one_and_names_the_parameters() {
    // On R_max = 2 the slowly decaying family members are not negligible at
    // the grid edge, so the forward tail check fails.
    let dir = tempfile::tempdir().unwrap();
    let cfg = "grid.r_max = 2\nplancherel.dimensions = 2\n";
    let o = hyperlac(&["plancherel"], Some(cfg), dir.path());
    assert_eq!(o.status.code(), Some(1));
    let msg = stderr(&o);
    assert!(msg.contains("numerical failure at (n=2"), "{msg}");
}

#[test]
fn failed_check_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperlac(&["region"], Some("region.tolerance = 1e-12\n"), dir.path());
    assert_eq!(o.status.code(), Some(1));
    let csv = std::fs::read_to_string(dir.path().join("out/region.csv")).unwrap();
    assert!(csv
        .lines()
        .any(|l| l.starts_with("interpolation-infimum") && l.ends_with(",fail")));
}

#[test]
fn fine_seed_grids_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperlac(&["cz-tails", "--seed-grids", "fine"], None, dir.path());
    assert_eq!(o.status.code(), Some(0));
    let meta = std::fs::read_to_string(dir.path().join("out/metadata.txt")).unwrap();
    assert!(meta.contains("grid.n_r = 5120"));
}
