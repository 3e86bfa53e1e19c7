use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use roughfilm::cli::{RunManifest, EXIT_INPUT};

fn roughfilm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_roughfilm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn coeffs_prints_six_significant_digits() {
    let out = roughfilm(&["coeffs", "--n", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "N=2 A=1.08697 B=0.587386");
    let out = roughfilm(&["coeffs", "--n", "0"]);
    assert_eq!(stdout(&out).trim(), "N=0 A=1.00000 B=0.500000");
}

#[test]
fn invalid_input_exits_with_input_code() {
    for args in [
        vec!["coeffs", "--n", "-1"],
        vec!["coeffs", "--n", "1000"],
        vec!["solve", "--nx", "8"],
        vec!["velocity", "--scenario", "fig2", "--x", "1.5", "--y", "0.5"],
        vec!["velocity", "--scenario", "fig2", "--x", "0.5", "--y", "0.5", "--nz", "4"],
    ] {
        let out = roughfilm(&args);
        assert_eq!(out.status.code(), Some(EXIT_INPUT), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn malformed_config_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    fs::write(&path, "grid.nx = 8\nnot a pair\n").unwrap();
    let out = roughfilm(&["solve", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    fs::write(&path, "grid.nz = 8\n").unwrap();
    let out = roughfilm(&["solve", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid.nz"));
}

fn data_rows(path: &Path) -> usize {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('x'))
        .count()
}

#[test]
fn solve_writes_listed_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "grid.nx = 12\ngrid.ny = 10\nrough.region.1 = 0.5,0,1,1,n=2\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = roughfilm(&["solve", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    assert_eq!(data_rows(&out_dir.join("pressure.csv")), 13 * 11);
    assert_eq!(data_rows(&out_dir.join("fields.csv")), 12 * 10);
    let manifest = fs::read_to_string(out_dir.join("manifest.txt")).unwrap();
    for name in RunManifest::parse_outputs(&manifest) {
        assert!(out_dir.join(&name).is_file(), "{name} listed but missing");
    }
    for key in ["command=solve", "solve.iterations=", "wall_time_s=", "grid.nx = 12", "rough.region.1"] {
        assert!(manifest.contains(key), "manifest lacks {key}");
    }
}

#[test]
fn velocity_profile_meets_wall_conditions() {
    let out = roughfilm(&["velocity", "--scenario", "fig3", "--nx", "16", "--ny", "16", "--x", "0.75", "--y", "0.5", "--nz", "16"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("Z,ux,uy"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 17);
    assert_eq!(rows[0], vec![0.0, 1.0, 0.0]);
    assert_eq!(rows[16][0], 1.0);
    assert!(rows[16][1].abs() < 1e-12 && rows[16][2].abs() < 1e-12);
}

#[test]
fn compare_without_amplitude_reports_zero_difference() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("flat.cfg");
    fs::write(&cfg, "grid.nx = 16\ngrid.ny = 16\nrough.region.1 = 0.5,0,1,1,amp=0,wav=3\n").unwrap();
    let out_dir = dir.path().join("cmp");
    let out = roughfilm(&["compare", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let metrics = fs::read_to_string(out_dir.join("metrics.txt")).unwrap();
    for line in metrics.lines() {
        let (_, v) = line.split_once('=').unwrap();
        assert!(v.trim().parse::<f64>().unwrap() <= 1e-9, "{line}");
    }
    let manifest = fs::read_to_string(out_dir.join("manifest.txt")).unwrap();
    assert_eq!(RunManifest::parse_outputs(&manifest).len(), 4);
}

#[test]
fn compare_of_smooth_config_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = roughfilm(&["compare", "--scenario", "fig2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
}
