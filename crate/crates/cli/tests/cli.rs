use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lz(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lz-dissipate"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn read(path: &Path) -> (Value, Vec<String>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let meta = lines.next().unwrap().strip_prefix("# ").unwrap();
    (
        serde_json::from_str(meta).unwrap(),
        lines.map(String::from).collect(),
    )
}

#[test]
fn fig3_zero_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig3.csv");
    let o = lz(&["fig3", "--points", "4"], &out);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let (meta, lines) = read(&out);
    assert_eq!(meta["tool"], "lz-dissipate");
    assert_eq!(meta["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(meta["config"]["t_int"], -100.0);
    assert_eq!(meta["solver"]["rtol"], 1e-8);
    assert_eq!(meta["secular"]["violations"], 0);
    assert_eq!(lines[0], "theta_degrees,negativity");
    assert_eq!(lines.len(), 5);
    let last: Vec<&str> = lines[4].split(',').collect();
    assert_eq!(last[0], "9.0000000000000000e1");
    let n: f64 = last[1].parse().unwrap();
    assert!((n - 0.5).abs() < 1e-4);
}

#[test]
fn fig2_zero_temperature_row_is_infinite() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig2.csv");
    let o = lz(&["fig2", "--sweep-max", "5", "--points", "2"], &out);
    assert_eq!(o.status.code(), Some(0));
    let (_, lines) = read(&out);
    assert_eq!(lines[0], "T,tau_ent_formula,tau_ent_ode");
    assert!(lines[1].starts_with("0.0000000000000000e0,inf,"));
    let row: Vec<f64> = lines[2].split(',').map(|x| x.parse().unwrap()).collect();
    assert!((row[2] / row[1] - 1.0).abs() < 0.05);
}

#[test]
fn config_file_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "delta = 2.0\ntemperature = 0.5\n[sweep]\nvariable = \"theta\"\nmin = 0\nmax = 90\npoints = 3\n",
    )
    .unwrap();
    let out = dir.path().join("c.csv");
    let o = lz(
        &["custom", "--config", cfg.to_str().unwrap(), "--delta", "3"],
        &out,
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let (meta, lines) = read(&out);
    assert_eq!(meta["config"]["delta"], 3.0);
    assert_eq!(meta["config"]["temperature"], 0.5);
    assert_eq!(meta["resolved"]["bath"]["cutoff"], 1.0);
    assert!(lines[0].starts_with("theta_degrees,negativity,"));
    assert_eq!(lines.len(), 4);
}

#[test]
fn unknown_config_key_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "gamma = 1\n").unwrap();
    let o = lz(
        &["fig3", "--config", cfg.to_str().unwrap()],
        &dir.path().join("x.csv"),
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn config_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    for args in [
        &["fig3", "--delta", "-1"][..],
        &["fig3", "--points", "1"],
        &["fig3", "--sweep", "delta"],
        &["fig2", "--theta-deg", "30"],
        &["fig4", "--sweep-min", "0"],
        &["fig3", "--oracle"],
        &["custom", "--t-int", "5", "--t-end", "1"],
        &["custom", "--rtol", "0"],
        &["custom", "--bogus"],
        &["nosuchpreset"],
    ] {
        let o = lz(args, &out);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn solver_failure_exits_2_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fail.csv");
    let o = lz(&["custom", "--max-steps", "3"], &out);
    assert_eq!(o.status.code(), Some(2));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# {"));
    assert!(lines[1].starts_with("# error: maximum number of steps"));
}

#[test]
fn strict_secular_gate() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gate.csv");
    let args = ["custom", "--delta", "0.1", "--points", "41"];
    assert_eq!(lz(&args, &out).status.code(), Some(0));
    let (meta, lines) = read(&out);
    assert!(meta["secular"]["violations"].as_u64().unwrap() > 0);
    let flagged = lines
        .iter()
        .filter(|l| l.ends_with("secular approximation not valid"))
        .count();
    assert_eq!(
        flagged as u64,
        meta["secular"]["violations"].as_u64().unwrap()
    );
    assert_eq!(lines.len(), 42);

    let strict = lz(&[&args[..], &["--strict-secular"]].concat(), &out);
    assert_eq!(strict.status.code(), Some(3));
    assert!(out.exists());

    let ok = lz(&["custom", "--strict-secular", "--points", "5"], &out);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn oracle_mode_appends_master_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("oracle.csv");
    let o = lz(
        &[
            "custom",
            "--oracle",
            "--temperature",
            "2",
            "--theta-deg",
            "45",
            "--eta",
            "0.4",
            "--points",
            "21",
        ],
        &out,
    );
    assert_eq!(o.status.code(), Some(0));
    let (meta, lines) = read(&out);
    let header: Vec<&str> = lines[0].split(',').collect();
    assert_eq!(header.len(), 1 + 15 + 5 + 15 + 3);
    assert_eq!(header[21], "master_s1");
    assert!(meta["oracle"]["max_deviation"].as_f64().unwrap() <= 1e-6);
    assert_eq!(meta["oracle"]["within_tolerance"], true);
}

#[test]
fn json_mirror_matches_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("f.csv");
    let json = dir.path().join("f.json");
    assert!(lz(&["fig5", "--points", "3"], &csv).status.success());
    assert!(lz(&["fig5", "--points", "3", "--format", "json"], &json)
        .status
        .success());
    let (meta, lines) = read(&csv);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["metadata"], meta);
    assert_eq!(doc["columns"][1], "negativity[theta_deg=0]");
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for (row, line) in rows.iter().zip(&lines[1..]) {
        let from_csv: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let from_json: Vec<f64> = row
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_f64().unwrap())
            .collect();
        assert_eq!(from_csv, from_json);
    }
}

#[test]
fn deterministic_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert!(lz(&["fig5", "--points", "7", "--workers", "1"], &a)
        .status
        .success());
    assert!(lz(&["fig5", "--points", "7", "--workers", "4"], &b)
        .status
        .success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn lamb_shift_config_example() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("lamb.toml");
    std::fs::write(
        &cfg,
        "delta = 2.0\ntemperature = 0.5\nlamb_shift = true\nzero_frequency_rate = \"vanishing\"\n\
         [sweep]\nvariable = \"theta\"\nmin = 0\nmax = 90\npoints = 4\n",
    )
    .unwrap();
    let out = dir.path().join("lamb.csv");
    let o = lz(&["custom", "--config", cfg.to_str().unwrap()], &out);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let (meta, lines) = read(&out);
    assert_eq!(meta["resolved"]["bath"]["lamb_shift_enabled"], true);
    let window = meta["resolved"]["bath"]["pv_upper_limit"].as_f64().unwrap();
    assert!(window > 2.0 * 2f64.hypot(40.0));
    assert_eq!(lines.len(), 5);
    for line in &lines[1..] {
        let n: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(n > 0.0 && n <= 0.5 + 1e-6, "{line}");
    }
}
