use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qutrit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qutrit")).args(args).output().expect("spawn qutrit")
}

fn data_rows(path: &Path) -> Vec<Vec<f64>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

const SMALL: [&str; 6] = ["--n", "101", "--t-end", "10", "--steps", "21"];

#[test]
fn timeseries_starts_at_full_negativity() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ts.csv");
    let o = qutrit(&["timeseries", "--eta", "1.2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("t,f15_abs,f19_abs,f59_abs,negativity\n"));
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 501);
    assert_eq!((rows[0][0], rows[0][4]), (0.0, 1.0));
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("ts.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["metadata"]["params"]["eta"], 1.2);
    assert_eq!(meta["metadata"]["params"]["n"], 3001);
}

#[test]
fn zero_coupling_round_trips_to_exact_ones() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ts.csv");
    let mut args = vec!["timeseries", "--g", "0", "--out", out.to_str().unwrap()];
    args.extend(SMALL);
    assert!(qutrit(&args).status.success());
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 21);
    assert!(rows.iter().all(|r| r[4] == 1.0));
}

#[test]
fn even_chain_length_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let o = qutrit(&["timeseries", "--n", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("odd"), "{err}");
    assert_eq!(err.lines().count(), 1);
    assert!(!out.exists());
}

#[test]
fn usage_and_help_exit_codes() {
    assert_eq!(qutrit(&["timeseries", "--colour", "red"]).status.code(), Some(64));
    assert_eq!(qutrit(&[]).status.code(), Some(64));
    let help = qutrit(&["figures", "--help"]);
    assert_eq!(help.status.code(), Some(0));
    let text = String::from_utf8_lossy(&help.stdout);
    assert!(text.contains("fig7.csv") && text.contains("gamma=0.2"), "{text}");
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("no/such/dir/ts.csv");
    let mut args = vec!["timeseries", "--out", out.to_str().unwrap()];
    args.extend(SMALL);
    assert_eq!(qutrit(&args).status.code(), Some(1));
}

#[test]
fn grid_is_long_format_row_major() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("grid.csv");
    let o = qutrit(&[
        "grid", "--n", "101", "--t-end", "5", "--steps", "2", "--alpha-min", "-1", "--alpha-max", "0.5",
        "--alpha-steps", "2", "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(fs::read_to_string(&out).unwrap().starts_with("alpha,t,negativity\n"));
    let rows = data_rows(&out);
    let keys: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[1])).collect();
    assert_eq!(keys, vec![(-1.0, 0.0), (-1.0, 5.0), (0.5, 0.0), (0.5, 5.0)]);
    assert!(rows.iter().filter(|r| r[1] == 0.0).all(|r| r[2] == 1.0));
    let o = qutrit(&["grid", "--alpha-steps", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "n = 101\ngamma = 0.3\nsteps = 11\nt-end = 4\n").unwrap();
    let out = dir.path().join("ts.csv");
    let o = qutrit(&["timeseries", "--config", cfg.to_str().unwrap(), "--gamma", "0.7", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("ts.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["metadata"]["params"]["n"], 101);
    assert_eq!(meta["metadata"]["params"]["gamma"], 0.7);
    assert_eq!(meta["metadata"]["params"]["alpha"], 0.5);
    assert_eq!(data_rows(&out).len(), 11);

    fs::write(&cfg, "volume = 11\n").unwrap();
    let o = qutrit(&["timeseries", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eta_family_has_leading_eta_column() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fam.csv");
    let mut args = vec!["eta-family", "--etas", "0,1.2", "--out", out.to_str().unwrap()];
    args.extend(SMALL);
    assert!(qutrit(&args).status.success());
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 42);
    assert_eq!((rows[0][0], rows[21][0]), (0.0, 1.2));
}

#[test]
fn critical_alpha_reports_and_writes_curve() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("curve.csv");
    let o = qutrit(&[
        "critical-alpha", "--n", "301", "--gamma", "1", "--t-end", "20", "--steps", "81", "--alpha-steps", "16",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("alpha* = "));
    assert_eq!(data_rows(&out).len(), 16);
}

#[test]
fn figures_writes_nine_files() {
    let dir = tempfile::tempdir().unwrap();
    let figs = dir.path().join("figs");
    let o = qutrit(&[
        "figures", "--n", "51", "--t-end", "5", "--steps", "6", "--alpha-steps", "4", "--out-dir", figs.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for i in 1..=9 {
        assert!(figs.join(format!("fig{i}.csv")).exists());
        assert!(figs.join(format!("fig{i}.csv.meta.json")).exists());
    }
    assert_eq!(fs::read(figs.join("fig1.csv")).unwrap(), fs::read(figs.join("fig2.csv")).unwrap());
    assert_eq!(data_rows(&figs.join("fig1.csv")).len(), 5 * 6);
    assert_eq!(data_rows(&figs.join("fig7.csv")).len(), 4 * 6);
    let meta = fs::read_to_string(figs.join("fig8.csv.meta.json")).unwrap();
    assert!(meta.contains("\"gamma\": 0.5"));
    assert_eq!(qutrit(&["figures", "--gamma", "1", "--out-dir", figs.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn validate_gate_and_failure_code() {
    let ok = qutrit(&["validate", "--sizes", "5,7"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("sign test"));
    assert_eq!(qutrit(&["validate", "--sizes", "5", "--tolerance", "0"]).status.code(), Some(3));
    assert_eq!(qutrit(&["validate", "--sizes", "6"]).status.code(), Some(2));
    assert_eq!(qutrit(&["validate", "--sizes", "13"]).status.code(), Some(2));
}
