//! CSV artifacts and their metadata sidecars.
//!
//! Numbers are written with 17 significant digits so every value parses back
//! to the same `f64`. Files are staged in the target directory and renamed
//! into place, so a failed run never leaves a partial file behind.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use qutrit_core::{SweepKind, SweepResult};
use serde::Serialize;

use crate::CliError;

pub const TIMESERIES_HEADER: &str = "t,f15_abs,f19_abs,f59_abs,negativity";
pub const ETA_FAMILY_HEADER: &str = "eta,t,f15_abs,f19_abs,f59_abs,negativity";
pub const GRID_HEADER: &str = "alpha,t,negativity";

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn push_row(out: &mut String, fields: &[f64]) {
    for (i, v) in fields.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&fmt_f64(*v));
    }
    out.push('\n');
}

fn expect_kind(result: &SweepResult, kind: SweepKind) -> Result<(), CliError> {
    if result.kind != kind {
        return Err(CliError::Config(format!("expected a {kind:?} result, got {:?}", result.kind)));
    }
    Ok(())
}

fn timeseries_rows(out: &mut String, result: &SweepResult, eta: Option<f64>) {
    for ((t, m), n) in result.times().iter().zip(&result.magnitudes).zip(&result.negativity) {
        let mut fields = Vec::with_capacity(6);
        fields.extend(eta);
        fields.extend([*t, m[0], m[1], m[2], *n]);
        push_row(out, &fields);
    }
}

pub fn timeseries_csv(result: &SweepResult) -> Result<String, CliError> {
    expect_kind(result, SweepKind::TimeSeries)?;
    let mut out = format!("{TIMESERIES_HEADER}\n");
    timeseries_rows(&mut out, result, None);
    Ok(out)
}

pub fn eta_family_csv(results: &[SweepResult]) -> Result<String, CliError> {
    let mut out = format!("{ETA_FAMILY_HEADER}\n");
    for r in results {
        expect_kind(r, SweepKind::TimeSeries)?;
        timeseries_rows(&mut out, r, Some(r.metadata.params.eta()));
    }
    Ok(out)
}

pub fn grid_csv(result: &SweepResult) -> Result<String, CliError> {
    expect_kind(result, SweepKind::AlphaTimeGrid)?;
    let mut out = format!("{GRID_HEADER}\n");
    let times = result.times();
    for (i, &alpha) in result.axes[0].values.iter().enumerate() {
        for (t, n) in times.iter().zip(result.row(i)) {
            push_row(&mut out, &[alpha, *t, *n]);
        }
    }
    Ok(out)
}

pub fn curve_csv(header: &str, rows: &[(f64, f64)]) -> String {
    let mut out = format!("{header}\n");
    for &(a, b) in rows {
        let _ = writeln!(out, "{},{}", fmt_f64(a), fmt_f64(b));
    }
    out
}

/// `<path>.meta.json`
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    path.with_file_name(name)
}

pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let io = |source| CliError::Write { path: path.to_owned(), source };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

#[derive(Serialize)]
struct Sidecar<'a, M: Serialize> {
    command: &'a str,
    format: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
    metadata: M,
}

/// Writes `contents` to `path` and the metadata to its sidecar.
pub fn write_with_metadata<M: Serialize>(
    path: &Path,
    contents: &str,
    command: &str,
    header: &str,
    note: Option<&str>,
    metadata: M,
) -> Result<(), CliError> {
    let sidecar = Sidecar { command, format: header, note, metadata };
    let json = serde_json::to_string_pretty(&sidecar).expect("metadata serialises");
    write_atomic(path, contents.as_bytes())?;
    write_atomic(&sidecar_path(path), format!("{json}\n").as_bytes())
}

pub fn write_timeseries_csv(result: &SweepResult, path: &Path) -> Result<(), CliError> {
    let csv = timeseries_csv(result)?;
    write_with_metadata(path, &csv, "timeseries", TIMESERIES_HEADER, None, &result.metadata)
}

pub fn write_grid_csv(result: &SweepResult, path: &Path) -> Result<(), CliError> {
    let csv = grid_csv(result)?;
    let meta = GridMeta { alpha: &result.axes[0].values, metadata: &result.metadata };
    write_with_metadata(path, &csv, "grid", GRID_HEADER, None, meta)
}

#[derive(Serialize)]
pub struct GridMeta<'a> {
    pub alpha: &'a [f64],
    pub metadata: &'a qutrit_core::SweepMetadata,
}

#[cfg(test)]
mod tests {
    use super::*;
    use qutrit_core::{time_series, ChainParams, QutritCoupling, SweepOptions, TimeGrid};

    fn series(g: f64) -> SweepResult {
        let params = ChainParams::new(101, 0.5, 0.5, 1.0).unwrap();
        let grid = TimeGrid::new(0.0, 10.0, 11).unwrap();
        time_series(&params, QutritCoupling::uniform(g).unwrap(), &grid, &SweepOptions::default()).unwrap()
    }

    #[test]
    fn seventeen_digit_round_trip() {
        for x in [0.1, 1.0 / 3.0, 2.0f64.sqrt(), 1e-300, 0.9999999999999999, 5e-324] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn timeseries_layout() {
        let r = series(0.0);
        let csv = timeseries_csv(&r).unwrap();
        let lines: Vec<&str> = csv.split('\n').collect();
        assert_eq!(lines[0], TIMESERIES_HEADER);
        assert_eq!(lines.len(), 11 + 2);
        assert_eq!(*lines.last().unwrap(), "");
        assert!(!csv.contains('\r'));
        for line in &lines[1..12] {
            let neg: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
            assert_eq!(neg, 1.0);
        }
    }

    #[test]
    fn kind_mismatch_is_rejected() {
        assert!(grid_csv(&series(0.01)).is_err());
    }

    #[test]
    fn sidecar_name() {
        assert_eq!(sidecar_path(Path::new("out/a.csv")), PathBuf::from("out/a.csv.meta.json"));
    }

    #[test]
    fn atomic_write_replaces_and_cleans_up() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        write_timeseries_csv(&series(0.01), &path).unwrap();
        write_timeseries_csv(&series(0.02), &path).unwrap();
        let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        assert_eq!(names.len(), 2);
        let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(sidecar_path(&path)).unwrap()).unwrap();
        assert_eq!(meta["metadata"]["coupling"]["g_a"], 0.02);
        assert!(write_timeseries_csv(&series(0.01), &dir.path().join("missing/x.csv")).is_err());
    }
}
