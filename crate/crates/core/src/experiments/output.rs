//! CSV tables and their JSON metadata files.
//!
//! Floats are written with Rust's shortest round-trip formatting, so reading
//! a table back reproduces every value exactly. Empty fields stand for
//! "not defined" (bad or censored rows).

use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::{io_err, ExperimentError, HistBin, ResultRow, SnRow};
use crate::orbit::OrbitSummary;

pub const FORMAT_VERSION: u32 = 1;

pub const SWEEP_HEADER: [&str; 8] = ["p", "good", "mu", "lambda", "tau", "ctilde", "meets_ram", "censored"];
pub const HIST_HEADER: [&str; 3] = ["bin_center", "empirical", "model"];
pub const SN_HEADER: [&str; 3] = ["N", "S_N", "model"];

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> ExperimentError + '_ {
    move |e| ExperimentError::Format { path: path.to_path_buf(), msg: e.to_string() }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes a header line and string records.
pub fn write_table<I>(path: &Path, header: &[&str], records: I) -> Result<(), ExperimentError>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(header).map_err(csv_err(path))?;
    for r in records {
        w.write_record(&r).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Reads a table, checking the header matches exactly.
pub fn read_table(path: &Path, header: &[&str]) -> Result<Vec<Vec<String>>, ExperimentError> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let got = r.headers().map_err(csv_err(path))?.clone();
    if got.iter().ne(header.iter().copied()) {
        return Err(ExperimentError::Format {
            path: path.to_path_buf(),
            msg: format!(
                "expected header `{}`, found `{}`",
                header.join(","),
                got.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    r.records().map(|rec| rec.map(|x| x.iter().map(str::to_string).collect()).map_err(csv_err(path))).collect()
}

pub fn sweep_record(r: &ResultRow) -> Vec<String> {
    let s = r.summary;
    vec![
        r.p.to_string(),
        r.good.to_string(),
        opt(s.map(|s| s.preperiod)),
        opt(s.map(|s| s.cycle_len)),
        opt(s.map(|s| s.collision_time)),
        opt(r.ctilde),
        opt(r.meets_ram),
        r.censored.to_string(),
    ]
}

pub fn write_sweep_csv(path: &Path, rows: &[ResultRow]) -> Result<(), ExperimentError> {
    write_table(path, &SWEEP_HEADER, rows.iter().map(sweep_record))
}

pub fn read_sweep_csv(path: &Path) -> Result<Vec<ResultRow>, ExperimentError> {
    let bad = |line: usize, msg: &str| ExperimentError::Format {
        path: path.to_path_buf(),
        msg: format!("record {line}: {msg}"),
    };
    read_table(path, &SWEEP_HEADER)?
        .iter()
        .enumerate()
        .map(|(i, rec)| {
            let field = |k: usize| rec[k].as_str();
            let num = |k: usize| -> Result<Option<u64>, ExperimentError> {
                match field(k) {
                    "" => Ok(None),
                    s => s.parse().map(Some).map_err(|_| bad(i + 1, SWEEP_HEADER[k])),
                }
            };
            let flag = |k: usize| -> Result<Option<bool>, ExperimentError> {
                match field(k) {
                    "" => Ok(None),
                    s => s.parse().map(Some).map_err(|_| bad(i + 1, SWEEP_HEADER[k])),
                }
            };
            let p = num(0)?.ok_or_else(|| bad(i + 1, "p"))? as u32;
            let summary = match (num(2)?, num(3)?) {
                (Some(mu), Some(lam)) if lam > 0 => Some(OrbitSummary::new(mu, lam)),
                (None, None) => None,
                _ => return Err(bad(i + 1, "mu/lambda")),
            };
            let ctilde = match field(5) {
                "" => None,
                s => Some(s.parse::<f64>().map_err(|_| bad(i + 1, "ctilde"))?),
            };
            Ok(ResultRow {
                p,
                good: flag(1)?.ok_or_else(|| bad(i + 1, "good"))?,
                summary,
                ctilde,
                meets_ram: flag(6)?,
                censored: flag(7)?.ok_or_else(|| bad(i + 1, "censored"))?,
            })
        })
        .collect()
}

pub fn write_hist_csv(path: &Path, bins: &[HistBin]) -> Result<(), ExperimentError> {
    write_table(
        path,
        &HIST_HEADER,
        bins.iter().map(|b| vec![b.center.to_string(), b.empirical.to_string(), b.model.to_string()]),
    )
}

pub fn read_hist_csv(path: &Path) -> Result<Vec<HistBin>, ExperimentError> {
    read_table(path, &HIST_HEADER)?
        .iter()
        .map(|rec| {
            let f = |k: usize| {
                rec[k].parse::<f64>().map_err(|_| ExperimentError::Format {
                    path: path.to_path_buf(),
                    msg: format!("bad number `{}`", rec[k]),
                })
            };
            Ok(HistBin { center: f(0)?, empirical: f(1)?, model: f(2)? })
        })
        .collect()
}

pub fn write_sn_csv(path: &Path, rows: &[SnRow]) -> Result<(), ExperimentError> {
    write_table(path, &SN_HEADER, rows.iter().map(|r| vec![r.n.to_string(), r.s_n.to_string(), r.model.to_string()]))
}

/// `runs/dim1.csv` -> `runs/dim1.meta.json`.
pub fn preamble_path(csv: &Path) -> PathBuf {
    csv.with_extension("meta.json")
}

pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes the metadata file next to `csv`: format version, command and the
/// effective configuration.
pub fn write_preamble(csv: &Path, command: &str, config: Value) -> Result<PathBuf, ExperimentError> {
    let path = preamble_path(csv);
    let doc = json!({
        "format_version": FORMAT_VERSION,
        "command": command,
        "config": config,
    });
    let text = serde_json::to_string_pretty(&doc).expect("json values serialise") + "\n";
    std::fs::write(&path, text).map_err(io_err(&path))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        let rows = vec![
            ResultRow::bad(2),
            ResultRow {
                p: 5,
                good: true,
                summary: Some(OrbitSummary::new(1, 3)),
                ctilde: Some(3.0 / 10f64.sqrt()),
                meets_ram: Some(true),
                censored: false,
            },
            ResultRow { p: 7, good: true, summary: None, ctilde: None, meets_ram: None, censored: true },
        ];
        write_sweep_csv(&path, &rows).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("p,good,mu,lambda,tau,ctilde,meets_ram,censored\n2,false,,,,,,false\n"));
        assert_eq!(read_sweep_csv(&path).unwrap(), rows);
    }

    #[test]
    fn wrong_header_names_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.csv");
        write_hist_csv(&path, &[HistBin { center: 0.5, empirical: 1.0, model: 0.1 }]).unwrap();
        let e = read_sweep_csv(&path).unwrap_err().to_string();
        assert!(e.contains("h.csv"), "{e}");
        assert_eq!(read_hist_csv(&path).unwrap()[0].center, 0.5);
    }

    #[test]
    fn preamble_next_to_csv() {
        let dir = tempfile::tempdir().unwrap();
        let csv = dir.path().join("run.csv");
        let meta = write_preamble(&csv, "sweep", json!({"seed": 3})).unwrap();
        assert_eq!(meta.file_name().unwrap(), "run.meta.json");
        let v: Value = serde_json::from_str(&std::fs::read_to_string(meta).unwrap()).unwrap();
        assert_eq!(v["config"]["seed"], 3);
        assert_eq!(sha256_hex("").len(), 64);
        assert!(sha256_hex("abc").starts_with("ba7816bf"));
    }
}
