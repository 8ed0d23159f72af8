//! File formats: Hamiltonian text, FCIDUMP, JSON reports and traces, CSV.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;

use hevqe_core::fermion::{parse_fcidump, FermionHamiltonian};
use hevqe_core::QubitHamiltonian;

use crate::error::ConfigError;
use crate::experiments::ExperimentReport;

/// Read an input file; a missing or unreadable file is a configuration error.
pub fn read_input(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| ConfigError::new(format!("cannot read {}: {e}", path.display())).into())
}

/// Parse errors carry the file name and line.
pub fn load_hamiltonian(path: &Path) -> Result<QubitHamiltonian> {
    let text = read_input(path)?;
    QubitHamiltonian::parse_text(&text)
        .map_err(|e| ConfigError::new(format!("{}: {e}", path.display())).into())
}

pub fn load_fcidump(path: &Path) -> Result<FermionHamiltonian> {
    let text = read_input(path)?;
    parse_fcidump(&text).map_err(|e| ConfigError::new(format!("{}: {e}", path.display())).into())
}

/// Hamiltonian text with `# key: value` header lines.
pub fn hamiltonian_text(h: &QubitHamiltonian, header: &[(String, String)]) -> String {
    let mut out = String::new();
    for (k, v) in header {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    out.push_str(&h.to_text());
    out
}

pub fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
    }
    Ok(())
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    ensure_parent(path)?;
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &to_json(value)?)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_input(path)?;
    serde_json::from_str(&text)
        .map_err(|e| ConfigError::new(format!("{}: {e}", path.display())).into())
}

/// Column order of the per-run CSV.
pub const CSV_COLUMNS: [&str; 13] = [
    "scenario",
    "point",
    "parameters",
    "run",
    "seed",
    "energy",
    "std_error",
    "exact_energy",
    "reference",
    "error",
    "function_calls",
    "magnetization",
    "config_hash",
];

/// One row per run per point.
pub fn report_csv(report: &ExperimentReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS)?;
    for p in &report.points {
        let params = p
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";");
        for r in &p.runs {
            w.write_record([
                report.scenario.clone(),
                p.label.clone(),
                params.clone(),
                r.run.to_string(),
                r.seed.to_string(),
                format!("{:?}", r.energy),
                format!("{:?}", r.std_error),
                format!("{:?}", r.exact_energy),
                format!("{:?}", p.reference),
                format!("{:?}", r.error),
                r.function_calls.to_string(),
                r.magnetization
                    .map(|m| format!("{m:?}"))
                    .unwrap_or_default(),
                report.config_hash.clone(),
            ])?;
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
