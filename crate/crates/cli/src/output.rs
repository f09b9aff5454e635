//! CSV and JSON artifacts.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use burescone::scenarios::{Check, GridSpec, ScenarioResult, Table};
use serde::Serialize;

/// Formats like C's `%.12e`: mantissa with 12 decimals and a signed exponent
/// of at least two digits.
pub fn sci(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.12e}");
    let (mant, exp) = s.split_once('e').expect("exponent present");
    let e: i32 = exp.parse().expect("integer exponent");
    let sign = if e < 0 { '-' } else { '+' };
    format!("{mant}e{sign}{:02}", e.abs())
}

pub fn table_csv(table: &Table, result: &ScenarioResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# source: {}", table.source);
    let _ = writeln!(out, "# scenario: {}", result.name);
    let params: Vec<String> = result
        .parameters
        .iter()
        .map(|(k, v)| format!("{k}={}", sci(*v)))
        .collect();
    let _ = writeln!(out, "# parameters: {}", params.join(" "));
    let _ = writeln!(out, "# units: dimensionless; time in units of the inverse rate");
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|v| sci(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Writes via a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "path has no file name"))?;
    let tmp = path.with_file_name(format!(".{}.tmp", name.to_string_lossy()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckSummary {
    pub passed: usize,
    pub failed: usize,
}

impl CheckSummary {
    pub fn of(checks: &[Check]) -> Self {
        let passed = checks.iter().filter(|c| c.passed).count();
        Self {
            passed,
            failed: checks.len() - passed,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub scenario: String,
    pub parameters: BTreeMap<String, f64>,
    pub grid: GridSpec,
    pub version: String,
    pub files: Vec<String>,
    pub checks: CheckSummary,
}

/// Emits every table, then `checks.json`, then `manifest.json`.
pub fn write_scenario(out_dir: &Path, result: &ScenarioResult, grid: &GridSpec) -> io::Result<PathBuf> {
    let dir = out_dir.join(result.name.as_str());
    fs::create_dir_all(&dir)?;
    let mut files = Vec::new();
    for table in &result.tables {
        let file = format!("{}.csv", table.name);
        write_atomic(&dir.join(&file), table_csv(table, result).as_bytes())?;
        files.push(file);
    }
    write_atomic(&dir.join("checks.json"), &to_json(&result.checks)?)?;
    files.push("checks.json".into());
    let manifest = RunManifest {
        scenario: result.name.to_string(),
        parameters: result.parameters.clone(),
        grid: grid.clone(),
        version: env!("CARGO_PKG_VERSION").into(),
        files,
        checks: CheckSummary::of(&result.checks),
    };
    write_atomic(&dir.join("manifest.json"), &to_json(&manifest)?)?;
    Ok(dir)
}

pub fn to_json<T: Serialize>(value: &T) -> io::Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(io::Error::other)?;
    bytes.push(b'\n');
    Ok(bytes)
}
