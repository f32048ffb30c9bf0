//! Deterministic file output: CSV with C-style `%.12e` floats and LF line
//! endings, JSON with sorted keys, SHA-256 checksums for the manifest.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::Result;

/// Format like C's `%.12e`: twelve fractional digits, two-digit signed
/// exponent. Negative zero is canonicalized.
pub fn fmt_e12(x: f64) -> String {
    let v = if x == 0.0 { 0.0 } else { x };
    let s = format!("{v:.12e}");
    let (mantissa, exponent) = s.split_once('e').expect("float formatting always has an exponent");
    let (sign, digits) = match exponent.strip_prefix('-') {
        Some(d) => ("-", d),
        None => ("+", exponent),
    };
    format!("{mantissa}e{sign}{digits:0>2}")
}

/// One CSV cell.
#[derive(Clone, Debug)]
pub enum Field {
    Float(f64),
    Int(i64),
    Str(String),
}

impl Field {
    fn render(&self) -> String {
        match self {
            Field::Float(x) => fmt_e12(*x),
            Field::Int(i) => i.to_string(),
            Field::Str(s) => s.clone(),
        }
    }
}

/// Write a CSV file: UTF-8, LF, one header row.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<Field>]) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let mut out = Vec::new();
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        let line: Vec<String> = row.iter().map(Field::render).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn write_json(path: &Path, value: &Value) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let mut text = serde_json::to_string_pretty(value).expect("json serialization cannot fail");
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn sha256_hex(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path)?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(format!("{:x}", hasher.finalize()))
}

/// Run manifest accumulated by every command: config echo, per-point
/// convergence report and wall time, output checksums, warnings.
#[derive(Debug)]
pub struct RunManifest {
    command: String,
    config: BTreeMap<String, String>,
    workers: usize,
    seedless: bool,
    points: Vec<Value>,
    files: Vec<PathBuf>,
    warnings: Vec<String>,
    flagged: Vec<Value>,
}

impl RunManifest {
    pub fn new(command: &str, config: &BTreeMap<String, String>, workers: usize, seedless: bool) -> Self {
        RunManifest {
            command: command.to_string(),
            config: config.clone(),
            workers,
            seedless,
            points: Vec::new(),
            files: Vec::new(),
            warnings: Vec::new(),
            flagged: Vec::new(),
        }
    }

    pub fn record_point(&mut self, eta: f64, n_max: usize, m: usize, wall_ms: u64) {
        self.points.push(json!({
            "eta": eta,
            "n_max": n_max,
            "m": m,
            "wall_ms": wall_ms,
        }));
    }

    pub fn record_file(&mut self, path: &Path) {
        self.files.push(path.to_path_buf());
    }

    pub fn warn(&mut self, message: String) {
        self.warnings.push(message);
    }

    pub fn flag_point(&mut self, eta: f64, reason: String) {
        self.flagged.push(json!({ "eta": eta, "reason": reason }));
    }

    pub fn has_flagged_points(&self) -> bool {
        !self.flagged.is_empty()
    }

    /// Checksum every recorded file and write `manifest.json`.
    pub fn write(&self, out_dir: &Path) -> Result<()> {
        let mut files = Map::new();
        for path in &self.files {
            let name = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string());
            files.insert(name, Value::String(sha256_hex(path)?));
        }
        let config: Map<String, Value> = self
            .config
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let manifest = json!({
            "command": self.command,
            "code_version": env!("CARGO_PKG_VERSION"),
            "config": config,
            "workers": self.workers,
            "seedless": self.seedless,
            "points": self.points,
            "files": files,
            "warnings": self.warnings,
            "flagged_points": self.flagged,
        });
        write_json(&out_dir.join("manifest.json"), &manifest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e12_formatting_matches_c_printf() {
        assert_eq!(fmt_e12(0.0), "0.000000000000e+00");
        assert_eq!(fmt_e12(-0.0), "0.000000000000e+00");
        assert_eq!(fmt_e12(1.0), "1.000000000000e+00");
        assert_eq!(fmt_e12(-2.5e-5), "-2.500000000000e-05");
        assert_eq!(fmt_e12(6.02214076e23), "6.022140760000e+23");
        assert_eq!(fmt_e12(1.0 / 3.0), "3.333333333333e-01");
        assert_eq!(fmt_e12(9.999999999999999e99), "1.000000000000e+100");
    }
}
