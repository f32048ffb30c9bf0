//! Flat key=value run configuration with `#` comments and dotted keys.
//!
//! The format is deliberately dependency-free and trivially parseable:
//! one `key = value` per line, later assignments win, unknown keys are
//! rejected so typos surface as config errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use qrm_core::{Channel, Gauge, ModelKind, UniquenessCheck};

use crate::error::{CliError, Result};

/// Gauge selection including the audit's `both`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaugeChoice {
    Single(Gauge),
    Both,
}

/// Fixed or automatically doubled truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truncation {
    Auto,
    Fixed(usize),
}

/// Fully resolved run configuration.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub model: ModelKind,
    pub models: Vec<ModelKind>,
    pub gauge: GaugeChoice,
    pub delta: f64,
    pub t_c: f64,
    pub t_q: f64,
    pub kappa_over_wq: f64,
    pub gamma_over_wq: f64,
    pub eta_grid: Vec<f64>,
    pub n_max: Truncation,
    pub n_max_cap: usize,
    pub m_levels: Truncation,
    pub m_cap: usize,
    pub convergence_tol: f64,
    pub omega_grid: Vec<f64>,
    pub channels: Vec<Channel>,
    pub outputs: PathBuf,
    pub audit_tol_eigen: f64,
    pub audit_tol_elements: f64,
    pub audit_tol_rates: f64,
    pub jc_coupling_scale: f64,
    pub uniqueness: UniquenessCheck,
    /// Raw key/value echo for the manifest.
    pub raw: BTreeMap<String, String>,
}

fn parse_lines(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw_line) in text.lines().enumerate() {
        let line = match raw_line.split_once('#') {
            Some((head, _)) => head,
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!("line {}: expected key = value, got {raw_line:?}", lineno + 1))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

struct Reader {
    map: BTreeMap<String, String>,
    used: std::collections::BTreeSet<String>,
}

impl Reader {
    fn get(&mut self, key: &str) -> Option<String> {
        let v = self.map.get(key).cloned();
        if v.is_some() {
            self.used.insert(key.to_string());
        }
        v
    }

    fn f64(&mut self, key: &str, default: f64) -> Result<f64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("{key}: not a number: {v:?}"))),
        }
    }

    fn usize(&mut self, key: &str, default: usize) -> Result<usize> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<usize>()
                .map_err(|_| CliError::Config(format!("{key}: not a non-negative integer: {v:?}"))),
        }
    }

    fn string(&mut self, key: &str, default: &str) -> String {
        self.get(key).unwrap_or_else(|| default.to_string())
    }

    fn truncation(&mut self, key: &str, default: Truncation) -> Result<Truncation> {
        match self.get(key) {
            None => Ok(default),
            Some(v) if v == "auto" => Ok(Truncation::Auto),
            Some(v) => v
                .parse::<usize>()
                .map(Truncation::Fixed)
                .map_err(|_| CliError::Config(format!("{key}: expected integer or 'auto', got {v:?}"))),
        }
    }
}

fn parse_model(s: &str) -> Result<ModelKind> {
    match s {
        "gme" => Ok(ModelKind::Gme),
        "dressed_rwa" => Ok(ModelKind::DressedRwa),
        "standard_jc" => Ok(ModelKind::StandardJc),
        other => Err(CliError::Config(format!(
            "model: expected gme | dressed_rwa | standard_jc, got {other:?}"
        ))),
    }
}

fn parse_channel(s: &str) -> Result<Channel> {
    match s {
        "cavity" => Ok(Channel::Cavity),
        "qubit" => Ok(Channel::Qubit),
        "cavity_wrong" => Ok(Channel::CavityWrong),
        other => Err(CliError::Config(format!(
            "channels: expected cavity | qubit | cavity_wrong, got {other:?}"
        ))),
    }
}

fn grid(reader: &mut Reader, prefix: &str, d_spacing: &str, d_min: f64, d_max: f64, d_points: usize) -> Result<Vec<f64>> {
    let spacing = reader.string(&format!("{prefix}.spacing"), d_spacing);
    if spacing == "list" {
        let list = reader
            .get(&format!("{prefix}.list"))
            .ok_or_else(|| CliError::Config(format!("{prefix}.list required when spacing = list")))?;
        let values: Vec<f64> = list
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| CliError::Config(format!("{prefix}.list: malformed float list")))?;
        if values.is_empty() || values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Config(format!("{prefix}.list must be non-empty and ascending")));
        }
        return Ok(values);
    }
    let min = reader.f64(&format!("{prefix}.min"), d_min)?;
    let max = reader.f64(&format!("{prefix}.max"), d_max)?;
    let points = reader.usize(&format!("{prefix}.points"), d_points)?;
    if points == 0 || max < min || (points > 1 && max == min) {
        return Err(CliError::Config(format!("{prefix}: bad grid bounds [{min}, {max}] x {points}")));
    }
    match spacing.as_str() {
        "linear" => Ok((0..points)
            .map(|i| {
                if points == 1 {
                    min
                } else {
                    min + (max - min) * i as f64 / (points - 1) as f64
                }
            })
            .collect()),
        "log" => {
            if min <= 0.0 {
                return Err(CliError::Config(format!("{prefix}: log spacing needs min > 0")));
            }
            let (lmin, lmax) = (min.ln(), max.ln());
            Ok((0..points)
                .map(|i| {
                    if points == 1 {
                        min
                    } else {
                        (lmin + (lmax - lmin) * i as f64 / (points - 1) as f64).exp()
                    }
                })
                .collect())
        }
        other => Err(CliError::Config(format!(
            "{prefix}.spacing: expected linear | log | list, got {other:?}"
        ))),
    }
}

impl SweepConfig {
    pub fn from_file(path: &Path) -> Result<SweepConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        SweepConfig::from_text(&text)
    }

    pub fn from_text(text: &str) -> Result<SweepConfig> {
        let raw = parse_lines(text)?;
        let mut reader = Reader { map: raw.clone(), used: Default::default() };

        let model = parse_model(&reader.string("model", "gme"))?;
        let models: Vec<ModelKind> = reader
            .string("models", "gme,dressed_rwa,standard_jc")
            .split(',')
            .map(|s| parse_model(s.trim()))
            .collect::<Result<_>>()?;
        let gauge = match reader.string("gauge", "coulomb").as_str() {
            "coulomb" => GaugeChoice::Single(Gauge::Coulomb),
            "dipole" => GaugeChoice::Single(Gauge::Dipole),
            "both" => GaugeChoice::Both,
            other => {
                return Err(CliError::Config(format!(
                    "gauge: expected coulomb | dipole | both, got {other:?}"
                )))
            }
        };

        let delta = reader.f64("delta", 0.0)?;
        let t_c = reader.f64("T_c", 0.0)?;
        let t_q = reader.f64("T_q", 0.05)?;
        let kappa_over_wq = reader.f64("kappa_over_wq", 1e-3)?;
        let gamma_over_wq = reader.f64("gamma_over_wq", 1e-4)?;
        if kappa_over_wq <= 0.0 || gamma_over_wq <= 0.0 {
            return Err(CliError::Config("loss rates must be positive".into()));
        }
        if t_c < 0.0 || t_q < 0.0 {
            return Err(CliError::Config("temperatures must be non-negative".into()));
        }

        let eta_grid = grid(&mut reader, "eta", "log", 1e-5, 3.0, 25)?;
        if eta_grid[0] < 0.0 {
            return Err(CliError::Config("eta grid must be non-negative".into()));
        }
        let omega_grid = grid(&mut reader, "omega", "linear", 0.05, 3.0, 400)?;
        if omega_grid[0] <= 0.0 {
            return Err(CliError::Config("omega grid must be strictly positive".into()));
        }

        let n_max = reader.truncation("n_max", Truncation::Auto)?;
        let n_max_cap = reader.usize("n_max.cap", 512)?;
        let m_levels = reader.truncation("M", Truncation::Fixed(20))?;
        let m_cap = reader.usize("M.cap", 48)?;
        let convergence_tol = reader.f64("convergence.tol", 1e-8)?;

        let channels: Vec<Channel> = reader
            .string("channels", "cavity,qubit")
            .split(',')
            .map(|s| parse_channel(s.trim()))
            .collect::<Result<_>>()?;
        if channels.is_empty() {
            return Err(CliError::Config("channels must be non-empty".into()));
        }

        let outputs = PathBuf::from(reader.string("outputs", "out"));
        let audit_tol_eigen = reader.f64("audit.tol_eigen", 1e-8)?;
        let audit_tol_elements = reader.f64("audit.tol_elements", 1e-6)?;
        let audit_tol_rates = reader.f64("audit.tol_rates", 1e-6)?;
        let jc_coupling_scale = reader.f64("jc.coupling_scale", 1.0)?;
        let uniqueness = match reader.string("solver.uniqueness", "auto").as_str() {
            "auto" => UniquenessCheck::Auto,
            "spectral" => UniquenessCheck::Spectral,
            "residual" => UniquenessCheck::ResidualOnly,
            other => {
                return Err(CliError::Config(format!(
                    "solver.uniqueness: expected auto | spectral | residual, got {other:?}"
                )))
            }
        };

        let unknown: Vec<&String> = raw.keys().filter(|k| !reader.used.contains(*k)).collect();
        if !unknown.is_empty() {
            return Err(CliError::Config(format!("unknown config keys: {unknown:?}")));
        }

        Ok(SweepConfig {
            model,
            models,
            gauge,
            delta,
            t_c,
            t_q,
            kappa_over_wq,
            gamma_over_wq,
            eta_grid,
            n_max,
            n_max_cap,
            m_levels,
            m_cap,
            convergence_tol,
            omega_grid,
            channels,
            outputs,
            audit_tol_eigen,
            audit_tol_elements,
            audit_tol_rates,
            jc_coupling_scale,
            uniqueness,
            raw,
        })
    }

    /// The single gauge of a sweep command; `both` is only valid for audits.
    pub fn single_gauge(&self) -> Result<Gauge> {
        match self.gauge {
            GaugeChoice::Single(g) => Ok(g),
            GaugeChoice::Both => Err(CliError::Config(
                "gauge = both is only valid for gauge-audit; pick coulomb or dipole".into(),
            )),
        }
    }
}
