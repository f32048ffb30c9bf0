//! `gauge-audit`: per-eta numerical verification that the Coulomb- and
//! dipole-gauge pipelines agree — eigenvalues, matrix-element moduli, and
//! emission rates — and that the wrong-operator construction deviates as it
//! must. Writes `gauge_audit.json`; any invariance residual above tolerance
//! exits with code 4.

use std::path::Path;

use serde_json::{json, Value};

use qrm_core::{Gauge, ModelKind};

use crate::config::{GaugeChoice, SweepConfig};
use crate::error::{CliError, Result};
use crate::output::{write_json, RunManifest};

use super::{base_settings, bath_from, params_for, solve_with_m, sweep, OMEGA_Q};

struct AuditPoint {
    n_max_coulomb: usize,
    n_max_dipole: usize,
    m: usize,
    eigenvalue_residual: f64,
    element_residual: f64,
    rate_residual: f64,
    w_c_coulomb: f64,
    w_c_dipole: f64,
    w_c_wrong: f64,
}

pub fn cmd_gauge_audit(config: &SweepConfig, out_dir: &Path, manifest: &mut RunManifest) -> Result<()> {
    if config.gauge != GaugeChoice::Both {
        return Err(CliError::Config("gauge-audit requires gauge = both".into()));
    }
    let bath = bath_from(config)?;

    let outcomes = sweep(&config.eta_grid, |eta| {
        let params = params_for(config, eta)?;
        let coulomb = solve_with_m(ModelKind::Gme, &params, &bath, config, &base_settings(config, Gauge::Coulomb))?;
        let mut dipole_settings = base_settings(config, Gauge::Dipole);
        dipole_settings.m_levels = coulomb.eig.as_ref().map(|e| e.m()).unwrap_or(dipole_settings.m_levels);
        let dipole = solve_with_m(ModelKind::Gme, &params, &bath, config, &dipole_settings)?;

        let ec = coulomb.eig.as_ref().expect("gme solution has an eigensystem");
        let ed = dipole.eig.as_ref().expect("gme solution has an eigensystem");
        let m = ec.m().min(ed.m());

        let mut eigenvalue_residual: f64 = 0.0;
        for j in 0..m {
            let (a, b) = (ec.energies()[j], ed.energies()[j]);
            eigenvalue_residual = eigenvalue_residual.max((a - b).abs() / OMEGA_Q.max(a.abs()));
        }

        let tc = coulomb.table.as_ref().expect("gme solution has a table");
        let td = dipole.table.as_ref().expect("gme solution has a table");
        let mut element_residual: f64 = 0.0;
        for j in 0..m {
            for k in 0..m {
                element_residual = element_residual
                    .max((tc.x()[(j, k)].norm() - td.x()[(j, k)].norm()).abs())
                    .max((tc.s()[(j, k)].norm() - td.s()[(j, k)].norm()).abs());
            }
        }

        let rate_residual =
            (coulomb.w_c - dipole.w_c).abs() / coulomb.w_c.abs().max(dipole.w_c.abs()).max(1e-300);
        let w_c_wrong = dipole.wrong_cavity_rate()?;

        Ok(AuditPoint {
            n_max_coulomb: coulomb.n_max,
            n_max_dipole: dipole.n_max,
            m,
            eigenvalue_residual,
            element_residual,
            rate_residual,
            w_c_coulomb: coulomb.w_c,
            w_c_dipole: dipole.w_c,
            w_c_wrong,
        })
    });

    let mut points: Vec<Value> = Vec::new();
    let mut all_pass = true;
    for outcome in &outcomes {
        match &outcome.result {
            Err(e) => {
                manifest.flag_point(outcome.eta, e.to_string());
                all_pass = false;
            }
            Ok(p) => {
                manifest.record_point(outcome.eta, p.n_max_coulomb.max(p.n_max_dipole), p.m, outcome.wall_ms);
                let pass_eigen = p.eigenvalue_residual < config.audit_tol_eigen;
                let pass_elements = p.element_residual < config.audit_tol_elements;
                let pass_rates = p.rate_residual < config.audit_tol_rates;
                all_pass &= pass_eigen && pass_elements && pass_rates;
                let wrong_over_correct = if p.w_c_coulomb > 0.0 {
                    Value::from(p.w_c_wrong / p.w_c_coulomb)
                } else {
                    Value::Null
                };
                points.push(json!({
                    "eta": outcome.eta,
                    "n_max_coulomb": p.n_max_coulomb,
                    "n_max_dipole": p.n_max_dipole,
                    "m": p.m,
                    "eigenvalue_residual": p.eigenvalue_residual,
                    "element_residual": p.element_residual,
                    "rate_residual": p.rate_residual,
                    "w_c_coulomb": p.w_c_coulomb,
                    "w_c_dipole": p.w_c_dipole,
                    "w_c_wrong": p.w_c_wrong,
                    "wrong_over_correct": wrong_over_correct,
                    "pass_eigenvalues": pass_eigen,
                    "pass_elements": pass_elements,
                    "pass_rates": pass_rates,
                }));
            }
        }
    }

    let report = json!({
        "tolerances": {
            "eigenvalues": config.audit_tol_eigen,
            "elements": config.audit_tol_elements,
            "rates": config.audit_tol_rates,
        },
        "points": points,
        "pass": all_pass,
    });
    let path = out_dir.join("gauge_audit.json");
    write_json(&path, &report)?;
    manifest.record_file(&path);

    if !all_pass {
        return Err(CliError::AuditFailed(format!(
            "gauge-invariance residuals exceeded tolerance; see {}",
            path.display()
        )));
    }
    Ok(())
}
