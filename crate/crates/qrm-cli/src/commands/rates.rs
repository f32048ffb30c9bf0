//! `rates`: steady-state cavity and qubit photon-flux rates versus eta,
//! normalized to the eta = 0 qubit rate, optionally alongside the dipole
//! gauge wrong-operator rate.

use std::path::Path;

use qrm_core::{reference_rate_eta0, Channel, Gauge, PointSolution};

use crate::config::SweepConfig;
use crate::error::{CliError, Result};
use crate::output::{write_csv, Field, RunManifest};

use super::{base_settings, bath_from, params_for, solve_with_m, sweep};

struct RatePoint {
    n_max: usize,
    m: usize,
    w_c: f64,
    w_q: f64,
    w_wrong: Option<f64>,
}

pub fn cmd_rates(config: &SweepConfig, out_dir: &Path, manifest: &mut RunManifest) -> Result<()> {
    let gauge = config.single_gauge()?;
    let bath = bath_from(config)?;
    if config.t_q == 0.0 {
        return Err(CliError::Config(
            "rates are normalized to the eta = 0 qubit rate, which vanishes at T_q = 0".into(),
        ));
    }
    let want_wrong = config.channels.contains(&Channel::CavityWrong);
    let settings = base_settings(config, gauge);

    let params0 = params_for(config, 0.0)?;
    let w_q0 = reference_rate_eta0(config.model, &bath, &params0, &settings)?;

    let outcomes = sweep(&config.eta_grid, |eta| {
        let params = params_for(config, eta)?;
        let sol = solve_with_m(config.model, &params, &bath, config, &settings)?;
        let w_wrong = if want_wrong {
            let dipole_sol: PointSolution = if gauge == Gauge::Dipole {
                sol.clone()
            } else {
                let mut s = settings;
                s.gauge = Gauge::Dipole;
                s.m_levels = sol.eig.as_ref().map(|e| e.m()).unwrap_or(s.m_levels);
                solve_with_m(config.model, &params, &bath, config, &s)?
            };
            Some(dipole_sol.wrong_cavity_rate()?)
        } else {
            None
        };
        Ok(RatePoint {
            n_max: sol.n_max,
            m: sol.eig.as_ref().map(|e| e.m()).unwrap_or(sol.space.dim()),
            w_c: sol.w_c,
            w_q: sol.w_q,
            w_wrong,
        })
    });

    let mut rows: Vec<Vec<Field>> = Vec::new();
    for outcome in &outcomes {
        match &outcome.result {
            Err(e) => manifest.flag_point(outcome.eta, e.to_string()),
            Ok(point) => {
                manifest.record_point(outcome.eta, point.n_max, point.m, outcome.wall_ms);
                let mut row = vec![
                    Field::Float(outcome.eta),
                    Field::Float(point.w_c / w_q0),
                    Field::Float(point.w_q / w_q0),
                ];
                if let Some(w) = point.w_wrong {
                    row.push(Field::Float(w / w_q0));
                }
                rows.push(row);
            }
        }
    }

    let header: Vec<&str> = if want_wrong {
        vec!["eta", "W_c_norm", "W_q_norm", "W_c_wrong_norm"]
    } else {
        vec!["eta", "W_c_norm", "W_q_norm"]
    };
    let path = out_dir.join("rates.csv");
    write_csv(&path, &header, &rows)?;
    manifest.record_file(&path);

    if manifest.has_flagged_points() {
        return Err(CliError::Convergence(
            "one or more sweep points failed; see manifest flagged_points".into(),
        ));
    }
    Ok(())
}
