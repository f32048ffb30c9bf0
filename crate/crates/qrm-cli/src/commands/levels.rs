//! `levels`: dressed energy levels and parity-allowed transition energies
//! versus eta.

use std::path::Path;

use qrm_core::{build_space, converge_eigensystem, diagonalize_labeled, hamiltonian_in, EigenSystem};

use crate::config::{SweepConfig, Truncation};
use crate::error::{CliError, Result};
use crate::output::{write_csv, Field, RunManifest};

use super::{base_settings, params_for, sweep, OMEGA_Q};

struct LevelPoint {
    n_max: usize,
    m: usize,
    eig: EigenSystem,
}

pub fn cmd_levels(config: &SweepConfig, out_dir: &Path, manifest: &mut RunManifest) -> Result<()> {
    let gauge = config.single_gauge()?;
    let m = match config.m_levels {
        Truncation::Fixed(m) => m,
        Truncation::Auto => 20,
    };
    let settings = base_settings(config, gauge);

    let outcomes = sweep(&config.eta_grid, |eta| {
        let params = params_for(config, eta)?;
        let (eig, n_max) = match settings.n_max {
            Some(n) => {
                let space = build_space(n)?;
                let h = hamiltonian_in(gauge, &space, &params)?;
                (diagonalize_labeled(&h, m)?, n)
            }
            None => {
                let basis = converge_eigensystem(gauge, &params, m, &settings.convergence)?;
                (basis.eig, basis.n_max)
            }
        };
        Ok(LevelPoint { n_max, m, eig })
    });

    let mut level_rows: Vec<Vec<Field>> = Vec::new();
    let mut transition_rows: Vec<(f64, f64, usize, usize, Vec<Field>)> = Vec::new();
    for outcome in &outcomes {
        match &outcome.result {
            Err(e) => manifest.flag_point(outcome.eta, e.to_string()),
            Ok(point) => {
                manifest.record_point(outcome.eta, point.n_max, point.m, outcome.wall_ms);
                let eig = &point.eig;
                let e0 = eig.energies()[0];
                for j in 0..eig.m() {
                    level_rows.push(vec![
                        Field::Float(outcome.eta),
                        Field::Int(j as i64),
                        Field::Str(eig.labels()[j].to_string()),
                        Field::Int(eig.parities()[j] as i64),
                        Field::Float((eig.energies()[j] - e0) / OMEGA_Q),
                    ]);
                }
                for j in 0..eig.m() {
                    for k in (j + 1)..eig.m() {
                        if eig.parities()[j] == eig.parities()[k] {
                            continue; // parity-forbidden
                        }
                        let omega = (eig.energies()[k] - eig.energies()[j]).abs() / OMEGA_Q;
                        transition_rows.push((
                            outcome.eta,
                            omega,
                            k,
                            j,
                            vec![
                                Field::Float(outcome.eta),
                                Field::Int(k as i64),
                                Field::Int(j as i64),
                                Field::Str(eig.labels()[k].to_string()),
                                Field::Str(eig.labels()[j].to_string()),
                                Field::Float(omega),
                            ],
                        ));
                    }
                }
            }
        }
    }
    transition_rows.sort_by(|a, b| {
        (a.0, a.1, a.2, a.3)
            .partial_cmp(&(b.0, b.1, b.2, b.3))
            .expect("grid values are finite")
    });

    let levels_path = out_dir.join("levels.csv");
    write_csv(
        &levels_path,
        &["eta", "level_index", "label", "parity", "energy_over_wq"],
        &level_rows,
    )?;
    manifest.record_file(&levels_path);

    let transitions_path = out_dir.join("transitions.csv");
    write_csv(
        &transitions_path,
        &["eta", "level_k", "level_j", "label_k", "label_j", "omega_over_wq"],
        &transition_rows.into_iter().map(|r| r.4).collect::<Vec<_>>(),
    )?;
    manifest.record_file(&transitions_path);

    if manifest.has_flagged_points() {
        return Err(CliError::Convergence(
            "one or more sweep points failed to converge; see manifest flagged_points".into(),
        ));
    }
    Ok(())
}
