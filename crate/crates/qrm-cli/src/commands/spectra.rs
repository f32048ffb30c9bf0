//! `spectra`: per-eta emission spectra on a fixed frequency grid, each
//! (eta, channel) row max-normalized to 1 as in the density plots.

use std::path::Path;

use qrm_core::{Channel, Gauge, SpectrumResult};

use crate::config::SweepConfig;
use crate::error::{CliError, Result};
use crate::output::{write_csv, Field, RunManifest};

use super::{base_settings, bath_from, params_for, solve_with_m, sweep, OMEGA_Q};

struct SpectraPoint {
    n_max: usize,
    m: usize,
    per_channel: Vec<(Channel, SpectrumResult)>,
}

pub fn cmd_spectra(config: &SweepConfig, out_dir: &Path, manifest: &mut RunManifest) -> Result<()> {
    let gauge = config.single_gauge()?;
    let bath = bath_from(config)?;
    let settings = base_settings(config, gauge);
    let want_wrong = config.channels.contains(&Channel::CavityWrong);

    let outcomes = sweep(&config.eta_grid, |eta| {
        let params = params_for(config, eta)?;
        let sol = solve_with_m(config.model, &params, &bath, config, &settings)?;
        // the wrong-operator channel is a dipole-gauge construction
        let dipole_sol = if want_wrong && gauge != Gauge::Dipole {
            let mut s = settings;
            s.gauge = Gauge::Dipole;
            s.m_levels = sol.eig.as_ref().map(|e| e.m()).unwrap_or(s.m_levels);
            Some(solve_with_m(config.model, &params, &bath, config, &s)?)
        } else {
            None
        };
        let mut per_channel = Vec::new();
        for &channel in &config.channels {
            let source = if channel == Channel::CavityWrong {
                dipole_sol.as_ref().unwrap_or(&sol)
            } else {
                &sol
            };
            per_channel.push((channel, source.spectrum(channel, &config.omega_grid)?.into_max1()));
        }
        Ok(SpectraPoint {
            n_max: sol.n_max,
            m: sol.eig.as_ref().map(|e| e.m()).unwrap_or(sol.space.dim()),
            per_channel,
        })
    });

    let mut rows: Vec<(f64, f64, String, Vec<Field>)> = Vec::new();
    for outcome in &outcomes {
        match &outcome.result {
            Err(e) => manifest.flag_point(outcome.eta, e.to_string()),
            Ok(point) => {
                manifest.record_point(outcome.eta, point.n_max, point.m, outcome.wall_ms);
                for (channel, spectrum) in &point.per_channel {
                    for (w, v) in spectrum.omegas.iter().zip(spectrum.values.iter()) {
                        rows.push((
                            outcome.eta,
                            *w / OMEGA_Q,
                            channel.to_string(),
                            vec![
                                Field::Float(outcome.eta),
                                Field::Float(*w / OMEGA_Q),
                                Field::Str(channel.to_string()),
                                Field::Float(*v),
                            ],
                        ));
                    }
                }
            }
        }
    }
    rows.sort_by(|a, b| {
        (a.0, a.1, &a.2)
            .partial_cmp(&(b.0, b.1, &b.2))
            .expect("grid values are finite")
    });

    let path = out_dir.join("spectra.csv");
    write_csv(
        &path,
        &["eta", "omega_over_wq", "channel", "S_norm"],
        &rows.into_iter().map(|r| r.3).collect::<Vec<_>>(),
    )?;
    manifest.record_file(&path);

    if manifest.has_flagged_points() {
        return Err(CliError::Convergence(
            "one or more sweep points failed; see manifest flagged_points".into(),
        ));
    }
    Ok(())
}
