//! `compare`: the GME, dressed-RWA, and standard master equations side by
//! side on identical grids — rates and spectra per model in wide CSVs.

use std::path::Path;

use qrm_core::{reference_rate_eta0, Channel, ModelKind, SpectrumResult};

use crate::config::SweepConfig;
use crate::error::{CliError, Result};
use crate::output::{write_csv, Field, RunManifest};

use super::{base_settings, bath_from, params_for, solve_with_m, sweep, OMEGA_Q};

const MODEL_ORDER: [ModelKind; 3] = [ModelKind::Gme, ModelKind::DressedRwa, ModelKind::StandardJc];

struct ComparePoint {
    n_max: usize,
    m: usize,
    rates: Vec<(f64, f64)>,
    spectra: Vec<Vec<(Channel, SpectrumResult)>>,
}

pub fn cmd_compare(config: &SweepConfig, out_dir: &Path, manifest: &mut RunManifest) -> Result<()> {
    let gauge = config.single_gauge()?;
    let models: Vec<ModelKind> = MODEL_ORDER
        .iter()
        .copied()
        .filter(|m| config.models.contains(m))
        .collect();
    if models.len() < 2 {
        return Err(CliError::Config("compare needs at least two models (key: models)".into()));
    }
    if config.channels.contains(&Channel::CavityWrong) {
        return Err(CliError::Config(
            "the cavity_wrong channel is not defined across comparison models".into(),
        ));
    }
    let bath = bath_from(config)?;
    let settings = base_settings(config, gauge);

    if models.contains(&ModelKind::StandardJc) {
        let eta_max = config.eta_grid.last().copied().unwrap_or(0.0);
        if eta_max > 0.3 {
            manifest.warn(format!(
                "standard_jc requested up to eta = {eta_max}: the model is unreliable beyond the \
                 ultrastrong-coupling onset; results are reported anyway"
            ));
        }
    }

    // per-model normalization by its own eta = 0 qubit rate
    let params0 = params_for(config, 0.0)?;
    let mut w_q0 = Vec::new();
    for &model in &models {
        w_q0.push(reference_rate_eta0(model, &bath, &params0, &settings)?);
    }

    let outcomes = sweep(&config.eta_grid, |eta| {
        let params = params_for(config, eta)?;
        let mut rates = Vec::new();
        let mut spectra = Vec::new();
        let mut n_max = 0;
        let mut m = 0;
        for &model in &models {
            let sol = solve_with_m(model, &params, &bath, config, &settings)?;
            n_max = n_max.max(sol.n_max);
            m = m.max(sol.eig.as_ref().map(|e| e.m()).unwrap_or(sol.space.dim()));
            rates.push((sol.w_c, sol.w_q));
            let mut per_channel = Vec::new();
            for &channel in &config.channels {
                per_channel.push((channel, sol.spectrum(channel, &config.omega_grid)?.into_max1()));
            }
            spectra.push(per_channel);
        }
        Ok(ComparePoint { n_max, m, rates, spectra })
    });

    let mut rate_rows: Vec<Vec<Field>> = Vec::new();
    let mut spectra_rows: Vec<(f64, f64, String, Vec<Field>)> = Vec::new();
    for outcome in &outcomes {
        match &outcome.result {
            Err(e) => manifest.flag_point(outcome.eta, e.to_string()),
            Ok(point) => {
                manifest.record_point(outcome.eta, point.n_max, point.m, outcome.wall_ms);
                let mut row = vec![Field::Float(outcome.eta)];
                for (i, (w_c, w_q)) in point.rates.iter().enumerate() {
                    row.push(Field::Float(w_c / w_q0[i]));
                    row.push(Field::Float(w_q / w_q0[i]));
                }
                rate_rows.push(row);

                for (ic, &channel) in config.channels.iter().enumerate() {
                    let reference = &point.spectra[0][ic].1;
                    for (iw, w) in reference.omegas.iter().enumerate() {
                        let mut row = vec![
                            Field::Float(outcome.eta),
                            Field::Float(*w / OMEGA_Q),
                            Field::Str(channel.to_string()),
                        ];
                        for per_model in &point.spectra {
                            row.push(Field::Float(per_model[ic].1.values[iw]));
                        }
                        spectra_rows.push((outcome.eta, *w / OMEGA_Q, channel.to_string(), row));
                    }
                }
            }
        }
    }
    spectra_rows.sort_by(|a, b| {
        (a.0, a.1, &a.2)
            .partial_cmp(&(b.0, b.1, &b.2))
            .expect("grid values are finite")
    });

    let mut rate_header = vec!["eta".to_string()];
    let mut spectra_header = vec!["eta".to_string(), "omega_over_wq".to_string(), "channel".to_string()];
    for &model in &models {
        rate_header.push(format!("W_c_norm_{model}"));
        rate_header.push(format!("W_q_norm_{model}"));
        spectra_header.push(format!("S_norm_{model}"));
    }

    let rates_path = out_dir.join("compare_rates.csv");
    write_csv(
        &rates_path,
        &rate_header.iter().map(String::as_str).collect::<Vec<_>>(),
        &rate_rows,
    )?;
    manifest.record_file(&rates_path);

    let spectra_path = out_dir.join("compare_spectra.csv");
    write_csv(
        &spectra_path,
        &spectra_header.iter().map(String::as_str).collect::<Vec<_>>(),
        &spectra_rows.into_iter().map(|r| r.3).collect::<Vec<_>>(),
    )?;
    manifest.record_file(&spectra_path);

    if manifest.has_flagged_points() {
        return Err(CliError::Convergence(
            "one or more sweep points failed; see manifest flagged_points".into(),
        ));
    }
    Ok(())
}
