//! The five sweep commands. Each owns its output directory: result CSVs or
//! JSON reports plus a manifest with config echo, per-point convergence
//! numbers, wall times, and file checksums.

pub mod audit;
pub mod compare;
pub mod levels;
pub mod rates;
pub mod spectra;

use std::time::Instant;

use rayon::prelude::*;

use qrm_core::{
    solve_point, BathSpec, ConvergenceSettings, Gauge, ModelKind, ModelParams, PipelineSettings,
    PointSolution,
};

use crate::config::{SweepConfig, Truncation};
use crate::error::{CliError, Result};

/// Internal units: omega_q = 1.
pub const OMEGA_Q: f64 = 1.0;

pub fn params_for(config: &SweepConfig, eta: f64) -> Result<ModelParams> {
    ModelParams::from_detuning(OMEGA_Q, config.delta, eta).map_err(CliError::from)
}

pub fn bath_from(config: &SweepConfig) -> Result<BathSpec> {
    BathSpec::new(
        config.kappa_over_wq * OMEGA_Q,
        config.gamma_over_wq * OMEGA_Q,
        config.t_c,
        config.t_q,
    )
    .map_err(CliError::from)
}

pub fn base_settings(config: &SweepConfig, gauge: Gauge) -> PipelineSettings {
    PipelineSettings {
        gauge,
        m_levels: match config.m_levels {
            Truncation::Fixed(m) => m,
            Truncation::Auto => 16,
        },
        n_max: match config.n_max {
            Truncation::Fixed(n) => Some(n),
            Truncation::Auto => None,
        },
        convergence: ConvergenceSettings { tol: config.convergence_tol, n_max_cap: config.n_max_cap },
        uniqueness: config.uniqueness,
        jc_coupling_scale: config.jc_coupling_scale,
    }
}

/// Solve one point, doubling the retained level count when `M = auto` until
/// the emission rates are stable to the convergence tolerance.
pub fn solve_with_m(
    model: ModelKind,
    params: &ModelParams,
    bath: &BathSpec,
    config: &SweepConfig,
    settings: &PipelineSettings,
) -> Result<PointSolution> {
    match config.m_levels {
        Truncation::Fixed(_) => Ok(solve_point(model, params, bath, settings)?),
        Truncation::Auto => {
            let tol = config.convergence_tol.max(1e-6);
            let mut m = settings.m_levels;
            let mut prev: Option<PointSolution> = None;
            loop {
                if m > config.m_cap {
                    return Err(CliError::Convergence(format!(
                        "M cap {} exceeded at eta = {}",
                        config.m_cap,
                        params.eta()
                    )));
                }
                let mut s = *settings;
                s.m_levels = m;
                let sol = solve_point(model, params, bath, &s)?;
                if let Some(p) = &prev {
                    let scale = (sol.w_c.abs() + sol.w_q.abs()).max(1e-300);
                    if ((sol.w_c - p.w_c).abs() + (sol.w_q - p.w_q).abs()) / scale < tol {
                        return Ok(sol);
                    }
                }
                prev = Some(sol);
                m *= 2;
            }
        }
    }
}

/// A solved point plus its wall time, or the failure that flagged it.
pub struct PointOutcome<T> {
    pub eta: f64,
    pub wall_ms: u64,
    pub result: Result<T>,
}

/// Run a per-eta closure across the sweep grid on the worker pool; results
/// come back in grid order regardless of scheduling.
pub fn sweep<T: Send>(
    etas: &[f64],
    f: impl Fn(f64) -> Result<T> + Sync,
) -> Vec<PointOutcome<T>> {
    etas.par_iter()
        .map(|&eta| {
            let started = Instant::now();
            let result = f(eta);
            PointOutcome { eta, wall_ms: started.elapsed().as_millis() as u64, result }
        })
        .collect()
}
