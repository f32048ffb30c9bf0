//! End-to-end single-parameter-point solvers shared by the CLI, the
//! acceptance suite, and downstream tests: build the space, diagonalize,
//! assemble the chosen generator, solve the steady state, and evaluate
//! emission rates and spectra.

use crate::convergence::{converge_eigensystem, hamiltonian_in, ConvergenceSettings, ConvergedBasis, Gauge};
use crate::dressed::{
    diagonalize_labeled, field_operator_plus, transition_table, wrong_field_operator_plus, Channel,
    EigenSystem, FieldOperatorSpec, TransitionTable, Weighting,
};
use crate::dynamics::{emission_rate, steady_state_with, DensityMatrix, SteadyStateOptions, UniquenessCheck};
use crate::error::{QrmError, Result};
use crate::hilbert::{annihilation, build_space, pauli, HilbertSpace, PauliAxis};
use crate::master::{decay_rates, liouvillian_dressed_rwa, liouvillian_gme, liouvillian_standard, BathSpec, RateTable, Superoperator};
use crate::models::{hamiltonian_jc_with_coupling, ModelParams};
use crate::spectra::{emission_spectrum, emission_spectrum_unweighted, SpectrumResult};

/// Which master equation drives the point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Gme,
    DressedRwa,
    StandardJc,
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModelKind::Gme => write!(f, "gme"),
            ModelKind::DressedRwa => write!(f, "dressed_rwa"),
            ModelKind::StandardJc => write!(f, "standard_jc"),
        }
    }
}

/// Per-point solver settings.
#[derive(Clone, Copy, Debug)]
pub struct PipelineSettings {
    pub gauge: Gauge,
    /// Retained dressed levels.
    pub m_levels: usize,
    /// Fixed Fock truncation, or None for the doubling scan.
    pub n_max: Option<usize>,
    pub convergence: ConvergenceSettings,
    pub uniqueness: UniquenessCheck,
    /// Scale on the Jaynes-Cummings coupling g = scale * eta * omega_c / 2.
    pub jc_coupling_scale: f64,
}

impl Default for PipelineSettings {
    fn default() -> Self {
        PipelineSettings {
            gauge: Gauge::Coulomb,
            m_levels: 20,
            n_max: None,
            convergence: ConvergenceSettings::default(),
            uniqueness: UniquenessCheck::Auto,
            jc_coupling_scale: 1.0,
        }
    }
}

/// Everything computed at one parameter point.
#[derive(Clone, Debug)]
pub struct PointSolution {
    pub model: ModelKind,
    pub gauge: Gauge,
    pub params: ModelParams,
    pub bath: BathSpec,
    pub space: HilbertSpace,
    pub n_max: usize,
    /// Dressed eigensystem (None for the standard model, which works on the
    /// bare basis).
    pub eig: Option<EigenSystem>,
    pub table: Option<TransitionTable>,
    pub rates: Option<RateTable>,
    pub liouvillian: Superoperator,
    pub rho: DensityMatrix,
    /// Cavity and qubit photon-flux rates (not normalized).
    pub w_c: f64,
    pub w_q: f64,
}

fn steady_opts(uniqueness: UniquenessCheck) -> SteadyStateOptions {
    SteadyStateOptions { uniqueness, ..SteadyStateOptions::default() }
}

fn dressed_point(
    model: ModelKind,
    params: &ModelParams,
    bath: &BathSpec,
    settings: &PipelineSettings,
) -> Result<PointSolution> {
    let basis: ConvergedBasis = match settings.n_max {
        Some(n) => {
            let space = build_space(n)?;
            let hamiltonian = hamiltonian_in(settings.gauge, &space, params)?;
            let eig = diagonalize_labeled(&hamiltonian, settings.m_levels)?;
            ConvergedBasis { space, hamiltonian, eig, n_max: n }
        }
        None => converge_eigensystem(settings.gauge, params, settings.m_levels, &settings.convergence)?,
    };
    let table = transition_table(&basis.eig, &basis.space)?;
    let rates = decay_rates(&table, bath, params);
    let h_dressed = basis.eig.dressed_hamiltonian();
    let liouvillian = match model {
        ModelKind::Gme => liouvillian_gme(&basis.eig, &rates, &h_dressed)?,
        ModelKind::DressedRwa => liouvillian_dressed_rwa(&basis.eig, &rates, &h_dressed)?,
        ModelKind::StandardJc => unreachable!("standard model handled separately"),
    };
    let rho = steady_state_with(&liouvillian, &steady_opts(settings.uniqueness))?;

    let cavity = FieldOperatorSpec::new(Channel::Cavity, Weighting::Linear, params.omega_c())?;
    let qubit = FieldOperatorSpec::new(Channel::Qubit, Weighting::Linear, params.omega_q())?;
    let w_c = emission_rate(&rho, &field_operator_plus(&table, &cavity)?)?;
    let w_q = emission_rate(&rho, &field_operator_plus(&table, &qubit)?)?;

    Ok(PointSolution {
        model,
        gauge: settings.gauge,
        params: *params,
        bath: *bath,
        space: basis.space,
        n_max: basis.n_max,
        eig: Some(basis.eig),
        table: Some(table),
        rates: Some(rates),
        liouvillian,
        rho,
        w_c,
        w_q,
    })
}

fn standard_point(
    params: &ModelParams,
    bath: &BathSpec,
    settings: &PipelineSettings,
) -> Result<PointSolution> {
    let g_jc = settings.jc_coupling_scale * 0.5 * params.eta() * params.omega_c();
    let solve_at = |n_max: usize| -> Result<(HilbertSpace, Superoperator, DensityMatrix, f64, f64)> {
        let space = build_space(n_max)?;
        let h = hamiltonian_jc_with_coupling(&space, params, g_jc);
        let l = liouvillian_standard(&h, bath)?;
        let rho = steady_state_with(&l, &steady_opts(settings.uniqueness))?;
        let a = annihilation(&space);
        let sm = pauli(&space, PauliAxis::Lowering);
        let w_c = emission_rate(&rho, &a)?;
        let w_q = emission_rate(&rho, &sm)?;
        Ok((space, l, rho, w_c, w_q))
    };

    let (space, liouvillian, rho, w_c, w_q, n_max) = match settings.n_max {
        Some(n) => {
            let (space, l, rho, w_c, w_q) = solve_at(n)?;
            (space, l, rho, w_c, w_q, n)
        }
        None => {
            // converge on the emission rates themselves
            let mut n = 6usize.max(settings.m_levels / 2);
            let mut prev: Option<(f64, f64)> = None;
            loop {
                if n > settings.convergence.n_max_cap {
                    return Err(QrmError::Convergence(format!(
                        "standard-model n_max cap exceeded at eta = {}",
                        params.eta()
                    )));
                }
                let (space, l, rho, w_c, w_q) = solve_at(n)?;
                let scale = (w_c.abs() + w_q.abs()).max(1e-300);
                if let Some((pc, pq)) = prev {
                    if ((w_c - pc).abs() + (w_q - pq).abs()) / scale < settings.convergence.tol.max(1e-10) {
                        break (space, l, rho, w_c, w_q, n);
                    }
                }
                prev = Some((w_c, w_q));
                n *= 2;
            }
        }
    };

    Ok(PointSolution {
        model: ModelKind::StandardJc,
        gauge: settings.gauge,
        params: *params,
        bath: *bath,
        space,
        n_max,
        eig: None,
        table: None,
        rates: None,
        liouvillian,
        rho,
        w_c,
        w_q,
    })
}

/// Solve one parameter point under the chosen model.
pub fn solve_point(
    model: ModelKind,
    params: &ModelParams,
    bath: &BathSpec,
    settings: &PipelineSettings,
) -> Result<PointSolution> {
    match model {
        ModelKind::Gme | ModelKind::DressedRwa => dressed_point(model, params, bath, settings),
        ModelKind::StandardJc => standard_point(params, bath, settings),
    }
}

impl PointSolution {
    /// The wrong-operator cavity rate of the gauge pitfall; only meaningful
    /// on a dipole-gauge solution.
    pub fn wrong_cavity_rate(&self) -> Result<f64> {
        if self.gauge != Gauge::Dipole {
            return Err(QrmError::UnsupportedChannel(
                "wrong-operator rate requires a dipole-gauge solution".into(),
            ));
        }
        let eig = self.eig.as_ref().ok_or_else(|| {
            QrmError::UnsupportedChannel("wrong-operator rate requires a dressed-basis model".into())
        })?;
        let spec = FieldOperatorSpec::new(Channel::CavityWrong, Weighting::Flat, self.params.omega_c())?;
        let wrong = wrong_field_operator_plus(&self.space, eig, &spec)?;
        emission_rate(&self.rho, &wrong)
    }

    /// Emission spectrum of one channel on a frequency grid, using the
    /// model-appropriate detection operators and formula.
    pub fn spectrum(&self, channel: Channel, grid: &[f64]) -> Result<SpectrumResult> {
        match self.model {
            ModelKind::Gme | ModelKind::DressedRwa => {
                let table = self.table.as_ref().expect("dressed model has a table");
                let (omega_ref, spec_channel) = match channel {
                    Channel::Cavity => (self.params.omega_c(), Channel::Cavity),
                    Channel::Qubit => (self.params.omega_q(), Channel::Qubit),
                    Channel::CavityWrong => (self.params.omega_c(), Channel::CavityWrong),
                };
                let spec = FieldOperatorSpec::new(spec_channel, Weighting::Flat, omega_ref)?;
                let o_plus = if spec_channel == Channel::CavityWrong {
                    let eig = self.eig.as_ref().expect("dressed model has an eigensystem");
                    wrong_field_operator_plus(&self.space, eig, &spec)?
                } else {
                    field_operator_plus(table, &spec)?
                };
                emission_spectrum(
                    &self.liouvillian,
                    &self.rho,
                    &o_plus.dagger(),
                    &o_plus,
                    omega_ref,
                    grid,
                    channel,
                )
            }
            ModelKind::StandardJc => {
                let o_plus = match channel {
                    Channel::Cavity => annihilation(&self.space),
                    Channel::Qubit => pauli(&self.space, PauliAxis::Lowering),
                    Channel::CavityWrong => {
                        return Err(QrmError::UnsupportedChannel(
                            "cavity_wrong is undefined for the standard model".into(),
                        ))
                    }
                };
                emission_spectrum_unweighted(
                    &self.liouvillian,
                    &self.rho,
                    &o_plus.dagger(),
                    &o_plus,
                    grid,
                    channel,
                )
            }
        }
    }
}

/// Reference qubit emission rate W_q^0 at eta = 0, from the same pipeline.
/// Undefined (and rejected) at T_q = 0.
pub fn reference_rate_eta0(
    model: ModelKind,
    bath: &BathSpec,
    params: &ModelParams,
    settings: &PipelineSettings,
) -> Result<f64> {
    if bath.t_q() == 0.0 {
        return Err(QrmError::NormalizationUndefined);
    }
    let p0 = params.with_eta(0.0)?;
    let mut s = *settings;
    s.m_levels = settings.m_levels.min(12);
    s.n_max = None;
    let sol = solve_point(model, &p0, bath, &s)?;
    if sol.w_q <= 0.0 {
        return Err(QrmError::NormalizationUndefined);
    }
    Ok(sol.w_q)
}

/// Per-eta normalized spectra (each row's highest value scaled to 1).
pub fn spectrum_map(
    model: ModelKind,
    base: &ModelParams,
    bath: &BathSpec,
    etas: &[f64],
    channels: &[Channel],
    grid: &[f64],
    settings: &PipelineSettings,
) -> Result<Vec<(f64, SpectrumResult)>> {
    let mut rows = Vec::with_capacity(etas.len() * channels.len());
    for &eta in etas {
        let params = base.with_eta(eta)?;
        let sol = solve_point(model, &params, bath, settings)?;
        for &channel in channels {
            rows.push((eta, sol.spectrum(channel, grid)?.into_max1()));
        }
    }
    Ok(rows)
}
