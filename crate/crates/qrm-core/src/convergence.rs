//! Automatic Fock-truncation control: double n_max until the retained levels
//! stop moving.

use crate::dressed::{diagonalize_labeled, EigenSystem};
use crate::error::{QrmError, Result};
use crate::hilbert::{build_space, HilbertSpace, Operator};
use crate::models::{hamiltonian_coulomb, hamiltonian_dipole, ModelParams};

/// Gauge selection for Hamiltonian construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gauge {
    Coulomb,
    Dipole,
}

impl std::fmt::Display for Gauge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Gauge::Coulomb => write!(f, "coulomb"),
            Gauge::Dipole => write!(f, "dipole"),
        }
    }
}

/// Build the Rabi Hamiltonian in the requested gauge.
pub fn hamiltonian_in(gauge: Gauge, space: &HilbertSpace, params: &ModelParams) -> Result<Operator> {
    match gauge {
        Gauge::Coulomb => hamiltonian_coulomb(space, params),
        Gauge::Dipole => Ok(hamiltonian_dipole(space, params)),
    }
}

/// Settings of the n_max doubling scan.
#[derive(Clone, Copy, Debug)]
pub struct ConvergenceSettings {
    /// Relative tolerance on the retained eigenvalues between doublings.
    pub tol: f64,
    /// Hard ceiling on n_max.
    pub n_max_cap: usize,
}

impl Default for ConvergenceSettings {
    fn default() -> Self {
        ConvergenceSettings { tol: 1e-8, n_max_cap: 512 }
    }
}

/// Starting truncation for a given coupling: the dressed low-lying states are
/// displaced by ~eta in phase space, so their Fock tails scale like
/// (sqrt(m) + eta)^2.
pub fn initial_n_max(params: &ModelParams, m: usize) -> usize {
    let eta = params.eta();
    let base = 12.0 + 1.5 * m as f64 + 14.0 * eta + 6.0 * eta * eta;
    (base.ceil() as usize).max(m)
}

/// A converged basis: the space, Hamiltonian, and labeled eigensystem at the
/// first n_max whose lowest-m levels moved less than `tol` under doubling.
#[derive(Clone, Debug)]
pub struct ConvergedBasis {
    pub space: HilbertSpace,
    pub hamiltonian: Operator,
    pub eig: EigenSystem,
    pub n_max: usize,
}

fn level_shift(a: &EigenSystem, b: &EigenSystem, omega_q: f64) -> f64 {
    a.energies()
        .iter()
        .zip(b.energies())
        .map(|(x, y)| (x - y).abs() / omega_q.max(x.abs()))
        .fold(0.0, f64::max)
}

/// Diagonalize with doubling n_max until the retained spectrum is stable.
pub fn converge_eigensystem(
    gauge: Gauge,
    params: &ModelParams,
    m: usize,
    settings: &ConvergenceSettings,
) -> Result<ConvergedBasis> {
    let mut n_max = initial_n_max(params, m);
    let mut previous: Option<(ConvergedBasis, usize)> = None;
    loop {
        if n_max > settings.n_max_cap {
            return Err(QrmError::Convergence(format!(
                "n_max cap {} exceeded at eta = {} (tol {})",
                settings.n_max_cap,
                params.eta(),
                settings.tol
            )));
        }
        let space = build_space(n_max)?;
        let hamiltonian = hamiltonian_in(gauge, &space, params)?;
        let eig = diagonalize_labeled(&hamiltonian, m)?;
        let current = ConvergedBasis { space, hamiltonian, eig, n_max };
        if let Some((prev, _)) = &previous {
            if level_shift(&prev.eig, &current.eig, params.omega_q()) < settings.tol {
                return Ok(current);
            }
        }
        let next = n_max * 2;
        previous = Some((current, n_max));
        n_max = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn converges_and_matches_across_gauges() {
        let params = ModelParams::from_detuning(1.0, 0.0, 0.5).unwrap();
        let settings = ConvergenceSettings { tol: 1e-9, n_max_cap: 512 };
        let c = converge_eigensystem(Gauge::Coulomb, &params, 12, &settings).unwrap();
        let d = converge_eigensystem(Gauge::Dipole, &params, 12, &settings).unwrap();
        for j in 0..12 {
            let rel = (c.eig.energies()[j] - d.eig.energies()[j]).abs()
                / c.eig.energies()[j].abs().max(1.0);
            assert!(rel < 1e-8, "level {j}: {rel}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        let params = ModelParams::from_detuning(1.0, 0.0, 2.0).unwrap();
        let settings = ConvergenceSettings { tol: 1e-12, n_max_cap: 40 };
        assert!(matches!(
            converge_eigensystem(Gauge::Dipole, &params, 10, &settings),
            Err(QrmError::Convergence(_))
        ));
    }
}
