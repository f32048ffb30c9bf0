//! Quantum Rabi Hamiltonians in the Coulomb and dipole gauges, the
//! Jaynes-Cummings Hamiltonian, the gauge transformation, and the
//! dipole-gauge dressed photon operator.
//!
//! With hbar = 1:
//!
//! ```text
//! H_R  = wc a'a + (wq/2) { sz cos[2 eta (a + a')] + sy sin[2 eta (a + a')] }
//! H'_R = wc a'a + (wq/2) sz - i eta wc (a - a') sx + wc eta^2
//! H_JC = wc a'a + (wq/2) sz + (eta wc / 2)(a s+ + a' s-)
//! U    = exp[i eta (a + a') sx],   a' (dressed) = a + i eta sx
//! ```
//!
//! The trigonometric functions are evaluated as matrix functions of the
//! truncated quadrature, and the constant term wc eta^2 is kept so that the
//! two gauges agree level-by-level instead of up to a shift.

use num_complex::Complex64 as C64;

use crate::error::{QrmError, Result};
use crate::hilbert::{annihilation, pauli, position, HilbertSpace, Operator, PauliAxis};
use crate::linalg::hermitian_function;

/// Model parameters of the quantum Rabi problem (energies in units with
/// hbar = 1; eta = g / omega_c is the normalized coupling).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    omega_c: f64,
    omega_q: f64,
    eta: f64,
}

impl ModelParams {
    pub fn new(omega_c: f64, omega_q: f64, eta: f64) -> Result<Self> {
        if !(omega_c > 0.0) {
            return Err(QrmError::InvalidParams(format!("omega_c must be > 0, got {omega_c}")));
        }
        if !(omega_q > 0.0) {
            return Err(QrmError::InvalidParams(format!("omega_q must be > 0, got {omega_q}")));
        }
        if !(eta >= 0.0) {
            return Err(QrmError::InvalidParams(format!("eta must be >= 0, got {eta}")));
        }
        Ok(ModelParams { omega_c, omega_q, eta })
    }

    /// Construct from the detuning Delta = (omega_c - omega_q) / omega_q.
    pub fn from_detuning(omega_q: f64, delta: f64, eta: f64) -> Result<Self> {
        ModelParams::new(omega_q * (1.0 + delta), omega_q, eta)
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn omega_q(&self) -> f64 {
        self.omega_q
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Detuning (omega_c - omega_q) / omega_q.
    pub fn delta(&self) -> f64 {
        (self.omega_c - self.omega_q) / self.omega_q
    }

    pub fn with_eta(&self, eta: f64) -> Result<Self> {
        ModelParams::new(self.omega_c, self.omega_q, eta)
    }
}

/// Gauge transformation U = exp[i eta (a + a^dag) sigma_x], computed through
/// the spectral decomposition of the Hermitian exponent.
pub fn gauge_unitary(space: &HilbertSpace, params: &ModelParams) -> Result<Operator> {
    let x = position(space);
    let sx = pauli(space, PauliAxis::X);
    let generator = x.dot(&sx).scaled(C64::new(params.eta(), 0.0));
    let u = hermitian_function(generator.matrix(), |lam| C64::new(0.0, lam).exp())?;
    Operator::new(u)
}

/// Free Hamiltonian pieces wc a^dag a and (wq/2) sigma_z.
pub fn hamiltonian_free(space: &HilbertSpace, params: &ModelParams) -> (Operator, Operator) {
    let a = annihilation(space);
    let h_ph = a.dagger().dot(&a).scaled(C64::new(params.omega_c(), 0.0));
    let h_q = pauli(space, PauliAxis::Z).scaled(C64::new(0.5 * params.omega_q(), 0.0));
    (h_ph, h_q)
}

/// Coulomb-gauge Rabi Hamiltonian; cos/sin of 2 eta (a + a^dag) are exact
/// matrix functions within the truncation.
pub fn hamiltonian_coulomb(space: &HilbertSpace, params: &ModelParams) -> Result<Operator> {
    let x = position(space);
    let arg = x.scaled(C64::new(2.0 * params.eta(), 0.0));
    let cos_m = hermitian_function(arg.matrix(), |lam| C64::new(lam.cos(), 0.0))?;
    let sin_m = hermitian_function(arg.matrix(), |lam| C64::new(lam.sin(), 0.0))?;
    let cos_op = Operator::new(cos_m)?;
    let sin_op = Operator::new(sin_m)?;
    let sz = pauli(space, PauliAxis::Z);
    let sy = pauli(space, PauliAxis::Y);
    let (h_ph, _) = hamiltonian_free(space, params);
    let half_wq = C64::new(0.5 * params.omega_q(), 0.0);
    Ok(h_ph
        .add(&sz.dot(&cos_op).scaled(half_wq))
        .add(&sy.dot(&sin_op).scaled(half_wq)))
}

/// Dipole-gauge Rabi Hamiltonian, including the constant wc eta^2 term.
pub fn hamiltonian_dipole(space: &HilbertSpace, params: &ModelParams) -> Operator {
    let a = annihilation(space);
    let sx = pauli(space, PauliAxis::X);
    let (h_ph, h_q) = hamiltonian_free(space, params);
    let v = a.sub(&a.dagger()).dot(&sx).scaled(C64::new(0.0, -params.eta() * params.omega_c()));
    let shift = Operator::identity(space.dim()).scaled(C64::new(params.eta().powi(2) * params.omega_c(), 0.0));
    h_ph.add(&h_q).add(&v).add(&shift)
}

/// Jaynes-Cummings Hamiltonian with the coupling eta wc / 2.
pub fn hamiltonian_jc(space: &HilbertSpace, params: &ModelParams) -> Operator {
    hamiltonian_jc_with_coupling(space, params, 0.5 * params.eta() * params.omega_c())
}

/// Jaynes-Cummings Hamiltonian with an explicit coupling constant g_jc in
/// front of (a sigma_+ + a^dag sigma_-). The default of [`hamiltonian_jc`]
/// is eta wc / 2, which is half the dipole-gauge Rabi coupling; the knob
/// exists because the two conventions appear side by side in the literature.
pub fn hamiltonian_jc_with_coupling(space: &HilbertSpace, params: &ModelParams, g_jc: f64) -> Operator {
    let a = annihilation(space);
    let sp = pauli(space, PauliAxis::Raising);
    let sm = pauli(space, PauliAxis::Lowering);
    let (h_ph, h_q) = hamiltonian_free(space, params);
    let int = a.dot(&sp).add(&a.dagger().dot(&sm)).scaled(C64::new(g_jc, 0.0));
    h_ph.add(&h_q).add(&int)
}

/// Dressed photon annihilation operator of the dipole gauge:
/// a' = R a R^dag = a + i eta sigma_x.
pub fn dressed_photon_operator(space: &HilbertSpace, params: &ModelParams) -> Operator {
    let a = annihilation(space);
    let sx = pauli(space, PauliAxis::X).scaled(C64::new(0.0, params.eta()));
    a.add(&sx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{build_space, parity_operator};
    use crate::linalg::eigh;

    fn params(eta: f64) -> ModelParams {
        ModelParams::from_detuning(1.0, 0.0, eta).unwrap()
    }

    #[test]
    fn delta_relation_holds() {
        let p = ModelParams::from_detuning(1.0, -0.3, 0.2).unwrap();
        assert!((p.omega_c() - 0.7).abs() < 1e-15);
        assert!((p.delta() + 0.3).abs() < 1e-15);
    }

    #[test]
    fn gauge_unitary_is_identity_at_eta_zero_and_unitary_at_large_eta() {
        let space = build_space(30).unwrap();
        let u0 = gauge_unitary(&space, &params(0.0)).unwrap();
        assert!(u0.max_abs_diff(&Operator::identity(space.dim())) < 1e-13);

        let u = gauge_unitary(&space, &params(2.0)).unwrap();
        let uu = u.dot(&u.dagger());
        assert!(uu.max_abs_diff(&Operator::identity(space.dim())) < 1e-12);
    }

    #[test]
    fn transformed_annihilation_matches_dressed_operator_on_low_levels() {
        // U^dag a U = a + i eta sigma_x on matrix elements far from the
        // truncation edge; the identity is exact only as n_max -> infinity.
        let space = build_space(60).unwrap();
        let p = params(0.3);
        let u = gauge_unitary(&space, &p).unwrap();
        let a = annihilation(&space);
        let lhs = u.dagger().dot(&a).dot(&u);
        let rhs = dressed_photon_operator(&space, &p);
        let mut worst: f64 = 0.0;
        for q in 0..2 {
            for n in 0..6 {
                for q2 in 0..2 {
                    for n2 in 0..6 {
                        let i = space.index(q, n);
                        let j = space.index(q2, n2);
                        worst = worst.max((lhs.matrix()[(i, j)] - rhs.matrix()[(i, j)]).norm());
                    }
                }
            }
        }
        assert!(worst < 1e-8, "worst low-level residual {worst}");
    }

    #[test]
    fn coulomb_hamiltonian_equals_rotated_free_hamiltonian() {
        let space = build_space(40).unwrap();
        let p = params(0.7);
        let h = hamiltonian_coulomb(&space, &p).unwrap();
        let u = gauge_unitary(&space, &p).unwrap();
        let (h_ph, h_q) = hamiltonian_free(&space, &p);
        let rotated = u.dot(&h_q).dot(&u.dagger()).add(&h_ph);
        assert!(h.max_abs_diff(&rotated) < 1e-10);
    }

    #[test]
    fn eta_zero_spectra_are_bare() {
        let space = build_space(8).unwrap();
        let p = params(0.0);
        let hc = hamiltonian_coulomb(&space, &p).unwrap();
        let hd = hamiltonian_dipole(&space, &p);
        let (wc, _) = eigh(hc.matrix()).unwrap();
        let (wd, _) = eigh(hd.matrix()).unwrap();
        // lowest levels: -1/2, 1/2 (and 1/2 again), 3/2, ...
        assert!((wc[0] + 0.5).abs() < 1e-12);
        assert!((wd[0] + 0.5).abs() < 1e-12);
        for (a, b) in wc.iter().zip(wd.iter()).take(10) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn dipole_ground_diagonal_and_parity() {
        let space = build_space(20).unwrap();
        let p = params(0.4);
        let hd = hamiltonian_dipole(&space, &p);
        let g0 = space.index(0, 0);
        let expect = -0.5 * p.omega_q() + p.omega_c() * p.eta().powi(2);
        assert!((hd.matrix()[(g0, g0)] - C64::new(expect, 0.0)).norm() < 1e-14);

        let par = parity_operator(&space);
        assert!(par.commutator(&hd).max_abs() < 1e-12);
        let hc = hamiltonian_coulomb(&space, &p).unwrap();
        assert!(par.commutator(&hc).max_abs() < 1e-12);
    }

    #[test]
    fn cross_gauge_eigenvalues_converge() {
        // lowest levels of the two gauges agree once n_max is large enough
        let p = params(0.5);
        let space = build_space(60).unwrap();
        let hc = hamiltonian_coulomb(&space, &p).unwrap();
        let hd = hamiltonian_dipole(&space, &p);
        let (wc, _) = eigh(hc.matrix()).unwrap();
        let (wd, _) = eigh(hd.matrix()).unwrap();
        for j in 0..10 {
            let rel = (wc[j] - wd[j]).abs() / wd[j].abs().max(1.0);
            assert!(rel < 1e-8, "level {j} rel {rel}");
        }
    }

    #[test]
    fn jc_doublet_splitting_and_conserved_excitation() {
        let space = build_space(12).unwrap();
        let p = params(0.1);
        let hjc = hamiltonian_jc(&space, &p);
        let (w, _) = eigh(hjc.matrix()).unwrap();
        // first doublet at omega_q +/- eta*wc/2 around the ground level
        let split = w[2] - w[1];
        assert!((split - p.eta() * p.omega_c()).abs() < 1e-10, "split {split}");

        let a = annihilation(&space);
        let sp = pauli(&space, PauliAxis::Raising);
        let nexc = a.dagger().dot(&a).add(&sp.dot(&sp.dagger()));
        assert!(nexc.commutator(&hjc).max_abs() < 1e-12);
    }

    #[test]
    fn dressed_photon_commutator_and_shift() {
        let space = build_space(10).unwrap();
        let p = params(1.5);
        let ap = dressed_photon_operator(&space, &p);
        let a = annihilation(&space);
        // a' - a = i eta sigma_x entrywise
        let diff = ap.sub(&a);
        let expect = pauli(&space, PauliAxis::X).scaled(C64::new(0.0, p.eta()));
        assert_eq!(diff.max_abs_diff(&expect), 0.0);
        // commutator preserved away from the truncation edge
        let comm = ap.commutator(&ap.dagger());
        for q in 0..2 {
            for n in 0..space.n_max() {
                let i = space.index(q, n);
                assert!((comm.matrix()[(i, i)] - C64::new(1.0, 0.0)).norm() < 1e-13);
            }
        }
        // a' + a'^dag = a + a^dag exactly
        let sum = ap.add(&ap.dagger());
        assert_eq!(sum.max_abs_diff(&position(&space)), 0.0);
    }

    #[test]
    fn coulomb_interaction_is_bounded() {
        // || H_R - H_ph || <= wq/2 up to truncation noise
        let space = build_space(50).unwrap();
        let p = params(2.0);
        let h = hamiltonian_coulomb(&space, &p).unwrap();
        let (h_ph, _) = hamiltonian_free(&space, &p);
        let (w, _) = eigh(h.sub(&h_ph).matrix()).unwrap();
        let norm = w.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        assert!(norm <= 0.5 * p.omega_q() + 1e-9, "norm {norm}");
    }
}
