//! Steady states of the dissipative generators and photon-flux emission
//! rates in the dressed basis.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::dressed::{EigenSystem, StateLabel, TransitionTable};
use crate::error::{QrmError, Result};
use crate::hilbert::Operator;
use crate::linalg::{dagger, eigh, lstsq, max_abs, unvectorize, vectorize, CMatrix};
use crate::master::Superoperator;
use crate::models::ModelParams;

/// Density matrix over the retained levels.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    m: usize,
    entries: CMatrix,
}

impl DensityMatrix {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.m).map(|i| self.entries[(i, i)].re).sum()
    }

    /// Diagonal occupation of level j.
    pub fn population(&self, j: usize) -> f64 {
        self.entries[(j, j)].re
    }

    /// Tr[O rho].
    pub fn expectation(&self, op: &Operator) -> Result<C64> {
        if op.dim() != self.m {
            return Err(QrmError::DimensionMismatch { expected: self.m, got: op.dim() });
        }
        let prod = op.matrix().dot(&self.entries);
        Ok((0..self.m).map(|i| prod[(i, i)]).sum())
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let (vals, _) = eigh(&self.entries)?;
        Ok(vals[0])
    }
}

/// How to verify uniqueness of the steady state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UniquenessCheck {
    /// Full generator spectrum: the second-smallest |Re lambda| must exceed
    /// 1e3 times the smallest. O(M^6), fine for M <= ~24.
    Spectral,
    /// Only the residual |L rho| is checked (large-M sweeps).
    ResidualOnly,
    /// Spectral when M <= 24, residual-only above.
    Auto,
}

/// Options for [`steady_state_with`].
#[derive(Clone, Copy, Debug)]
pub struct SteadyStateOptions {
    pub uniqueness: UniquenessCheck,
    /// Tolerance on |L vec(rho)| relative to 1 + max|L|.
    pub residual_tol: f64,
    /// Allowed negative dust on the smallest eigenvalue of rho.
    pub positivity_tol: f64,
}

impl Default for SteadyStateOptions {
    fn default() -> Self {
        SteadyStateOptions {
            uniqueness: UniquenessCheck::Auto,
            residual_tol: 1e-9,
            positivity_tol: 1e-8,
        }
    }
}

const SPECTRAL_CHECK_MAX_M: usize = 24;

/// Steady state of a generator: least squares on the stacked system
/// [L; trace-row] = [0; 1], which conditions the zero mode explicitly.
pub fn steady_state(l: &Superoperator) -> Result<DensityMatrix> {
    steady_state_with(l, &SteadyStateOptions::default())
}

pub fn steady_state_with(l: &Superoperator, opts: &SteadyStateOptions) -> Result<DensityMatrix> {
    let m = l.m();
    let m2 = m * m;

    let spectral = match opts.uniqueness {
        UniquenessCheck::Spectral => true,
        UniquenessCheck::ResidualOnly => false,
        UniquenessCheck::Auto => m <= SPECTRAL_CHECK_MAX_M,
    };
    if spectral {
        let vals = crate::linalg::eigvals(l.matrix())?;
        let mut abs_re: Vec<f64> = vals.iter().map(|z| z.re.abs()).collect();
        abs_re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let (smallest, second) = (abs_re[0], abs_re[1]);
        if !(second > 1e3 * smallest) {
            return Err(QrmError::NonUniqueSteadyState { smallest, second });
        }
    }

    let mut stacked: CMatrix = Array2::zeros((m2 + 1, m2));
    stacked.slice_mut(ndarray::s![..m2, ..]).assign(l.matrix());
    for i in 0..m {
        stacked[(m2, i * m + i)] = C64::new(1.0, 0.0);
    }
    let mut b: Array1<C64> = Array1::zeros(m2 + 1);
    b[m2] = C64::new(1.0, 0.0);

    // Iterative refinement recovers the small populations to near machine
    // precision; a single least-squares pass leaves them with relative
    // errors around cond(L) * eps, which is visible at low temperatures.
    let mut solution = lstsq(&stacked, &b)?;
    for _ in 0..2 {
        let residual = stacked.dot(&solution) - &b;
        let correction = lstsq(&stacked, &residual)?;
        solution -= &correction;
    }
    let raw = unvectorize(&solution, m);
    let herm = (&raw + &dagger(&raw)).mapv(|z| z * C64::new(0.5, 0.0));
    let tr: f64 = (0..m).map(|i| herm[(i, i)].re).sum();
    if tr.abs() < 1e-12 {
        return Err(QrmError::SteadyStateResidual { residual: f64::INFINITY });
    }
    let entries = herm.mapv(|z| z / tr);

    let residual_vec = l.matrix().dot(&vectorize(&entries));
    let residual = residual_vec.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let scale = 1.0 + max_abs(l.matrix());
    if residual > opts.residual_tol * scale {
        return Err(QrmError::SteadyStateResidual { residual });
    }

    let rho = DensityMatrix { m, entries };
    let min_eig = rho.min_eigenvalue()?;
    if min_eig < -opts.positivity_tol {
        return Err(QrmError::PositivityViolation { min_eig });
    }
    Ok(rho)
}

/// Photon-flux emission rate W = Tr[O- O+ rho] for a lowering detection
/// operator O+. Clamped at zero when numerical dust drives it slightly
/// negative; fails if the violation exceeds the positivity tolerance scale.
pub fn emission_rate(rho: &DensityMatrix, o_plus: &Operator) -> Result<f64> {
    if o_plus.dim() != rho.m() {
        return Err(QrmError::DimensionMismatch { expected: rho.m(), got: o_plus.dim() });
    }
    let weight = o_plus.dagger().dot(o_plus);
    let w = rho.expectation(&weight)?.re;
    if w < 0.0 {
        let floor = 1e-8 * (1.0 + weight.max_abs());
        if w < -floor {
            return Err(QrmError::PositivityViolation { min_eig: w });
        }
        return Ok(0.0);
    }
    Ok(w)
}

/// Approximate cavity/qubit rate ratio of the effective dressed two-level
/// system: (w_q^2 / w_c^2) |x_{0,1-}|^2 / |s_{0,1-}|^2. Independent of the
/// density matrix.
pub fn two_level_ratio(eig: &EigenSystem, table: &TransitionTable, params: &ModelParams) -> Result<f64> {
    if eig.m() < 2 {
        return Err(QrmError::TooManyLevels { requested: 2, dim: eig.m() });
    }
    let j1m = eig
        .find_label(StateLabel::Excited { n: 1, upper: false })
        .ok_or_else(|| QrmError::Labeling("state 1- not found; run label_states first".into()))?;
    let x = table.x()[(0, j1m)].norm();
    let s = table.s()[(0, j1m)].norm();
    if s < 1e-14 {
        return Err(QrmError::RatioUndefined { s_abs: s });
    }
    let freq_ratio = params.omega_q() / params.omega_c();
    Ok(freq_ratio * freq_ratio * x * x / (s * s))
}
