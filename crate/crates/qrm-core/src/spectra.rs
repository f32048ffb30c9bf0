//! Emission spectra via the quantum regression theorem in resolvent form:
//! the one-sided Fourier transform of <O-(t+tau) O+(t)>_ss becomes a linear
//! solve on (i w I - L) per frequency.
//!
//! The default formula applies the omega-replacement: detection operators are
//! the flat-weighted (underlined) lowering operators and the spectrum carries
//! an explicit w^2 / w_ref^2 prefactor, so S(w) -> 0 as w -> 0. The
//! transition-weighted variant (linear-weighted operators, no prefactor) is
//! kept for cross-validation; the two differ only where line frequency and
//! detection frequency deviate.

use ndarray::Array1;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::dressed::Channel;
use crate::dynamics::DensityMatrix;
use crate::error::{QrmError, Result};
use crate::hilbert::Operator;
use crate::linalg::{solve, unvectorize, vectorize, CMatrix};
use crate::master::Superoperator;

/// Normalization applied to a spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    Raw,
    /// Highest value scaled to 1.
    Max1,
}

/// Frequency grid with emission spectral density for one detection channel.
#[derive(Clone, Debug)]
pub struct SpectrumResult {
    pub omegas: Vec<f64>,
    pub values: Vec<f64>,
    pub channel: Channel,
    pub normalization: Normalization,
}

impl SpectrumResult {
    /// Rescale so the highest value is 1 (no-op on an all-zero spectrum).
    pub fn into_max1(mut self) -> SpectrumResult {
        let max = self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if max > 0.0 {
            for v in &mut self.values {
                *v /= max;
            }
            self.normalization = Normalization::Max1;
        }
        self
    }

    /// Index of the maximum value.
    pub fn argmax(&self) -> usize {
        self.values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(i, _)| i)
            .unwrap_or(0)
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || grid[0] <= 0.0 {
        return Err(QrmError::BadFrequencyGrid);
    }
    for w in grid.windows(2) {
        if w[1] <= w[0] {
            return Err(QrmError::BadFrequencyGrid);
        }
    }
    Ok(())
}

fn regression_values(
    l: &Superoperator,
    rho_ss: &DensityMatrix,
    o_minus: &Operator,
    o_plus: &Operator,
    grid: &[f64],
) -> Result<Vec<f64>> {
    let m = l.m();
    for op in [o_minus, o_plus] {
        if op.dim() != m {
            return Err(QrmError::DimensionMismatch { expected: m, got: op.dim() });
        }
    }
    if rho_ss.m() != m {
        return Err(QrmError::DimensionMismatch { expected: m, got: rho_ss.m() });
    }
    check_grid(grid)?;

    let b = vectorize(&o_plus.matrix().dot(rho_ss.entries()));
    let lmat = l.matrix();

    grid.par_iter()
        .map(|&w| -> Result<f64> {
            let mut a: CMatrix = lmat.mapv(|z| -z);
            let iw = C64::new(0.0, w);
            for i in 0..m * m {
                a[(i, i)] += iw;
            }
            let x: Array1<C64> = solve(&a, &b).map_err(|e| QrmError::ResolventSolve {
                omega: w,
                reason: e.to_string(),
            })?;
            let corr = unvectorize(&x, m);
            let prod = o_minus.matrix().dot(&corr);
            let tr: C64 = (0..m).map(|i| prod[(i, i)]).sum();
            Ok(tr.re)
        })
        .collect()
}

/// Emission spectrum in the omega-replaced form:
/// S(w) = (w/w_ref)^2 Re Tr[ O- (i w I - L)^{-1} (O+ rho_ss) ].
/// Pass the flat-weighted (underlined) detection operators.
pub fn emission_spectrum(
    l: &Superoperator,
    rho_ss: &DensityMatrix,
    o_minus: &Operator,
    o_plus: &Operator,
    omega_ref: f64,
    grid: &[f64],
    channel: Channel,
) -> Result<SpectrumResult> {
    if !(omega_ref > 0.0) {
        return Err(QrmError::InvalidParams(format!("omega_ref must be > 0, got {omega_ref}")));
    }
    let raw = regression_values(l, rho_ss, o_minus, o_plus, grid)?;
    let values = grid
        .iter()
        .zip(raw)
        .map(|(w, v)| (w / omega_ref) * (w / omega_ref) * v)
        .collect();
    Ok(SpectrumResult { omegas: grid.to_vec(), values, channel, normalization: Normalization::Raw })
}

/// Emission spectrum without the frequency prefactor:
/// S(w) = Re Tr[ O- (i w I - L)^{-1} (O+ rho_ss) ].
/// Used with transition-weighted operators (the pre-replacement formula) and
/// with the bare operators of the standard master equation.
pub fn emission_spectrum_unweighted(
    l: &Superoperator,
    rho_ss: &DensityMatrix,
    o_minus: &Operator,
    o_plus: &Operator,
    grid: &[f64],
    channel: Channel,
) -> Result<SpectrumResult> {
    let values = regression_values(l, rho_ss, o_minus, o_plus, grid)?;
    Ok(SpectrumResult { omegas: grid.to_vec(), values, channel, normalization: Normalization::Raw })
}
