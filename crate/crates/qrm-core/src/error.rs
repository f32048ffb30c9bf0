//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by construction, diagonalization, and solver routines.
#[derive(Error, Debug)]
pub enum QrmError {
    #[error("invalid truncation: n_max must be >= 1, got {0}")]
    InvalidTruncation(usize),

    #[error("operator is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max |O - O^dag| = {residual:.3e})")]
    NonHermitian { residual: f64 },

    #[error("requested {requested} levels but the space has dimension {dim}")]
    TooManyLevels { requested: usize, dim: usize },

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("invalid bath specification: {0}")]
    InvalidBath(String),

    #[error("state labeling failed: {0}")]
    Labeling(String),

    #[error("thermal occupation undefined for omega = {omega} (requires omega > 0)")]
    NonPositiveFrequency { omega: f64 },

    #[error("steady state is not unique: |Re lambda_1| = {second:.3e} vs |Re lambda_0| = {smallest:.3e}")]
    NonUniqueSteadyState { smallest: f64, second: f64 },

    #[error("steady state violates positivity: min eigenvalue {min_eig:.3e}")]
    PositivityViolation { min_eig: f64 },

    #[error("steady-state residual too large: |L rho| = {residual:.3e}")]
    SteadyStateResidual { residual: f64 },

    #[error("resolvent solve failed at omega = {omega}: {reason}")]
    ResolventSolve { omega: f64, reason: String },

    #[error("spectrum grid must be strictly positive and ascending")]
    BadFrequencyGrid,

    #[error("reference rate undefined: qubit emission vanishes at T_q = 0")]
    NormalizationUndefined,

    #[error("two-level ratio undefined: |s_{{0,1-}}| = {s_abs:.3e} below threshold")]
    RatioUndefined { s_abs: f64 },

    #[error("unsupported detection channel for this constructor: {0}")]
    UnsupportedChannel(String),

    #[error("convergence failure: {0}")]
    Convergence(String),

    #[error("linear algebra backend error: {0}")]
    LinAlg(#[from] ndarray_linalg::error::LinalgError),
}

pub type Result<T> = std::result::Result<T, QrmError>;
