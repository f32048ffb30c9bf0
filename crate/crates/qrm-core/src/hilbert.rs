//! Truncated qubit (x) Fock composite space and the elementary operators on it.
//!
//! Basis ordering is qubit-major: index i = q*(n_max+1) + n with q in {0 = g,
//! 1 = e} and n in {0..n_max}, so Fock blocks are contiguous. Conventions:
//! sigma_z |e> = +|e>, sigma_+ = |e><g|, parity P = sigma_z (x) (-1)^n with
//! P |g,0> = -|g,0>.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{QrmError, Result};
use crate::linalg::{dagger, max_abs, CMatrix};

/// Truncated composite Hilbert space of one qubit and one bosonic mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HilbertSpace {
    n_max: usize,
}

impl HilbertSpace {
    /// Photon-number truncation (highest retained Fock state).
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Total dimension 2 * (n_max + 1).
    pub fn dim(&self) -> usize {
        2 * (self.n_max + 1)
    }

    /// Composite basis index of |q, n>.
    pub fn index(&self, q: usize, n: usize) -> usize {
        debug_assert!(q < 2 && n <= self.n_max);
        q * (self.n_max + 1) + n
    }

    /// Inverse of [`index`]: (q, n) for a basis index.
    pub fn qn(&self, i: usize) -> (usize, usize) {
        debug_assert!(i < self.dim());
        (i / (self.n_max + 1), i % (self.n_max + 1))
    }

    /// Recover the space a dim x dim operator lives on.
    pub fn from_dim(dim: usize) -> Result<Self> {
        if dim < 4 || dim % 2 != 0 {
            return Err(QrmError::DimensionMismatch { expected: 4, got: dim });
        }
        Ok(HilbertSpace { n_max: dim / 2 - 1 })
    }
}

/// Build a truncated space. Rejects n_max = 0: with no photon states beyond
/// the vacuum there is no cavity dynamics to speak of.
pub fn build_space(n_max: usize) -> Result<HilbertSpace> {
    if n_max < 1 {
        return Err(QrmError::InvalidTruncation(n_max));
    }
    Ok(HilbertSpace { n_max })
}

/// Dense operator on a [`HilbertSpace`] (or on a retained dressed subspace).
#[derive(Clone, Debug)]
pub struct Operator {
    dim: usize,
    matrix: CMatrix,
}

impl Operator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(QrmError::NotSquare { rows: matrix.nrows(), cols: matrix.ncols() });
        }
        Ok(Operator { dim: matrix.nrows(), matrix })
    }

    pub fn zeros(dim: usize) -> Self {
        Operator { dim, matrix: Array2::zeros((dim, dim)) }
    }

    pub fn identity(dim: usize) -> Self {
        Operator { dim, matrix: Array2::eye(dim) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dagger(&self) -> Operator {
        Operator { dim: self.dim, matrix: dagger(&self.matrix) }
    }

    pub fn dot(&self, other: &Operator) -> Operator {
        Operator { dim: self.dim, matrix: self.matrix.dot(&other.matrix) }
    }

    pub fn scaled(&self, z: C64) -> Operator {
        Operator { dim: self.dim, matrix: self.matrix.mapv(|x| x * z) }
    }

    pub fn add(&self, other: &Operator) -> Operator {
        Operator { dim: self.dim, matrix: &self.matrix + &other.matrix }
    }

    pub fn sub(&self, other: &Operator) -> Operator {
        Operator { dim: self.dim, matrix: &self.matrix - &other.matrix }
    }

    pub fn commutator(&self, other: &Operator) -> Operator {
        self.dot(other).sub(&other.dot(self))
    }

    /// max |O - O^dag|.
    pub fn hermiticity_error(&self) -> f64 {
        max_abs(&(&self.matrix - &dagger(&self.matrix)))
    }

    /// max |O - other|.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        max_abs(&(&self.matrix - &other.matrix))
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.matrix)
    }

    /// Fail unless the operator is Hermitian to `tol`.
    pub fn require_hermitian(&self, tol: f64) -> Result<()> {
        let residual = self.hermiticity_error();
        if residual > tol {
            return Err(QrmError::NonHermitian { residual });
        }
        Ok(())
    }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Photon annihilation operator: <q, n-1| a |q, n> = sqrt(n).
pub fn annihilation(space: &HilbertSpace) -> Operator {
    let mut m: CMatrix = Array2::zeros((space.dim(), space.dim()));
    for q in 0..2 {
        for n in 1..=space.n_max() {
            m[(space.index(q, n - 1), space.index(q, n))] = c((n as f64).sqrt());
        }
    }
    Operator { dim: space.dim(), matrix: m }
}

/// Cavity quadrature a + a^dag.
pub fn position(space: &HilbertSpace) -> Operator {
    let a = annihilation(space);
    a.add(&a.dagger())
}

/// Qubit operator choices for [`pauli`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
    Raising,
    Lowering,
}

/// Pauli or ladder operator tensored with the Fock identity.
pub fn pauli(space: &HilbertSpace, axis: PauliAxis) -> Operator {
    let mut m: CMatrix = Array2::zeros((space.dim(), space.dim()));
    for n in 0..=space.n_max() {
        let g = space.index(0, n);
        let e = space.index(1, n);
        match axis {
            PauliAxis::X => {
                m[(e, g)] = c(1.0);
                m[(g, e)] = c(1.0);
            }
            PauliAxis::Y => {
                // sigma_y = -i sigma_+ + i sigma_-
                m[(e, g)] = C64::new(0.0, -1.0);
                m[(g, e)] = C64::new(0.0, 1.0);
            }
            PauliAxis::Z => {
                m[(e, e)] = c(1.0);
                m[(g, g)] = c(-1.0);
            }
            PauliAxis::Raising => {
                m[(e, g)] = c(1.0);
            }
            PauliAxis::Lowering => {
                m[(g, e)] = c(1.0);
            }
        }
    }
    Operator { dim: space.dim(), matrix: m }
}

/// Parity operator P = sigma_z (x) (-1)^{a^dag a}; P^2 = identity.
pub fn parity_operator(space: &HilbertSpace) -> Operator {
    let mut m: CMatrix = Array2::zeros((space.dim(), space.dim()));
    for q in 0..2 {
        for n in 0..=space.n_max() {
            let sz = if q == 1 { 1.0 } else { -1.0 };
            let ph = if n % 2 == 0 { 1.0 } else { -1.0 };
            let i = space.index(q, n);
            m[(i, i)] = c(sz * ph);
        }
    }
    Operator { dim: space.dim(), matrix: m }
}
