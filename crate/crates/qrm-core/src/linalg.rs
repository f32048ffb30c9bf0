//! Thin wrappers around the dense complex linear algebra used everywhere:
//! Hermitian eigendecomposition, general eigenvalues, linear and
//! least-squares solves, Kronecker products, and column-stacking
//! vectorization of density matrices.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, EigVals, LeastSquaresSvd, Solve, UPLO};
use num_complex::Complex64 as C64;

use crate::error::Result;

pub type CMatrix = Array2<C64>;
pub type CVector = Array1<C64>;

extern "C" {
    fn openblas_set_num_threads(n: std::os::raw::c_int);
}

/// Pin the BLAS thread count. OpenBLAS reads its environment at load time,
/// so this is the only reliable runtime control; reduction order (and thus
/// bit-level reproducibility) depends on it.
pub fn set_blas_threads(n: usize) {
    unsafe { openblas_set_num_threads(n as std::os::raw::c_int) }
}

/// Hermitian eigendecomposition, eigenvalues ascending, columns are eigenvectors.
pub fn eigh(h: &CMatrix) -> Result<(Array1<f64>, CMatrix)> {
    // ndarray-linalg hands the row-major buffer to LAPACK, which reads it
    // column-major: the backend diagonalizes H^T = conj(H), so the returned
    // vectors are the conjugates of the eigenvectors of H. Eigenvalues are
    // unaffected. The convention test below pins this.
    let (vals, vecs) = h.eigh(UPLO::Lower)?;
    Ok((vals, vecs.mapv(|z| z.conj())))
}

/// Eigenvalues of a general complex matrix (zgeev).
pub fn eigvals(m: &CMatrix) -> Result<CVector> {
    Ok(m.eigvals()?)
}

/// Solve A x = b for dense complex A.
pub fn solve(a: &CMatrix, b: &CVector) -> Result<CVector> {
    Ok(a.solve(b)?)
}

/// Minimum-norm least-squares solution of A x = b (SVD-based).
pub fn lstsq(a: &CMatrix, b: &CVector) -> Result<CVector> {
    Ok(a.least_squares(b)?.solution)
}

/// Conjugate transpose.
pub fn dagger(m: &CMatrix) -> CMatrix {
    m.t().mapv(|z| z.conj())
}

/// Largest absolute entry.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Kronecker product a (x) b.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    ndarray::linalg::kron(a, b)
}

/// Apply a scalar function to a Hermitian matrix through its spectral
/// decomposition: f(H) = V f(Lambda) V^dag.
pub fn hermitian_function(h: &CMatrix, f: impl Fn(f64) -> C64) -> Result<CMatrix> {
    let (vals, vecs) = eigh(h)?;
    let n = h.nrows();
    let mut scaled = vecs.clone();
    for (j, lam) in vals.iter().enumerate() {
        let fz = f(*lam);
        for i in 0..n {
            scaled[(i, j)] *= fz;
        }
    }
    Ok(scaled.dot(&dagger(&vecs)))
}

/// Column-stacking vectorization: vec(rho)[c*m + r] = rho[r, c].
pub fn vectorize(rho: &CMatrix) -> CVector {
    let m = rho.nrows();
    let mut v = Array1::zeros(m * m);
    for c in 0..m {
        for r in 0..m {
            v[c * m + r] = rho[(r, c)];
        }
    }
    v
}

/// Inverse of [`vectorize`].
pub fn unvectorize(v: &CVector, m: usize) -> CMatrix {
    let mut rho = Array2::zeros((m, m));
    for c in 0..m {
        for r in 0..m {
            rho[(r, c)] = v[c * m + r];
        }
    }
    rho
}

/// Superoperator for left multiplication: vec(A rho) = (I (x) A) vec(rho).
pub fn spre(a: &CMatrix) -> CMatrix {
    let m = a.nrows();
    kron(&Array2::eye(m), a)
}

/// Superoperator for right multiplication: vec(rho B) = (B^T (x) I) vec(rho).
pub fn spost(b: &CMatrix) -> CMatrix {
    let m = b.nrows();
    kron(&b.t().to_owned(), &Array2::eye(m))
}

/// Superoperator for the two-sided product: vec(A rho B) = (B^T (x) A) vec(rho).
pub fn sandwich(a: &CMatrix, b: &CMatrix) -> CMatrix {
    kron(&b.t().to_owned(), a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn vectorization_is_column_stacking() {
        let rho = array![[c(1.0, 0.0), c(3.0, 0.0)], [c(2.0, 0.0), c(4.0, 0.0)]];
        let v = vectorize(&rho);
        assert_eq!(v[0], c(1.0, 0.0));
        assert_eq!(v[1], c(2.0, 0.0));
        assert_eq!(v[2], c(3.0, 0.0));
        assert_eq!(v[3], c(4.0, 0.0));
        let back = unvectorize(&v, 2);
        assert_eq!(back, rho);
    }

    #[test]
    fn sandwich_matches_direct_product() {
        let a = array![[c(1.0, 1.0), c(0.0, 2.0)], [c(0.5, 0.0), c(2.0, -1.0)]];
        let b = array![[c(0.0, 1.0), c(1.0, 0.0)], [c(2.0, 0.0), c(0.0, -1.0)]];
        let rho = array![[c(1.0, 0.0), c(0.2, 0.3)], [c(0.2, -0.3), c(0.0, 0.0)]];
        let direct = a.dot(&rho).dot(&b);
        let via_super = unvectorize(&sandwich(&a, &b).dot(&vectorize(&rho)), 2);
        for (x, y) in direct.iter().zip(via_super.iter()) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    #[test]
    fn eigh_returns_true_eigenvectors_of_the_input() {
        // pins the layout convention of the LAPACK backend: H v = lambda v
        // must hold for the returned vectors, not for conj(v)
        let h = array![
            [c(1.0, 0.0), c(0.0, 1.0), c(0.3, -0.2)],
            [c(0.0, -1.0), c(-1.0, 0.0), c(0.5, 0.4)],
            [c(0.3, 0.2), c(0.5, -0.4), c(0.2, 0.0)]
        ];
        let (vals, vecs) = eigh(&h).unwrap();
        for j in 0..3 {
            let col = vecs.column(j).to_owned();
            let hv = h.dot(&col);
            let mut residual: f64 = 0.0;
            for i in 0..3 {
                residual = residual.max((hv[i] - c(vals[j], 0.0) * col[i]).norm());
            }
            assert!(residual < 1e-12, "column {j} residual {residual}");
        }
        assert!(vals[0] <= vals[1] && vals[1] <= vals[2]);
    }

    #[test]
    fn hermitian_function_reproduces_cosine_series() {
        // cos of a small Hermitian matrix vs eighth-order Taylor series
        let h = array![[c(0.3, 0.0), c(0.1, 0.2)], [c(0.1, -0.2), c(-0.4, 0.0)]];
        let cos_h = hermitian_function(&h, |x| c(x.cos(), 0.0)).unwrap();
        let mut series: CMatrix = Array2::eye(2);
        let h2 = h.dot(&h);
        let h4 = h2.dot(&h2);
        let h6 = h4.dot(&h2);
        let h8 = h4.dot(&h4);
        series = series - &h2 * c(0.5, 0.0) + &h4 * c(1.0 / 24.0, 0.0) - &h6 * c(1.0 / 720.0, 0.0)
            + &h8 * c(1.0 / 40320.0, 0.0);
        for (x, y) in cos_h.iter().zip(series.iter()) {
            assert!((x - y).norm() < 1e-9);
        }
    }
}
