//! Floating-point dense kernels backed by `nalgebra`: complex Schur
//! eigenvalues, SVD null spaces and Hermitian eigenvalues.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub(crate) fn to_dmatrix(m: &Matrix<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

pub(crate) fn from_dmatrix(m: &DMatrix<Complex64>) -> Matrix<Complex64> {
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// All eigenvalues of a square complex matrix, unordered.
pub fn eigenvalues(m: &Matrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = m.ensure_square()?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let schur = nalgebra::Schur::try_new(to_dmatrix(m), f64::EPSILON, 10_000).ok_or(Error::NoConvergence)?;
    let vals = schur.eigenvalues().ok_or(Error::NoConvergence)?;
    Ok(vals.iter().copied().collect())
}

/// Right singular vectors for the `k` smallest singular values, returned as
/// columns of an `n x k` matrix with orthonormal columns, together with
/// all singular values sorted in decreasing order.
pub fn smallest_singular_subspace(m: &Matrix<Complex64>, k: usize) -> Result<(Matrix<Complex64>, Vec<f64>)> {
    let n = m.cols();
    assert!(k <= n);
    // Pad short matrices so that V is a full n x n unitary.
    let dm = if m.rows() < n {
        let mut padded = DMatrix::zeros(n, n);
        padded.view_mut((0, 0), (m.rows(), n)).copy_from(&to_dmatrix(m));
        padded
    } else {
        to_dmatrix(m)
    };
    let svd = nalgebra::SVD::try_new(dm, false, true, f64::EPSILON, 10_000).ok_or(Error::NoConvergence)?;
    let v_t = svd.v_t.as_ref().ok_or(Error::NoConvergence)?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sigma: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let picked = &order[order.len() - k..];
    // Rows of Vᴴ are conjugated right singular vectors.
    let basis = Matrix::from_fn(n, k, |i, j| v_t[(picked[j], i)].conj());
    Ok((basis, sigma))
}

/// Eigenvalues of a Hermitian matrix (real, unordered).
pub fn hermitian_eigenvalues(m: &Matrix<Complex64>) -> Result<Vec<f64>> {
    m.ensure_square()?;
    let eig = nalgebra::SymmetricEigen::try_new(to_dmatrix(m), f64::EPSILON, 10_000).ok_or(Error::NoConvergence)?;
    Ok(eig.eigenvalues.iter().copied().collect())
}

/// Eigen-decomposition of a Hermitian matrix: eigenvalues and the matrix of
/// orthonormal eigenvectors (as columns).
pub fn hermitian_eigen(m: &Matrix<Complex64>) -> Result<(Vec<f64>, Matrix<Complex64>)> {
    m.ensure_square()?;
    let eig = nalgebra::SymmetricEigen::try_new(to_dmatrix(m), f64::EPSILON, 10_000).ok_or(Error::NoConvergence)?;
    Ok((eig.eigenvalues.iter().copied().collect(), from_dmatrix(&eig.eigenvectors)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn eigenvalues_of_triangular() {
        let m = Matrix::new(2, 2, vec![c(2.0), c(5.0), c(0.0), c(-3.0)]);
        let mut ev: Vec<f64> = eigenvalues(&m).unwrap().iter().map(|z| z.re).collect();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] + 3.0).abs() < 1e-12 && (ev[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn null_space_of_rank_one() {
        let m = Matrix::new(2, 2, vec![c(1.0), c(1.0), c(1.0), c(1.0)]);
        let (k, sigma) = smallest_singular_subspace(&m, 1).unwrap();
        assert!(sigma[1] < 1e-12);
        let r = m.mul_vec(&k.column(0));
        assert!(r.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn hermitian_spectrum_is_real() {
        let i = Complex64::imag_unit();
        let m = Matrix::new(2, 2, vec![c(1.0), i, -i, c(1.0)]);
        let mut ev = hermitian_eigenvalues(&m).unwrap();
        ev.sort_by(f64::total_cmp);
        assert!(ev[0].abs() < 1e-12 && (ev[1] - 2.0).abs() < 1e-12);
    }
}
