//! Structured linear algebra: symplectic spaces, Pfaffians, adjoints with
//! respect to a skew form, quaternionic structures and Hermitian signatures.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::numeric;
use crate::scalar::{within, Scalar};
use crate::tolerance::Tolerance;

/// An even-dimensional space with a nondegenerate skew form `ω(u, v) = uᵀ Ω v`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticSpace<T> {
    omega: Matrix<T>,
    omega_inv: Matrix<T>,
}

impl<T: Scalar> SymplecticSpace<T> {
    pub fn new(omega: Matrix<T>, tol: &Tolerance) -> Result<Self> {
        let n = omega.ensure_square()?;
        if n == 0 || n % 2 != 0 {
            return Err(Error::OddDimension(n));
        }
        let residual = omega.skew_residual();
        if !within::<T>(residual, tol.residual) {
            return Err(Error::NotSkew { residual });
        }
        let omega_inv = omega.inverse().map_err(|_| Error::DegenerateSymplecticForm)?;
        Ok(SymplecticSpace { omega, omega_inv })
    }

    /// `Ω = [[0, I], [-I, 0]]` on `C^{2m}`: `e_i` pairs with `e_{m+i}`,
    /// `ω(e_i, e_{m+i}) = 1`.
    pub fn standard(m: usize) -> Self {
        assert!(m >= 1);
        let id = Matrix::identity(m);
        let zero = Matrix::zeros(m, m);
        let omega = Matrix::from_blocks(&zero, &id, &(-&id), &zero);
        let omega_inv = -&omega;
        SymplecticSpace { omega, omega_inv }
    }

    /// Orthogonal direct sum `(V₁ ⊕ V₂, ω₁ ⊕ ω₂)`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        SymplecticSpace {
            omega: Matrix::block_diag(&self.omega, &other.omega),
            omega_inv: Matrix::block_diag(&self.omega_inv, &other.omega_inv),
        }
    }

    /// The same space with form `-ω`.
    pub fn negated(&self) -> Self {
        SymplecticSpace { omega: -&self.omega, omega_inv: -&self.omega_inv }
    }

    pub fn dim(&self) -> usize {
        self.omega.rows()
    }

    /// Half the dimension.
    pub fn half_dim(&self) -> usize {
        self.dim() / 2
    }

    pub fn omega(&self) -> &Matrix<T> {
        &self.omega
    }

    pub fn omega_inv(&self) -> &Matrix<T> {
        &self.omega_inv
    }

    /// `ω(u, v)`.
    pub fn pairing(&self, u: &[T], v: &[T]) -> T {
        let ov = self.omega.mul_vec(v);
        u.iter().zip(&ov).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn pfaffian(&self) -> T {
        pfaffian_unchecked(&self.omega)
    }

    fn ensure_dim(&self, a: &Matrix<T>) -> Result<()> {
        let n = a.ensure_square()?;
        if n != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: n });
        }
        Ok(())
    }
}

/// Pfaffian of an even-dimensional skew matrix, by skew-symmetric Gaussian
/// elimination (Parlett–Reid) with pivoting on column magnitude.
///
/// Convention: `Pf([[0, 1], [-1, 0]]) = 1`.
pub fn pfaffian<T: Scalar>(s: &Matrix<T>, tol: &Tolerance) -> Result<T> {
    let n = s.ensure_square()?;
    if n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    let residual = s.skew_residual();
    if !within::<T>(residual, tol.residual) {
        return Err(Error::NotSkew { residual });
    }
    Ok(pfaffian_unchecked(s))
}

pub(crate) fn pfaffian_unchecked<T: Scalar>(s: &Matrix<T>) -> T {
    T::pfaffian(s)
}

/// Parlett–Reid elimination by skew congruence.
pub(crate) fn pfaffian_by_elimination<T: Scalar>(s: &Matrix<T>) -> T {
    let n = s.rows();
    let mut a = s.clone();
    let mut pf = T::one();
    let mut k = 0;
    while k + 1 < n {
        // Pivot: largest entry below the diagonal in column k.
        let mut kp = k + 1;
        let mut best = a[(k + 1, k)].modulus();
        for i in (k + 2)..n {
            let m = a[(i, k)].modulus();
            if m > best {
                best = m;
                kp = i;
            }
        }
        if kp != k + 1 {
            a.swap_rows(k + 1, kp);
            a.swap_cols(k + 1, kp);
            pf = -pf;
        }
        let pivot = a[(k, k + 1)].clone();
        if pivot.is_zero() {
            return T::zero();
        }
        pf = pf * pivot.clone();
        if k + 2 < n {
            // Eliminate rows/cols k, k+1 from the trailing block with a
            // congruence; the update keeps the block skew.
            let tau: Vec<T> = ((k + 2)..n).map(|j| a[(k, j)].clone() / pivot.clone()).collect();
            let col: Vec<T> = ((k + 2)..n).map(|i| a[(i, k + 1)].clone()).collect();
            for (ii, i) in ((k + 2)..n).enumerate() {
                for (jj, j) in ((k + 2)..n).enumerate() {
                    let v = a[(i, j)].clone() + tau[ii].clone() * col[jj].clone() - col[ii].clone() * tau[jj].clone();
                    a[(i, j)] = v;
                }
            }
        }
        k += 2;
    }
    pf
}

/// Adjoint of `a` with respect to `ω`: `aᵀ_ω = Ω⁻¹ aᵀ Ω`, characterised by
/// `ω(a u, v) = ω(u, aᵀ_ω v)`.
pub fn form_transpose<T: Scalar>(a: &Matrix<T>, space: &SymplecticSpace<T>) -> Result<Matrix<T>> {
    space.ensure_dim(a)?;
    Ok(&(space.omega_inv() * &a.transpose()) * space.omega())
}

/// Adjoint of a map `b: V_dom → V_cod` between two symplectic spaces: the
/// map `V_cod → V_dom` with `ω_dom(b* x, y) = ω_cod(x, b y)`, namely
/// `Ω_dom⁻¹ bᵀ Ω_cod`.
pub fn map_adjoint<T: Scalar>(
    b: &Matrix<T>,
    domain: &SymplecticSpace<T>,
    codomain: &SymplecticSpace<T>,
) -> Result<Matrix<T>> {
    if b.cols() != domain.dim() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), found: b.cols() });
    }
    if b.rows() != codomain.dim() {
        return Err(Error::DimensionMismatch { expected: codomain.dim(), found: b.rows() });
    }
    Ok(&(domain.omega_inv() * &b.transpose()) * codomain.omega())
}

/// `‖a − aᵀ_ω‖ / max(1, ‖a‖)`; zero exactly when `a = Ω⁻¹φ` for a skew `φ`.
pub fn check_form_symmetric<T: Scalar>(a: &Matrix<T>, space: &SymplecticSpace<T>) -> Result<f64> {
    let at = form_transpose(a, space)?;
    Ok((a - &at).norm() / a.norm().max(1.0))
}

/// Antilinear map `v ↦ J₀ · conj(v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuaternionicStructure<T> {
    pub j_matrix: Matrix<T>,
}

impl<T: Scalar> QuaternionicStructure<T> {
    /// Block-diagonal stack of `[[0, -1], [1, 0]]` on `C^{dim}`.
    pub fn standard(dim: usize) -> Self {
        assert!(dim.is_multiple_of(2));
        let j = Matrix::from_fn(dim, dim, |r, c| {
            if r / 2 != c / 2 {
                T::zero()
            } else {
                match (r % 2, c % 2) {
                    (0, 1) => -T::one(),
                    (1, 0) => T::one(),
                    _ => T::zero(),
                }
            }
        });
        QuaternionicStructure { j_matrix: j }
    }

    /// `J(v)`.
    pub fn apply(&self, v: &[T]) -> Vec<T> {
        let conj: Vec<T> = v.iter().map(Scalar::conj).collect();
        self.j_matrix.mul_vec(&conj)
    }
}

/// `‖J₀ · conj(J₀) + I‖`; zero iff `J² = -1`.
pub fn check_quaternionic<T: Scalar>(j: &QuaternionicStructure<T>) -> f64 {
    let n = j.j_matrix.rows();
    let sq = &j.j_matrix * &j.j_matrix.conj();
    (&sq + &Matrix::identity(n)).norm()
}

/// Sesquilinear form `h(u, v) = Σ uᵢ Hᵢⱼ conj(vⱼ)` with `Hᴴ = H`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianForm<T> {
    h_matrix: Matrix<T>,
}

impl<T: Scalar> HermitianForm<T> {
    pub fn new(h_matrix: Matrix<T>, tol: &Tolerance) -> Result<Self> {
        h_matrix.ensure_square()?;
        let residual = (&h_matrix - &h_matrix.adjoint()).norm() / h_matrix.norm().max(1.0);
        if !within::<T>(residual, tol.residual) {
            return Err(Error::DegenerateForm);
        }
        Ok(HermitianForm { h_matrix })
    }

    /// The form `(u, v) ↦ B(u, J v)` for a bilinear form with matrix `B`
    /// and a quaternionic structure `J`: its matrix is `B · J₀`.
    pub fn from_bilinear(b: &Matrix<T>, j: &QuaternionicStructure<T>, tol: &Tolerance) -> Result<Self> {
        Self::new(b * &j.j_matrix, tol)
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.h_matrix
    }
}

/// Numbers of positive and negative eigenvalues.
pub fn hermitian_signature<T: Scalar>(h: &HermitianForm<T>, tol: &Tolerance) -> Result<(usize, usize)> {
    let m: Matrix<Complex64> = h.matrix().to_c64();
    let eig = numeric::hermitian_eigenvalues(&m)?;
    let floor = tol.residual * m.norm().max(1.0);
    if eig.iter().any(|l| l.abs() <= floor) {
        return Err(Error::DegenerateForm);
    }
    let p = eig.iter().filter(|&&l| l > 0.0).count();
    Ok((p, eig.len() - p))
}
