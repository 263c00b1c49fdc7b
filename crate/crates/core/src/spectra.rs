//! Pfaffian characteristic polynomials of ω-symmetric endomorphisms.
//!
//! For `A` with `ω(Au, v) = ω(u, Av)` on a `2m`-dimensional symplectic
//! space, `Ω(xI − A)` is skew, and
//!
//! ```text
//! p(x) = Pf(Ω(xI − A)) / Pf(Ω)
//! ```
//!
//! is monic of degree `m` with `p(x)² = det(xI − A)`. This module computes
//! `p`, checks the square identity and the annihilator identity `p(A) = 0`,
//! and splits `A` into its two-dimensional symplectic eigenspaces.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{check_form_symmetric, pfaffian_unchecked, SymplecticSpace};
use crate::matrix::Matrix;
use crate::numeric;
use crate::poly::{interpolate_samples, Poly};
use crate::scalar::{within, Scalar};
use crate::tolerance::Tolerance;

/// Monic Pfaffian characteristic polynomial of `a`.
///
/// Exact backend: exact interpolation through `m + 1` integer nodes.
/// Floating backend: samples at the `(m + 1)`-th roots of unity scaled by
/// `1 + ‖a‖`, inverted by a discrete Fourier sum.
pub fn pfaffian_char_poly<T: Scalar>(a: &Matrix<T>, space: &SymplecticSpace<T>, tol: &Tolerance) -> Result<Poly<T>> {
    let residual = check_form_symmetric(a, space)?;
    if !within::<T>(residual, tol.residual) {
        return Err(Error::NotSymmetric { residual });
    }
    let n = space.dim();
    let m = n / 2;
    let pf_omega = space.pfaffian();
    let radius = 1.0 + a.norm();
    let p = interpolate_samples::<T>(m, radius, |x| {
        let shifted = &Matrix::scalar(n, x.clone()) - a;
        let mut s = space.omega() * &shifted;
        if !T::EXACT {
            // Skew part only; Ω(xI − A) is skew up to rounding.
            let half = T::from_ratio(1, 2);
            s = (&s - &s.transpose()).scale(&half);
        }
        Ok(pfaffian_unchecked(&s) / pf_omega.clone())
    })?;
    let mut coeffs: Vec<T> = (0..=m).map(|k| p.coeff(k)).collect();
    debug_assert!(!T::EXACT || coeffs[m] == T::one());
    coeffs[m] = T::one();
    Ok(Poly::new(coeffs))
}

/// `max_k |p(x_k)² − det(x_k I − a)| / scale` over `2m + 1` sample points.
pub fn verify_det_square<T: Scalar>(a: &Matrix<T>, p: &Poly<T>, space: &SymplecticSpace<T>) -> Result<f64> {
    let n = a.ensure_square()?;
    if n != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: n });
    }
    let m = n / 2;
    if p.is_zero() || p.degree() != m {
        return Err(Error::DegreeMismatch { expected: m, found: p.degree() });
    }
    let radius = 1.0 + a.norm();
    let samples = 2 * m + 1;
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for k in 0..samples {
        let x = if T::EXACT {
            T::from_i64(k as i64)
        } else {
            T::from_c64(Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / samples as f64))
        };
        let d = (&Matrix::scalar(n, x.clone()) - a).det()?;
        let px = p.eval(&x);
        let diff = px.clone() * px - d.clone();
        worst = worst.max(diff.modulus());
        scale = scale.max(d.modulus());
    }
    Ok(worst / scale)
}

/// `‖p(a)‖ / max(1, ‖a‖^deg p)` with `‖·‖` the largest entry modulus.
pub fn verify_annihilator<T: Scalar>(a: &Matrix<T>, p: &Poly<T>) -> Result<f64> {
    a.ensure_square()?;
    let value = p.eval_matrix(a);
    let scale = a.max_abs().powi(p.degree() as i32).max(1.0);
    Ok(value.max_abs() / scale)
}

/// One eigenvalue of a generic ω-symmetric endomorphism together with its
/// two-dimensional eigenspace.
#[derive(Clone, Debug)]
pub struct Eigenspace {
    pub eigenvalue: Complex64,
    /// `n x 2`, Euclidean-orthonormal columns.
    pub basis: Matrix<Complex64>,
    /// `Bᵀ Ω B`, the form restricted to the eigenspace.
    pub gram: Matrix<Complex64>,
    /// `‖(a − λ) B‖ / max(1, ‖a‖)`.
    pub residual: f64,
}

impl Eigenspace {
    pub fn gram_det(&self) -> Complex64 {
        self.gram[(0, 0)] * self.gram[(1, 1)] - self.gram[(0, 1)] * self.gram[(1, 0)]
    }
}

/// Spectrum summary: `p` plus grouped eigenvalue data.
#[derive(Clone, Debug)]
pub struct PfaffianSpectrum<T> {
    pub poly: Poly<T>,
    pub eigen_data: Vec<EigenData>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenData {
    pub eigenvalue: Complex64,
    /// Multiplicity as a root of `p`.
    pub multiplicity: usize,
    /// Numerical nullity of `a − λ`.
    pub eigenspace_dim: usize,
}

impl<T: Scalar> PfaffianSpectrum<T> {
    /// `[1, a₁, …, a_m]`.
    pub fn coefficients(&self) -> Vec<T> {
        self.poly.descending()
    }
}

pub fn pfaffian_spectrum<T: Scalar>(
    a: &Matrix<T>,
    space: &SymplecticSpace<T>,
    tol: &Tolerance,
) -> Result<PfaffianSpectrum<T>> {
    let poly = pfaffian_char_poly(a, space, tol)?;
    let roots = sorted_roots(&poly.to_c64())?;
    let ac = a.to_c64();
    let scale = 1.0 + roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut eigen_data: Vec<EigenData> = Vec::new();
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for r in roots {
        match groups.iter_mut().find(|g| (g[0] - r).norm() <= tol.cluster.sqrt() * scale) {
            Some(g) => g.push(r),
            None => groups.push(vec![r]),
        }
    }
    let n = ac.rows();
    for g in groups {
        let lambda = g.iter().sum::<Complex64>() / g.len() as f64;
        let shifted = &ac - &Matrix::scalar(n, lambda);
        let (_, sigma) = numeric::smallest_singular_subspace(&shifted, 1)?;
        let floor = tol.cluster.sqrt() * (1.0 + ac.norm());
        let nullity = sigma.iter().filter(|&&s| s <= floor).count();
        eigen_data.push(EigenData { eigenvalue: lambda, multiplicity: g.len(), eigenspace_dim: nullity });
    }
    Ok(PfaffianSpectrum { poly, eigen_data })
}

pub(crate) fn sorted_roots(p: &Poly<Complex64>) -> Result<Vec<Complex64>> {
    let mut roots = p.roots()?;
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

/// Smallest pairwise distance between entries, `f64::INFINITY` for < 2 items.
pub(crate) fn min_separation(values: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            best = best.min((values[i] - values[j]).norm());
        }
    }
    best
}

/// Two-dimensional eigenspace of `a` (floating) at an approximate
/// eigenvalue, refined once by the compressed trace.
pub(crate) fn eigenspace_at(a: &Matrix<Complex64>, lambda: Complex64, omega: &Matrix<Complex64>) -> Result<Eigenspace> {
    let n = a.rows();
    let basis_for = |l: Complex64| -> Result<Matrix<Complex64>> {
        let shifted = a - &Matrix::scalar(n, l);
        Ok(numeric::smallest_singular_subspace(&shifted, 2)?.0)
    };
    let b0 = basis_for(lambda)?;
    let compressed = &(&b0.adjoint() * a) * &b0;
    let refined = compressed.trace() / 2.0;
    let basis = basis_for(refined)?;
    let residual = (&(a * &basis) - &basis.scale(&refined)).norm() / a.norm().max(1.0);
    let gram = &(&basis.transpose() * omega) * &basis;
    Ok(Eigenspace { eigenvalue: refined, basis, gram, residual })
}

/// Splits `a` into `m` two-dimensional ω-nondegenerate eigenspaces.
///
/// Fails with [`Error::ClusteredSpectrum`] when two roots of the Pfaffian
/// polynomial are closer than `tol.cluster · (1 + max|λ|)`.
pub fn eigenspace_decomposition<T: Scalar>(
    a: &Matrix<T>,
    space: &SymplecticSpace<T>,
    tol: &Tolerance,
) -> Result<Vec<Eigenspace>> {
    let p = pfaffian_char_poly(a, space, tol)?.to_c64();
    let roots = sorted_roots(&p)?;
    let scale = 1.0 + roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let separation = min_separation(&roots);
    if separation <= tol.cluster * scale {
        return Err(Error::ClusteredSpectrum { separation });
    }
    let ac = a.to_c64();
    let omega = space.omega().to_c64();
    roots.into_iter().map(|l| eigenspace_at(&ac, l, &omega)).collect()
}

/// Largest entry of `Bᵢᵀ Ω Bⱼ` over distinct eigenspaces.
pub fn cross_gram_max(spaces: &[Eigenspace], omega: &Matrix<Complex64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..spaces.len() {
        for j in (i + 1)..spaces.len() {
            let g = &(&spaces[i].basis.transpose() * omega) * &spaces[j].basis;
            worst = worst.max(g.max_abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::scalar::{Exact, Float};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: Tolerance = Tolerance::DEFAULT;

    fn diag_pair(c: i64) -> Matrix<Exact> {
        Matrix::diagonal(&[c, -c, c, -c].map(Exact::from_i64))
    }

    fn random_symmetric(m: usize, rng: &mut ChaCha8Rng) -> (Matrix<Exact>, SymplecticSpace<Exact>) {
        let space = SymplecticSpace::standard(m);
        let phi = Matrix::random_skew(2 * m, rng);
        (space.omega_inv() * &phi, space)
    }

    #[test]
    fn two_dimensional_case_is_scalar() {
        let space = SymplecticSpace::<Exact>::standard(1);
        let c = Exact::from_ratio(5, 2);
        let a = Matrix::scalar(2, c.clone());
        let p = pfaffian_char_poly(&a, &space, &TOL).unwrap();
        assert_eq!(p, Poly::new(vec![-c, Exact::one()]));
        assert_eq!(verify_det_square(&a, &p, &space).unwrap(), 0.0);
        assert_eq!(verify_annihilator(&a, &p).unwrap(), 0.0);
    }

    #[test]
    fn paired_diagonal_gives_difference_of_squares() {
        let space = SymplecticSpace::<Exact>::standard(2);
        let a = diag_pair(3);
        // det(xI − a) = (x − 3)²(x + 3)² = (x² − 9)² by direct expansion.
        assert_eq!(oracle::det_by_cofactors(&(&Matrix::scalar(4, Exact::from_i64(5)) - &a)), Exact::from_i64(256));
        let p = pfaffian_char_poly(&a, &space, &TOL).unwrap();
        assert_eq!(p, Poly::from_i64(&[-9, 0, 1]));
        assert_eq!(verify_det_square(&a, &p, &space).unwrap(), 0.0);
        let wrong = Poly::from_i64(&[9, 0, 1]);
        assert!(verify_det_square(&a, &wrong, &space).unwrap() > 0.0);
    }

    #[test]
    fn degree_mismatch_is_reported() {
        let space = SymplecticSpace::<Exact>::standard(2);
        let p = Poly::from_i64(&[1, 1]);
        assert_eq!(verify_det_square(&diag_pair(1), &p, &space), Err(Error::DegreeMismatch { expected: 2, found: 1 }));
    }

    #[test]
    fn non_symmetric_input_is_rejected() {
        let space = SymplecticSpace::<Exact>::standard(1);
        let a = Matrix::from_i64_rows(&[&[1, 2], &[3, 4]]);
        assert!(matches!(pfaffian_char_poly(&a, &space, &TOL), Err(Error::NotSymmetric { .. })));
        let bad = Matrix::<Exact>::identity(3);
        assert!(matches!(pfaffian_char_poly(&bad, &space, &TOL), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn random_exact_6x6_square_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..5 {
            let (a, space) = random_symmetric(3, &mut rng);
            let p = pfaffian_char_poly(&a, &space, &TOL).unwrap();
            assert_eq!(&p * &p, oracle::char_poly(&a));
            assert_eq!(verify_annihilator(&a, &p).unwrap(), 0.0);
            // a₁ = −tr(a)/2
            assert_eq!(p.coeff(2), -a.trace() / Exact::from_i64(2));
        }
    }

    #[test]
    fn annihilator_examples() {
        let a = Matrix::scalar(2, Exact::from_i64(2));
        assert_eq!(verify_annihilator(&a, &Poly::from_i64(&[-2, 1])).unwrap(), 0.0);
        // p(a) = 2c·I; for |c| ≤ 1 the residual is 2|c|.
        let half = Matrix::scalar(2, Exact::from_ratio(1, 2));
        let r = verify_annihilator(&half, &Poly::new(vec![Exact::from_ratio(1, 2), Exact::one()])).unwrap();
        assert_eq!(r, 1.0);
        let r = verify_annihilator(&a, &Poly::from_i64(&[2, 1])).unwrap();
        assert_eq!(r, 2.0);
    }

    #[test]
    fn annihilator_on_non_diagonalizable_input() {
        // ω-symmetric with a nontrivial Jordan block: a = λ I + N with
        // N = Ω⁻¹ φ nilpotent.
        let space = SymplecticSpace::<Exact>::standard(2);
        let mut phi = Matrix::<Exact>::zeros(4, 4);
        // φ couples e₁ and e₂ so that N maps e₃ ↦ e₂-ish; nilpotent by rank.
        phi[(2, 3)] = Exact::from_i64(1);
        phi[(3, 2)] = Exact::from_i64(-1);
        let n_mat = space.omega_inv() * &phi;
        assert!((&n_mat * &n_mat).is_zero());
        assert!(!n_mat.is_zero());
        let a = &Matrix::scalar(4, Exact::from_i64(3)) + &n_mat;
        let p = pfaffian_char_poly(&a, &space, &TOL).unwrap();
        assert_eq!(p, Poly::from_i64(&[9, -6, 1]));
        assert_eq!(verify_annihilator(&a, &p).unwrap(), 0.0);
    }

    #[test]
    fn floating_poly_matches_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let (a, space) = random_symmetric(3, &mut rng);
        let exact = pfaffian_char_poly(&a, &space, &TOL).unwrap().to_c64();
        let af = a.to_c64();
        let sf = SymplecticSpace::<Float>::standard(3);
        let float = pfaffian_char_poly(&af, &sf, &TOL).unwrap();
        let scale = exact.max_abs();
        for k in 0..=3 {
            assert!((exact.coeff(k) - float.coeff(k)).norm() <= 1e-10 * scale);
        }
        assert!(verify_det_square(&af, &float, &sf).unwrap() < 1e-12);
        assert!(verify_annihilator(&af, &float).unwrap() < 1e-12);
    }

    #[test]
    fn eigenspaces_of_paired_diagonal() {
        let space = SymplecticSpace::<Exact>::standard(2);
        let spaces = eigenspace_decomposition(&diag_pair(2), &space, &TOL).unwrap();
        assert_eq!(spaces.len(), 2);
        for es in &spaces {
            let support: Vec<usize> = (0..4).filter(|&i| (0..2).any(|j| es.basis[(i, j)].norm() > 1e-9)).collect();
            if es.eigenvalue.re > 0.0 {
                assert_eq!(support, vec![0, 2]);
            } else {
                assert_eq!(support, vec![1, 3]);
            }
            assert!(es.gram_det().norm() > 0.5);
            assert!(es.residual < 1e-14);
        }
        assert!(cross_gram_max(&spaces, &space.omega().to_c64()) < 1e-14);
    }

    #[test]
    fn colliding_roots_are_reported() {
        let space = SymplecticSpace::<Exact>::standard(2);
        assert!(matches!(eigenspace_decomposition(&diag_pair(0), &space, &TOL), Err(Error::ClusteredSpectrum { .. })));
    }

    #[test]
    fn random_floating_eigenspaces_are_symplectic() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let space = SymplecticSpace::<Float>::standard(3);
        let phi = Matrix::<Float>::random_skew(6, &mut rng);
        let a = space.omega_inv() * &phi;
        let spaces = eigenspace_decomposition(&a, &space, &TOL).unwrap();
        assert_eq!(spaces.len(), 3);
        // Compare with a dense eigensolver: every eigenvalue of a appears
        // twice and coincides with one of ours.
        let dense = numeric::eigenvalues(&a).unwrap();
        for es in &spaces {
            let hits = dense.iter().filter(|z| (*z - es.eigenvalue).norm() < 1e-6).count();
            assert_eq!(hits, 2);
            assert!(es.gram_det().norm() > 1e-6);
            assert!(es.residual < 1e-12);
        }
        assert!(cross_gram_max(&spaces, space.omega()) < 1e-10);
    }

    #[test]
    fn conjugation_by_symplectic_matrix_preserves_poly() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let (a, space) = random_symmetric(2, &mut rng);
        // Symplectic shears [[I, S], [0, I]] and [[I, 0], [S', I]] with S symmetric.
        let sym = |rng: &mut ChaCha8Rng| {
            let r = Matrix::<Exact>::random(2, 2, rng);
            &r + &r.transpose()
        };
        let id = Matrix::<Exact>::identity(2);
        let z = Matrix::<Exact>::zeros(2, 2);
        let g1 = Matrix::from_blocks(&id, &sym(&mut rng), &z, &id);
        let g2 = Matrix::from_blocks(&id, &z, &sym(&mut rng), &id);
        let g = &g1 * &g2;
        assert_eq!(&(&g.transpose() * space.omega()) * &g, *space.omega());
        let conj = &(&g.inverse().unwrap() * &a) * &g;
        assert_eq!(pfaffian_char_poly(&conj, &space, &TOL).unwrap(), pfaffian_char_poly(&a, &space, &TOL).unwrap());
    }

    #[test]
    fn spectrum_summary_has_double_eigenspaces() {
        let space = SymplecticSpace::<Exact>::standard(2);
        let spectrum = pfaffian_spectrum(&diag_pair(1), &space, &TOL).unwrap();
        assert_eq!(spectrum.coefficients(), vec![Exact::one(), Exact::zero(), Exact::from_i64(-1)]);
        assert_eq!(spectrum.eigen_data.len(), 2);
        for d in &spectrum.eigen_data {
            assert_eq!((d.multiplicity, d.eigenspace_dim), (1, 2));
        }
    }
}
