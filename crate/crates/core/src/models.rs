//! Higgs-field models for the real forms `SL(m,H)`, `SO(2m,H)` and `Sp(m,m)`.
//!
//! Every model carries the symplectic space `(V, ω)` for which its Higgs
//! field is symmetric. Block conventions:
//!
//! * `SO(2m,H)`: `V = W ⊕ W*` (W first), `Ω = [[0, I], [-I, 0]]`, so that
//!   `ω((w₁,ξ₁),(w₂,ξ₂)) = ξ₂(w₁) − ξ₁(w₂)`; `Φ = [[0, β], [γ, 0]]` with
//!   `β, γ` skew.
//! * `Sp(m,m)`: `V = W₁ ⊕ W₂`, `Ω = diag(Ω₁, −Ω₂)`; `Φ = [[0, β], [γ, 0]]`
//!   with `γ = −β*` the adjoint `W₁ → W₂`.

use std::fmt;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_form_symmetric, map_adjoint, HermitianForm, QuaternionicStructure, SymplecticSpace};
use crate::matrix::Matrix;
use crate::numeric;
use crate::scalar::{within, Scalar};
use crate::spectra::{eigenspace_at, min_separation, pfaffian_char_poly, sorted_roots};
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Group {
    /// `SL(m,H)`, complexification `SL(2m,C)`.
    #[serde(rename = "SL_H")]
    SlH,
    /// `SO(2m,H)`, complexification `SO(4m,C)`.
    #[serde(rename = "SO_STAR")]
    SoStar,
    /// `Sp(m,m)`, complexification `Sp(4m,C)`.
    #[serde(rename = "SP_MM")]
    SpMm,
}

impl Group {
    pub const ALL: [Group; 3] = [Group::SlH, Group::SoStar, Group::SpMm];

    pub fn as_str(self) -> &'static str {
        match self {
            Group::SlH => "SL_H",
            Group::SoStar => "SO_STAR",
            Group::SpMm => "SP_MM",
        }
    }

    /// Whether the spectral curve carries the involution `x ↦ −x`.
    pub fn has_involution(self) -> bool {
        !matches!(self, Group::SlH)
    }

    /// Dimension of `V` for rank parameter `m`.
    pub fn rep_dim(self, m: usize) -> usize {
        match self {
            Group::SlH => 2 * m,
            Group::SoStar | Group::SpMm => 4 * m,
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Group {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().replace('-', "_").as_str() {
            "SL_H" | "SLH" => Ok(Group::SlH),
            "SO_STAR" | "SOSTAR" | "SO_H" => Ok(Group::SoStar),
            "SP_MM" | "SPMM" => Ok(Group::SpMm),
            _ => Err(format!("unknown group `{s}` (expected SL_H, SO_STAR or SP_MM)")),
        }
    }
}

/// Off-diagonal components of `Φ` for the `SO` and `Sp` shapes.
#[derive(Clone, Debug, PartialEq)]
pub struct Blocks<T> {
    pub beta: Matrix<T>,
    pub gamma: Matrix<T>,
    /// `(ω₁, ω₂)` for `Sp(m,m)`; `None` for `SO(2m,H)`.
    pub factor_spaces: Option<(SymplecticSpace<T>, SymplecticSpace<T>)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HiggsModel<T> {
    pub group: Group,
    pub m: usize,
    pub phi: Matrix<T>,
    pub space: SymplecticSpace<T>,
    pub blocks: Option<Blocks<T>>,
}

impl<T: Scalar> HiggsModel<T> {
    /// Assembles a model without validation. Useful for negative controls.
    pub fn from_parts_unchecked(
        group: Group,
        m: usize,
        phi: Matrix<T>,
        space: SymplecticSpace<T>,
        blocks: Option<Blocks<T>>,
    ) -> Self {
        HiggsModel { group, m, phi, space, blocks }
    }

    /// Range of the first summand (`W` or `W₁`) in `V`; the second summand
    /// is the complement.
    pub fn first_block(&self) -> std::ops::Range<usize> {
        0..self.phi.rows() / 2
    }

    /// `ι(w, ξ) = (w, −ξ)`.
    pub fn iota(&self) -> Matrix<T> {
        let n = self.phi.rows();
        Matrix::from_fn(n, n, |i, j| match (i == j, i < n / 2) {
            (false, _) => T::zero(),
            (true, true) => T::one(),
            (true, false) => -T::one(),
        })
    }

    /// Re-runs every structural invariant.
    pub fn validate(&self, tol: &Tolerance) -> Result<()> {
        let residual = check_form_symmetric(&self.phi, &self.space)?;
        if !within::<T>(residual, tol.residual) {
            return Err(Error::NotSymmetric { residual });
        }
        if let Some(blocks) = &self.blocks {
            let n = self.phi.rows();
            let h = n / 2;
            let zero = Matrix::zeros(h, h);
            let assembled = Matrix::from_blocks(&zero, &blocks.beta, &blocks.gamma, &zero);
            let residual = (&assembled - &self.phi).norm() / self.phi.norm().max(1.0);
            if !within::<T>(residual, tol.residual) {
                return Err(Error::NotSymmetric { residual });
            }
            if self.group == Group::SoStar {
                for b in [&blocks.beta, &blocks.gamma] {
                    let residual = b.skew_residual();
                    if !within::<T>(residual, tol.residual) {
                        return Err(Error::NotSkew { residual });
                    }
                }
            }
        }
        Ok(())
    }
}

/// `Φ = ω⁻¹ φ` for a skew `φ`.
pub fn build_sl_quaternion<T: Scalar>(
    phi_form: &Matrix<T>,
    space: &SymplecticSpace<T>,
    tol: &Tolerance,
) -> Result<HiggsModel<T>> {
    let n = phi_form.ensure_square()?;
    if n != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: n });
    }
    let residual = phi_form.skew_residual();
    if !within::<T>(residual, tol.residual) {
        return Err(Error::NotSkew { residual });
    }
    Ok(HiggsModel {
        group: Group::SlH,
        m: n / 2,
        phi: space.omega_inv() * phi_form,
        space: space.clone(),
        blocks: None,
    })
}

/// `Φ = [[0, β], [γ, 0]]` on `W ⊕ W*` with skew `β: W* → W`, `γ: W → W*`.
pub fn build_so_star<T: Scalar>(beta: &Matrix<T>, gamma: &Matrix<T>, tol: &Tolerance) -> Result<HiggsModel<T>> {
    let h = beta.ensure_square()?;
    if gamma.ensure_square()? != h {
        return Err(Error::DimensionMismatch { expected: h, found: gamma.rows() });
    }
    if h == 0 || h % 2 != 0 {
        return Err(Error::OddDimension(h));
    }
    for b in [beta, gamma] {
        let residual = b.skew_residual();
        if !within::<T>(residual, tol.residual) {
            return Err(Error::NotSkew { residual });
        }
    }
    let zero = Matrix::zeros(h, h);
    Ok(HiggsModel {
        group: Group::SoStar,
        m: h / 2,
        phi: Matrix::from_blocks(&zero, beta, gamma, &zero),
        space: SymplecticSpace::standard(h),
        blocks: Some(Blocks { beta: beta.clone(), gamma: gamma.clone(), factor_spaces: None }),
    })
}

/// `Φ = [[0, β], [−β*, 0]]` on `W₁ ⊕ W₂` with `β: W₂ → W₁` and the form
/// `ω = (ω₁, −ω₂)`.
pub fn build_sp_mm<T: Scalar>(
    beta: &Matrix<T>,
    space1: &SymplecticSpace<T>,
    space2: &SymplecticSpace<T>,
) -> Result<HiggsModel<T>> {
    let adjoint = map_adjoint(beta, space2, space1)?;
    let gamma = -&adjoint;
    let h = space1.dim();
    if space2.dim() != h {
        return Err(Error::DimensionMismatch { expected: h, found: space2.dim() });
    }
    let zero = Matrix::zeros(h, h);
    Ok(HiggsModel {
        group: Group::SpMm,
        m: h / 2,
        phi: Matrix::from_blocks(&zero, beta, &gamma, &zero),
        space: space1.direct_sum(&space2.negated()),
        blocks: Some(Blocks { beta: beta.clone(), gamma, factor_spaces: Some((space1.clone(), space2.clone())) }),
    })
}

/// One `(λ, −λ)` pair of the spectrum.
#[derive(Clone, Debug)]
pub struct EigenPair {
    pub lambda: Complex64,
    pub minus_lambda: Complex64,
    /// `‖(Φ + λ) ι B_λ‖ / max(1, ‖Φ‖)` for an orthonormal basis `B_λ` of
    /// the λ-eigenspace.
    pub intertwiner_residual: f64,
}

/// Matches the spectrum of an `SO`/`Sp` model into `±λ` pairs and checks
/// that `ι` carries each λ-eigenspace onto the (−λ)-eigenspace.
pub fn involution_pairing<T: Scalar>(model: &HiggsModel<T>, tol: &Tolerance) -> Result<Vec<EigenPair>> {
    if !model.group.has_involution() {
        return Err(Error::WrongGroup(model.group.to_string()));
    }
    let phi = model.phi.to_c64();
    if phi.is_zero() {
        let zero = Complex64::new(0.0, 0.0);
        return Ok(vec![EigenPair { lambda: zero, minus_lambda: zero, intertwiner_residual: 0.0 }]);
    }
    let p = pfaffian_char_poly(&model.phi, &model.space, tol)?.to_c64();
    let roots = sorted_roots(&p)?;
    let scale = 1.0 + roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let separation = min_separation(&roots);
    if separation <= tol.cluster * scale {
        return Err(Error::ClusteredSpectrum { separation });
    }
    let match_tol = tol.cluster.sqrt() * scale;
    let omega = model.space.omega().to_c64();
    let iota = model.iota().to_c64();
    let n = phi.rows();
    let mut used = vec![false; roots.len()];
    let mut pairs = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        let lambda = roots[i];
        let partner = (0..roots.len())
            .filter(|&j| !used[j] && j != i)
            .min_by(|&a, &b| (roots[a] + lambda).norm().total_cmp(&(roots[b] + lambda).norm()))
            .filter(|&j| (roots[j] + lambda).norm() <= match_tol)
            .ok_or(Error::UnpairedEigenvalue { re: lambda.re, im: lambda.im })?;
        used[i] = true;
        used[partner] = true;
        let es = eigenspace_at(&phi, lambda, &omega)?;
        let moved = &iota * &es.basis;
        let shifted = &phi + &Matrix::scalar(n, es.eigenvalue);
        let residual = (&shifted * &moved).norm() / phi.norm().max(1.0);
        pairs.push(EigenPair { lambda: es.eigenvalue, minus_lambda: roots[partner], intertwiner_residual: residual });
    }
    Ok(pairs)
}

/// `‖ι Φ ι⁻¹ + Φ‖`.
pub fn anti_commutation_residual<T: Scalar>(model: &HiggsModel<T>) -> f64 {
    let iota = model.iota();
    let conj = &(&iota * &model.phi) * &iota;
    (&conj + &model.phi).norm()
}

/// Sign of `ι` on each kernel direction of `Φ`: `+1` in the first summand
/// (`W`, `W₁`), `−1` in the second (`W*`, `W₂`).
pub fn fixed_point_signs<T: Scalar>(model: &HiggsModel<T>, tol: &Tolerance) -> Result<Vec<i8>> {
    if !model.group.has_involution() {
        return Err(Error::WrongGroup(model.group.to_string()));
    }
    let phi = model.phi.to_c64();
    let n = phi.rows();
    let (_, sigma) = numeric::smallest_singular_subspace(&phi, 1)?;
    let floor = tol.membership * phi.norm().max(1.0);
    let nullity = sigma.iter().filter(|&&s| s <= floor).count();
    if nullity == 0 {
        return Err(Error::NoKernel);
    }
    let (kernel, _) = numeric::smallest_singular_subspace(&phi, nullity)?;
    let iota = model.iota().to_c64();
    // ι restricted to the kernel; the kernel must be ι-stable.
    let restricted = &(&kernel.adjoint() * &iota) * &kernel;
    let stable = (&(&iota * &kernel) - &(&kernel * &restricted)).norm();
    if stable > tol.membership * (nullity as f64).sqrt() {
        return Err(Error::MixedKernelVector { residual: stable });
    }
    let (_, vecs) = numeric::hermitian_eigen(&restricted)?;
    let adapted = &kernel * &vecs;
    let half = n / 2;
    let mut signs = Vec::with_capacity(nullity);
    for j in 0..nullity {
        let v = adapted.column(j);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let outside_first = v[half..].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let outside_second = v[..half].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if outside_first <= tol.membership * norm {
            signs.push(1);
        } else if outside_second <= tol.membership * norm {
            signs.push(-1);
        } else {
            return Err(Error::MixedKernelVector { residual: outside_first.min(outside_second) / norm });
        }
    }
    signs.sort_unstable_by(|a, b| b.cmp(a));
    Ok(signs)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CayleyComposition<T> {
    /// `Ψ = βγ`.
    pub psi: Matrix<T>,
    /// `check_form_symmetric(Ψ, (W, γ))`.
    pub symmetry_residual: f64,
    pub symmetric: bool,
}

/// Maximal-case composition `Ψ = βγ`, symmetric for the skew form `γ`.
pub fn cayley_compose<T: Scalar>(beta: &Matrix<T>, gamma: &Matrix<T>, tol: &Tolerance) -> Result<CayleyComposition<T>> {
    let space = SymplecticSpace::new(gamma.clone(), tol).map_err(|e| match e {
        Error::DegenerateSymplecticForm => Error::SingularGamma,
        other => other,
    })?;
    if beta.rows() != gamma.rows() || !beta.is_square() {
        return Err(Error::DimensionMismatch { expected: gamma.rows(), found: beta.rows() });
    }
    let psi = beta * gamma;
    let symmetry_residual = check_form_symmetric(&psi, &space)?;
    Ok(CayleyComposition { symmetric: within::<T>(symmetry_residual, tol.residual), psi, symmetry_residual })
}

/// Quaternionic structure and the Hermitian form of signature `(2m, 2m)`
/// attached to the `SO` and `Sp` models: for `Sp(m,m)` the form
/// `ω(u, Jv)` with `J` the standard structure, for `SO(2m,H)` the form
/// `(u, Jv)` with `(·,·)` the pairing of `W` and `W*`.
pub fn standard_hermitian_form<T: Scalar>(
    group: Group,
    m: usize,
    tol: &Tolerance,
) -> Result<Option<(QuaternionicStructure<T>, HermitianForm<T>)>> {
    match group {
        Group::SlH => Ok(None),
        Group::SpMm => {
            // J₀ = Ω₀⁻¹ on each factor, so that ω(u, Jv) = ±⟨u, v⟩ there.
            let s = SymplecticSpace::<T>::standard(m);
            let omega = s.direct_sum(&s.negated());
            let j = QuaternionicStructure { j_matrix: Matrix::block_diag(s.omega_inv(), s.omega_inv()) };
            let h = HermitianForm::from_bilinear(omega.omega(), &j, tol)?;
            Ok(Some((j, h)))
        }
        Group::SoStar => {
            let id = Matrix::<T>::identity(2 * m);
            let zero = Matrix::<T>::zeros(2 * m, 2 * m);
            let inner = Matrix::from_blocks(&zero, &id, &id, &zero);
            let j = QuaternionicStructure { j_matrix: Matrix::from_blocks(&zero, &id, &(-&id), &zero) };
            let h = HermitianForm::from_bilinear(&inner, &j, tol)?;
            Ok(Some((j, h)))
        }
    }
}

/// Deterministic random model. Free blocks use [`Scalar::random`]; forms
/// are standard.
pub fn random_model<T: Scalar>(group: Group, m: usize, seed: u64) -> HiggsModel<T> {
    assert!(m >= 1, "m must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = Tolerance::DEFAULT;
    match group {
        Group::SlH => {
            let space = SymplecticSpace::standard(m);
            let phi = Matrix::random_skew(2 * m, &mut rng);
            build_sl_quaternion(&phi, &space, &tol).expect("skew by construction")
        }
        Group::SoStar => {
            let beta = Matrix::random_skew(2 * m, &mut rng);
            let gamma = Matrix::random_skew(2 * m, &mut rng);
            build_so_star(&beta, &gamma, &tol).expect("skew by construction")
        }
        Group::SpMm => {
            let beta = Matrix::random(2 * m, 2 * m, &mut rng);
            let s = SymplecticSpace::standard(m);
            build_sp_mm(&beta, &s, &s).expect("dimensions agree")
        }
    }
}

/// Random model sitting over a fixed point of the involution: `Φ` has a
/// kernel. For `SO(2m,H)` one of `β, γ` (chosen by the seed) is a skew
/// matrix of rank `2m − 2`; for `Sp(m,m)`, `β` has rank `2m − 1`.
pub fn random_degenerate_model<T: Scalar>(group: Group, m: usize, seed: u64) -> HiggsModel<T> {
    assert!(m >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = Tolerance::DEFAULT;
    let h = 2 * m;
    match group {
        Group::SlH => {
            // Rank-deficient φ: congruence of a skew matrix by a singular map.
            let space = SymplecticSpace::standard(m);
            let s = Matrix::random_skew(h, &mut rng);
            let p = rank_deficient(h, h - 2, &mut rng);
            let phi = &(&p.transpose() * &s) * &p;
            build_sl_quaternion(&phi, &space, &tol).expect("skew by construction")
        }
        Group::SoStar => {
            let s = Matrix::random_skew(h, &mut rng);
            let p = rank_deficient(h, h - 2, &mut rng);
            let singular = &(&p.transpose() * &s) * &p;
            let regular = Matrix::random_skew(h, &mut rng);
            let (beta, gamma) =
                if rand::Rng::random_bool(&mut rng, 0.5) { (regular, singular) } else { (singular, regular) };
            build_so_star(&beta, &gamma, &tol).expect("skew by construction")
        }
        Group::SpMm => {
            let beta = rank_deficient(h, h - 1, &mut rng);
            let s = SymplecticSpace::standard(m);
            build_sp_mm(&beta, &s, &s).expect("dimensions agree")
        }
    }
}

fn rank_deficient<T: Scalar, R: rand::Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> Matrix<T> {
    let left = Matrix::<T>::random(n, rank, rng);
    let right = Matrix::<T>::random(rank, n, rng);
    if rank == 0 {
        return Matrix::zeros(n, n);
    }
    &left * &right
}
