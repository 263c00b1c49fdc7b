//! The fiber `V = ⊕_y E_y` of the direct image over a regular point `z₀`,
//! one two-dimensional summand per root `y` of `p(·, z₀)`.
//!
//! Each `E_y` carries a volume form `c_y · det`, and `V` carries the residue
//! pairing `⟨s, s'⟩ = Σ_y c_y det(s_y, s'_y) / ∂ₓp(y, z₀)`. Sections are
//! lists of 2-vectors in sheet order; [`FiberModel::section_from_fn`]
//! builds them from the sheet values so that callers never depend on the
//! order itself.

use num_complex::Complex64;
use rand::Rng;

use crate::curve::{CurveShape, PlaneCurve};
use crate::error::{Error, Result};
use crate::linalg::{check_form_symmetric, SymplecticSpace};
use crate::matrix::Matrix;
use crate::models::Group;
use crate::numeric;
use crate::poly::Poly;
use crate::scalar::{within, Float, Scalar};
use crate::spectra::{min_separation, pfaffian_char_poly};
use crate::tolerance::Tolerance;

pub type Section<T> = Vec<[T; 2]>;

#[derive(Clone, Debug, PartialEq)]
pub struct FiberModel<T> {
    group: Group,
    even: bool,
    /// `p(·, z₀)`.
    poly: Poly<T>,
    /// Roots of `p(·, z₀)`; for even curves ordered `y₁, −y₁, y₂, −y₂, …`.
    sheets: Vec<T>,
    /// `1 / ∂ₓp(y, z₀)`.
    weights: Vec<T>,
    /// Volume scale `c_y` of each summand.
    volumes: Vec<T>,
}

/// Fiber over a regular point of the curve, with sheets found numerically.
pub fn assemble_fiber<T: Scalar>(curve: &PlaneCurve<T>, z0: Complex64, tol: &Tolerance) -> Result<FiberModel<Float>> {
    let roots = curve.fiber_roots(z0, tol)?;
    if !roots.regular {
        return Err(Error::NonRegularPoint);
    }
    let poly = curve.fiber_poly_at(z0);
    FiberModel::from_poly(curve.group(), curve.shape() == CurveShape::Even, poly, roots.roots, tol)
}

impl<T: Scalar> FiberModel<T> {
    /// Fiber over `z₀` with caller-supplied sheets, e.g. exact rational
    /// roots. Every root of `p(·, z₀)` must be listed once.
    pub fn from_sheets(curve: &PlaneCurve<T>, z0: &T, sheets: Vec<T>, tol: &Tolerance) -> Result<Self> {
        Self::from_poly(curve.group(), curve.shape() == CurveShape::Even, curve.fiber_poly(z0), sheets, tol)
    }

    fn from_poly(group: Group, even: bool, poly: Poly<T>, sheets: Vec<T>, tol: &Tolerance) -> Result<Self> {
        if sheets.len() != poly.degree() {
            return Err(Error::DimensionMismatch { expected: poly.degree(), found: sheets.len() });
        }
        let scale = 1.0 + poly.max_abs();
        for y in &sheets {
            let r = poly.eval(y).modulus() / (scale * (1.0 + y.modulus()).powi(poly.degree() as i32));
            if !within::<T>(r, tol.residual) {
                return Err(Error::NonRegularPoint);
            }
        }
        let c64: Vec<Complex64> = sheets.iter().map(Scalar::to_c64).collect();
        let spread = 1.0 + c64.iter().map(|y| y.norm()).fold(0.0, f64::max);
        if min_separation(&c64) <= tol.cluster * spread {
            return Err(Error::NonRegularPoint);
        }
        let sheets = if even { pair_order(sheets, tol)? } else { plain_order(sheets) };
        let dp = poly.derivative();
        let weights = sheets
            .iter()
            .map(|y| {
                let d = dp.eval(y);
                if d.is_zero() {
                    Err(Error::NonRegularPoint)
                } else {
                    Ok(T::one() / d)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let volumes = vec![T::one(); sheets.len()];
        Ok(FiberModel { group, even, poly, sheets, weights, volumes })
    }

    /// Replaces the volume form on `E_{yᵢ}` by `cᵢ · det`.
    pub fn with_volume_scales(mut self, scales: Vec<T>) -> Result<Self> {
        if scales.len() != self.sheets.len() {
            return Err(Error::DimensionMismatch { expected: self.sheets.len(), found: scales.len() });
        }
        if scales.iter().any(Scalar::is_zero) {
            return Err(Error::DegeneratePairing);
        }
        self.volumes = scales;
        Ok(self)
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn fiber_poly(&self) -> &Poly<T> {
        &self.poly
    }

    pub fn sheets(&self) -> &[T] {
        &self.sheets
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn volumes(&self) -> &[T] {
        &self.volumes
    }

    /// `dim V = 2 · #sheets`.
    pub fn dim(&self) -> usize {
        2 * self.sheets.len()
    }

    /// Number of `(y, −y)` pairs (even curves only).
    pub fn pair_count(&self) -> usize {
        self.sheets.len() / 2
    }

    pub fn section_from_fn(&self, mut f: impl FnMut(usize, &T) -> [T; 2]) -> Section<T> {
        self.sheets.iter().enumerate().map(|(i, y)| f(i, y)).collect()
    }

    /// Section supported on one sheet.
    pub fn delta_section(&self, sheet: usize, value: [T; 2]) -> Section<T> {
        self.section_from_fn(|i, _| if i == sheet { value.clone() } else { [T::zero(), T::zero()] })
    }

    /// Flattens a section into a vector of `V` (sheet-major).
    pub fn to_vector(&self, s: &Section<T>) -> Vec<T> {
        s.iter().flat_map(|[a, b]| [a.clone(), b.clone()]).collect()
    }

    /// `Σᵢ cᵢ wᵢ det(sᵢ, s'ᵢ)`.
    pub fn residue_pairing(&self, s: &Section<T>, s_prime: &Section<T>) -> Result<T> {
        let k = self.sheets.len();
        for len in [s.len(), s_prime.len()] {
            if len != k {
                return Err(Error::DimensionMismatch { expected: k, found: len });
            }
        }
        Ok(s.iter().zip(s_prime).enumerate().fold(T::zero(), |acc, (i, ([a, b], [c, d]))| {
            let det = a.clone() * d.clone() - b.clone() * c.clone();
            acc + det * self.volumes[i].clone() * self.weights[i].clone()
        }))
    }

    /// Matrix of the residue pairing on `V`: `diag(cᵢ wᵢ J)` with
    /// `J = [[0, 1], [−1, 0]]`.
    pub fn gram(&self) -> Matrix<T> {
        let n = self.dim();
        Matrix::from_fn(n, n, |r, c| {
            if r / 2 != c / 2 || r == c {
                return T::zero();
            }
            let i = r / 2;
            let cw = self.volumes[i].clone() * self.weights[i].clone();
            if r % 2 == 0 {
                cw
            } else {
                -cw
            }
        })
    }

    pub fn space(&self, tol: &Tolerance) -> Result<SymplecticSpace<T>> {
        SymplecticSpace::new(self.gram(), tol).map_err(|e| match e {
            Error::DegenerateSymplecticForm => Error::DegeneratePairing,
            other => other,
        })
    }

    /// `min |cᵢ wᵢ| / max |cᵢ wᵢ|`: zero iff the pairing degenerates.
    pub fn nondegeneracy(&self) -> f64 {
        let mods: Vec<f64> =
            self.volumes.iter().zip(&self.weights).map(|(c, w)| (c.clone() * w.clone()).modulus()).collect();
        let max = mods.iter().copied().fold(0.0, f64::max);
        if max == 0.0 {
            return 0.0;
        }
        mods.iter().copied().fold(f64::INFINITY, f64::min) / max
    }
}

fn key(y: &Complex64) -> (f64, f64) {
    (y.norm(), y.arg())
}

fn plain_order<T: Scalar>(mut sheets: Vec<T>) -> Vec<T> {
    sheets.sort_by(|a, b| {
        let (a, b) = (a.to_c64(), b.to_c64());
        a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
    });
    sheets
}

/// Orders sheets as `y₁, −y₁, y₂, −y₂, …` with representatives in the
/// half plane `Re y > 0` (or on the positive imaginary axis), sorted by
/// modulus and argument.
fn pair_order<T: Scalar>(sheets: Vec<T>, tol: &Tolerance) -> Result<Vec<T>> {
    let c64: Vec<Complex64> = sheets.iter().map(Scalar::to_c64).collect();
    let scale = 1.0 + c64.iter().map(|y| y.norm()).fold(0.0, f64::max);
    let mut used = vec![false; sheets.len()];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..sheets.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let j = (0..sheets.len())
            .filter(|&j| !used[j])
            .min_by(|&a, &b| (c64[a] + c64[i]).norm().total_cmp(&(c64[b] + c64[i]).norm()))
            .ok_or(Error::UnpairedEigenvalue { re: c64[i].re, im: c64[i].im })?;
        let paired = if T::EXACT {
            (sheets[i].clone() + sheets[j].clone()).is_zero()
        } else {
            (c64[i] + c64[j]).norm() <= tol.cluster * scale
        };
        if !paired {
            return Err(Error::UnpairedEigenvalue { re: c64[i].re, im: c64[i].im });
        }
        used[j] = true;
        let first_is_rep = {
            let y = c64[i];
            if y.re.abs() > 1e-12 * y.norm() {
                y.re > 0.0
            } else {
                y.im > 0.0
            }
        };
        pairs.push(if first_is_rep { (i, j) } else { (j, i) });
    }
    pairs.sort_by(|a, b| {
        let (ka, kb) = (key(&c64[a.0]), key(&c64[b.0]));
        ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
    });
    Ok(pairs.into_iter().flat_map(|(a, b)| [sheets[a].clone(), sheets[b].clone()]).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicationOperator<T> {
    /// `diag(yᵢ I₂)`.
    pub operator: Matrix<T>,
    /// Failure of `⟨xs, s'⟩ = ⟨s, xs'⟩`, as in [`check_form_symmetric`].
    pub symmetry_residual: f64,
    /// Pfaffian characteristic polynomial with respect to the pairing.
    pub char_poly: Poly<T>,
}

impl<T: Scalar> MultiplicationOperator<T> {
    /// `max_k |cₖ(char_poly) − cₖ(p(·, z₀))| / max_k |cₖ(p(·, z₀))|`.
    pub fn roundtrip_residual(&self, fiber: &FiberModel<T>) -> f64 {
        let p = fiber.fiber_poly();
        let n = p.degree().max(self.char_poly.degree());
        let worst = (0..=n).map(|k| (self.char_poly.coeff(k) - p.coeff(k)).modulus()).fold(0.0, f64::max);
        worst / p.max_abs().max(f64::MIN_POSITIVE)
    }
}

/// Multiplication by `x` on `V`.
pub fn multiplication_operator<T: Scalar>(fiber: &FiberModel<T>, tol: &Tolerance) -> Result<MultiplicationOperator<T>> {
    let space = fiber.space(tol)?;
    let n = fiber.dim();
    let operator = Matrix::from_fn(n, n, |r, c| if r == c { fiber.sheets[r / 2].clone() } else { T::zero() });
    let symmetry_residual = check_form_symmetric(&operator, &space)?;
    let char_poly = pfaffian_char_poly(&operator, &space, tol)?;
    Ok(MultiplicationOperator { operator, symmetry_residual, char_poly })
}

/// Lift of `x ↦ −x` to the fiber: `τ_y: E_y → E_{−y}` for every pair.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivariantLift<T> {
    sign: i8,
    forward: Vec<Matrix<T>>,
    backward: Vec<Matrix<T>>,
}

impl<T: Scalar> EquivariantLift<T> {
    /// `τ_{−y} = τ_y⁻¹`, which makes the lift an involution.
    pub fn new(sign: i8, forward: Vec<Matrix<T>>) -> Result<Self> {
        let backward = forward
            .iter()
            .map(|t| t.inverse().map_err(|_| Error::BadLift("singular map".into())))
            .collect::<Result<Vec<_>>>()?;
        Self::with_backward(sign, forward, backward)
    }

    /// Both directions supplied explicitly; the involution property is
    /// checked by [`equivariant_split`].
    pub fn with_backward(sign: i8, forward: Vec<Matrix<T>>, backward: Vec<Matrix<T>>) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::BadLift(format!("sign {sign} is not ±1")));
        }
        if forward.len() != backward.len() {
            return Err(Error::DimensionMismatch { expected: forward.len(), found: backward.len() });
        }
        if forward.iter().chain(&backward).any(|t| t.rows() != 2 || t.cols() != 2) {
            return Err(Error::BadLift("maps must be 2×2".into()));
        }
        Ok(EquivariantLift { sign, forward, backward })
    }

    /// `τ = I` on every pair (`ε = +1`).
    pub fn identity(pairs: usize) -> Self {
        Self::new(1, vec![Matrix::identity(2); pairs]).expect("identity is invertible")
    }

    /// `τ = diag(1, −1)` on every pair (`ε = −1`).
    pub fn reflection(pairs: usize) -> Self {
        let t = Matrix::diagonal(&[T::one(), -T::one()]);
        Self::new(-1, vec![t; pairs]).expect("reflection is invertible")
    }

    /// Random maps normalised so that `det τ_y · c_{−y} / c_y = ε`.
    pub fn random<R: Rng + ?Sized>(sign: i8, fiber: &FiberModel<T>, rng: &mut R) -> Result<Self> {
        let target = T::from_i64(sign as i64);
        let mut forward = Vec::with_capacity(fiber.pair_count());
        for i in 0..fiber.pair_count() {
            let ratio = fiber.volumes[2 * i].clone() / fiber.volumes[2 * i + 1].clone();
            let mut t = Matrix::<T>::random(2, 2, rng);
            while t.det()?.modulus() < 1e-3 {
                t = Matrix::random(2, 2, rng);
            }
            let factor = target.clone() * ratio / t.det()?;
            let scaled =
                Matrix::from_fn(
                    2,
                    2,
                    |r, c| if c == 0 { t[(r, c)].clone() * factor.clone() } else { t[(r, c)].clone() },
                );
            forward.push(scaled);
        }
        Self::new(sign, forward)
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn forward(&self) -> &[Matrix<T>] {
        &self.forward
    }

    pub fn backward(&self) -> &[Matrix<T>] {
        &self.backward
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitVerdict {
    /// `V₊`, `V₋` Lagrangian and paired nondegenerately: `V = W ⊕ W*`.
    DoubleLagrangian,
    /// `V₊ ⊥ V₋`, each nondegenerate: `V = W₁ ⊥ W₂`.
    OrthogonalSum,
    Neither,
}

impl SplitVerdict {
    /// The verdict a lift with sign `ε` must produce.
    pub fn expected_for(sign: i8) -> Self {
        if sign > 0 {
            SplitVerdict::DoubleLagrangian
        } else {
            SplitVerdict::OrthogonalSum
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivariantSplit<T> {
    /// Columns span the `+1` eigenspace of the lifted involution.
    pub v_plus: Matrix<T>,
    pub v_minus: Matrix<T>,
    pub gram_plus: Matrix<T>,
    pub gram_minus: Matrix<T>,
    pub gram_cross: Matrix<T>,
    /// Largest entry of the intra-block grams.
    pub max_intra: f64,
    /// Largest entry of the cross-block gram.
    pub max_cross: f64,
    /// `tol.gram · max|cᵢwᵢ| · max|section entry|²`.
    pub threshold: f64,
    pub verdict: SplitVerdict,
}

/// Splits `V` into the `±1` eigenspaces of the lifted involution and
/// classifies the residue pairing on them.
pub fn equivariant_split<T: Scalar>(
    fiber: &FiberModel<T>,
    lift: &EquivariantLift<T>,
    tol: &Tolerance,
) -> Result<EquivariantSplit<T>> {
    if !fiber.even {
        return Err(Error::WrongGroup(fiber.group.to_string()));
    }
    let pairs = fiber.pair_count();
    if lift.forward.len() != pairs {
        return Err(Error::DimensionMismatch { expected: pairs, found: lift.forward.len() });
    }
    let eps = T::from_i64(lift.sign as i64);
    for i in 0..pairs {
        let (t, back) = (&lift.forward[i], &lift.backward[i]);
        let round = &(back * t) - &Matrix::identity(2);
        let r = round.max_abs() / (t.max_abs() * back.max_abs()).max(1.0);
        if !within::<T>(r, tol.residual) {
            return Err(Error::BadLift(format!("τ₋τ ≠ I on pair {i} (residual {r:.3e})")));
        }
        // Determinant measured in the volume forms of E_y and E_{−y}.
        let vol_det = t.det()? * fiber.volumes[2 * i + 1].clone() / fiber.volumes[2 * i].clone();
        let r = (vol_det.clone() - eps.clone()).modulus();
        if !within::<T>(r, tol.residual) {
            return Err(Error::BadLift(format!(
                "determinant {:.6} on pair {i} does not match sign {}",
                vol_det.to_c64(),
                lift.sign
            )));
        }
    }
    let n = fiber.dim();
    let half = 2 * pairs;
    // Columns (e_j at y, ±τ e_j at −y) for each pair and j = 1, 2.
    let build = |sign: T| {
        let mut b = Matrix::<T>::zeros(n, half);
        for i in 0..pairs {
            for j in 0..2 {
                let col = 2 * i + j;
                b[(4 * i + j, col)] = T::one();
                for r in 0..2 {
                    b[(4 * i + 2 + r, col)] = sign.clone() * lift.forward[i][(r, j)].clone();
                }
            }
        }
        b
    };
    let v_plus = build(T::one());
    let v_minus = build(-T::one());
    let g = fiber.gram();
    let gram_plus = &(&v_plus.transpose() * &g) * &v_plus;
    let gram_minus = &(&v_minus.transpose() * &g) * &v_minus;
    let gram_cross = &(&v_plus.transpose() * &g) * &v_minus;
    let weight_scale =
        fiber.volumes.iter().zip(&fiber.weights).map(|(c, w)| (c.clone() * w.clone()).modulus()).fold(0.0, f64::max);
    let section_scale = v_plus.max_abs().max(1.0);
    let threshold = tol.gram * weight_scale * section_scale * section_scale;
    let max_intra = gram_plus.max_abs().max(gram_minus.max_abs());
    let max_cross = gram_cross.max_abs();
    let vanishes = |x: f64| if T::EXACT { x == 0.0 } else { x <= threshold };
    let verdict = if vanishes(max_intra) && nondegenerate(&gram_cross)? {
        SplitVerdict::DoubleLagrangian
    } else if vanishes(max_cross) && nondegenerate(&gram_plus)? && nondegenerate(&gram_minus)? {
        SplitVerdict::OrthogonalSum
    } else {
        SplitVerdict::Neither
    };
    Ok(EquivariantSplit {
        v_plus,
        v_minus,
        gram_plus,
        gram_minus,
        gram_cross,
        max_intra,
        max_cross,
        threshold,
        verdict,
    })
}

/// Exact: nonzero determinant. Floating: smallest singular value above
/// `1e-9` times the largest.
fn nondegenerate<T: Scalar>(g: &Matrix<T>) -> Result<bool> {
    if g.rows() == 0 {
        return Ok(true);
    }
    if T::EXACT {
        return Ok(!g.det()?.is_zero());
    }
    let (_, sigma) = numeric::smallest_singular_subspace(&g.to_c64(), 1)?;
    let max = sigma.first().copied().unwrap_or(0.0);
    let min = sigma.last().copied().unwrap_or(0.0);
    Ok(max > 0.0 && min > 1e-9 * max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::random_curve;
    use crate::scalar::Exact;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: Tolerance = Tolerance::DEFAULT;

    fn q(n: i64, d: i64) -> Exact {
        Exact::from_ratio(n, d)
    }

    fn cover() -> PlaneCurve<Exact> {
        // x² − z as an even curve with m = 1.
        PlaneCurve::from_coefficients(Group::SoStar, 1, vec![Poly::from_i64(&[0, -1])], 1.5).unwrap()
    }

    fn quartic() -> PlaneCurve<Exact> {
        PlaneCurve::from_coefficients(Group::SpMm, 2, vec![Poly::from_i64(&[-5]), Poly::from_i64(&[4])], 1.5).unwrap()
    }

    fn exact_fiber(curve: &PlaneCurve<Exact>, z0: i64, sheets: &[i64]) -> FiberModel<Exact> {
        FiberModel::from_sheets(curve, &Exact::from_i64(z0), sheets.iter().map(|&y| Exact::from_i64(y)).collect(), &TOL)
            .unwrap()
    }

    #[test]
    fn weights_of_double_cover() {
        let fiber = exact_fiber(&cover(), 1, &[-1, 1]);
        assert_eq!(fiber.sheets(), &[Exact::from_i64(1), Exact::from_i64(-1)]);
        assert_eq!(fiber.weights(), &[q(1, 2), q(-1, 2)]);
        let float = assemble_fiber(&cover(), Complex64::new(1.0, 0.0), &TOL).unwrap();
        assert!((float.weights()[0] - 0.5).norm() < 1e-15 && (float.weights()[1] + 0.5).norm() < 1e-15);
        assert_eq!(assemble_fiber(&cover(), Complex64::new(0.0, 0.0), &TOL), Err(Error::NonRegularPoint));
    }

    #[test]
    fn weights_of_quartic() {
        let fiber = exact_fiber(&quartic(), 0, &[2, -1, -2, 1]);
        assert_eq!(fiber.sheets(), &[1, -1, 2, -2].map(Exact::from_i64));
        assert_eq!(fiber.weights(), &[q(-1, 6), q(1, 6), q(1, 12), q(-1, 12)]);
        // Odd weights on σ-pairs.
        for i in 0..2 {
            assert_eq!(fiber.weights()[2 * i].clone(), -fiber.weights()[2 * i + 1].clone());
        }
    }

    #[test]
    fn from_sheets_rejects_non_roots() {
        let bad = FiberModel::from_sheets(&cover(), &Exact::one(), vec![Exact::one(), Exact::from_i64(2)], &TOL);
        assert_eq!(bad, Err(Error::NonRegularPoint));
        let short = FiberModel::from_sheets(&cover(), &Exact::one(), vec![Exact::one()], &TOL);
        assert!(matches!(short, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn pairing_examples() {
        let fiber = exact_fiber(&cover(), 1, &[1, -1]);
        let one = Exact::one;
        let zero = Exact::zero;
        let s = fiber.section_from_fn(|_, _| [one(), zero()]);
        let t = fiber.section_from_fn(|_, _| [zero(), one()]);
        assert_eq!(fiber.residue_pairing(&s, &s).unwrap(), zero());
        assert_eq!(fiber.residue_pairing(&s, &t).unwrap(), zero());
        let a = fiber.delta_section(0, [one(), zero()]);
        let b = fiber.delta_section(1, [zero(), one()]);
        assert_eq!(fiber.residue_pairing(&a, &b).unwrap(), zero());
        let c = fiber.delta_section(0, [zero(), one()]);
        assert_eq!(fiber.residue_pairing(&a, &c).unwrap(), q(1, 2));
        assert!(matches!(fiber.residue_pairing(&a, &vec![[one(), one()]]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn pairing_is_skew_and_bilinear_exactly() {
        let fiber = exact_fiber(&quartic(), 3, &[1, -1, 2, -2]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let s = fiber.section_from_fn(|_, _| [Exact::random(&mut rng), Exact::random(&mut rng)]);
            let t = fiber.section_from_fn(|_, _| [Exact::random(&mut rng), Exact::random(&mut rng)]);
            let u = fiber.section_from_fn(|_, _| [Exact::random(&mut rng), Exact::random(&mut rng)]);
            let st = fiber.residue_pairing(&s, &t).unwrap();
            assert_eq!(st.clone(), -fiber.residue_pairing(&t, &s).unwrap());
            let a = Exact::random(&mut rng);
            let combo: Section<Exact> = t
                .iter()
                .zip(&u)
                .map(|([t0, t1], [u0, u1])| [a.clone() * t0.clone() + u0.clone(), a.clone() * t1.clone() + u1.clone()])
                .collect();
            assert_eq!(fiber.residue_pairing(&s, &combo).unwrap(), a * st + fiber.residue_pairing(&s, &u).unwrap());
            // The gram matrix reproduces the pairing.
            let (vs, vt) = (fiber.to_vector(&s), fiber.to_vector(&t));
            let via_gram =
                vs.iter().zip(fiber.gram().mul_vec(&vt)).fold(Exact::zero(), |acc, (x, y)| acc + x.clone() * y);
            assert_eq!(via_gram, fiber.residue_pairing(&s, &t).unwrap());
        }
    }

    #[test]
    fn multiplication_operator_examples() {
        let fiber = exact_fiber(&cover(), 1, &[1, -1]);
        let op = multiplication_operator(&fiber, &TOL).unwrap();
        assert_eq!(op.operator, Matrix::diagonal(&[1, 1, -1, -1].map(Exact::from_i64)));
        assert_eq!(op.symmetry_residual, 0.0);
        assert_eq!(op.char_poly, Poly::from_i64(&[-1, 0, 1]));

        let fiber = exact_fiber(&quartic(), 0, &[1, -1, 2, -2]);
        let op = multiplication_operator(&fiber, &TOL).unwrap();
        assert_eq!(op.char_poly, Poly::from_i64(&[4, 0, -5, 0, 1]));
        assert_eq!(op.roundtrip_residual(&fiber), 0.0);
    }

    #[test]
    fn multiplication_operator_roundtrip_on_random_curves() {
        for group in Group::ALL {
            for seed in 0..10 {
                let curve = random_curve::<Float>(group, 2, 4, 1.5, seed);
                let fiber = assemble_fiber(&curve, Complex64::new(0.3, -0.4), &TOL).unwrap();
                let op = multiplication_operator(&fiber, &TOL).unwrap();
                assert!(op.symmetry_residual <= 1e-12);
                assert!(op.roundtrip_residual(&fiber) <= 1e-8, "{group} seed {seed}");
                assert!(fiber.nondegeneracy() > 0.0);
            }
        }
    }

    #[test]
    fn split_examples_on_double_cover() {
        let fiber = exact_fiber(&cover(), 1, &[1, -1]);
        let plus = equivariant_split(&fiber, &EquivariantLift::identity(1), &TOL).unwrap();
        assert!(plus.gram_plus.is_zero() && plus.gram_minus.is_zero());
        assert!(!plus.gram_cross.det().unwrap().is_zero());
        assert_eq!(plus.verdict, SplitVerdict::DoubleLagrangian);

        let minus = equivariant_split(&fiber, &EquivariantLift::reflection(1), &TOL).unwrap();
        assert!(minus.gram_cross.is_zero());
        // Each block is ±(w₁ − w₂) J = ±J.
        assert_eq!(minus.gram_plus, Matrix::from_i64_rows(&[&[0, 1], &[-1, 0]]));
        assert_eq!(minus.gram_minus, Matrix::from_i64_rows(&[&[0, 1], &[-1, 0]]));
        assert_eq!(minus.verdict, SplitVerdict::OrthogonalSum);

        let bad = EquivariantLift::new(1, vec![Matrix::diagonal(&[Exact::one(), Exact::from_i64(2)])]).unwrap();
        assert!(matches!(equivariant_split(&fiber, &bad, &TOL), Err(Error::BadLift(_))));
        let wrong_sign = EquivariantLift::new(-1, vec![Matrix::identity(2)]).unwrap();
        assert!(matches!(equivariant_split(&fiber, &wrong_sign, &TOL), Err(Error::BadLift(_))));
        let not_involution = EquivariantLift::with_backward(
            1,
            vec![Matrix::identity(2)],
            vec![Matrix::from_i64_rows(&[&[1, 1], &[0, 1]])],
        )
        .unwrap();
        assert!(matches!(equivariant_split(&fiber, &not_involution, &TOL), Err(Error::BadLift(_))));
    }

    #[test]
    fn split_rejects_traceless_fibers() {
        let sl = PlaneCurve::<Exact>::from_coefficients(Group::SlH, 2, vec![Poly::from_i64(&[0, -1])], 1.5).unwrap();
        let fiber = exact_fiber(&sl, 1, &[1, -1]);
        assert!(matches!(equivariant_split(&fiber, &EquivariantLift::identity(1), &TOL), Err(Error::WrongGroup(_))));
    }

    #[test]
    fn random_lifts_give_the_dichotomy_exactly() {
        let fiber = exact_fiber(&quartic(), 0, &[1, -1, 2, -2]);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            for sign in [1, -1] {
                let lift = EquivariantLift::random(sign, &fiber, &mut rng).unwrap();
                let split = equivariant_split(&fiber, &lift, &TOL).unwrap();
                assert_eq!(split.verdict, SplitVerdict::expected_for(sign));
            }
        }
    }

    #[test]
    fn random_lifts_on_random_curves() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for group in [Group::SoStar, Group::SpMm] {
            for seed in 0..10 {
                let curve = random_curve::<Float>(group, 2, 4, 1.5, seed);
                let fiber = assemble_fiber(&curve, Complex64::new(-0.2, 0.7), &TOL).unwrap();
                for sign in [1, -1] {
                    let lift = EquivariantLift::random(sign, &fiber, &mut rng).unwrap();
                    let split = equivariant_split(&fiber, &lift, &TOL).unwrap();
                    assert_eq!(split.verdict, SplitVerdict::expected_for(sign), "{group} seed {seed}");
                }
            }
        }
    }

    #[test]
    fn volume_rescaling_keeps_verdicts() {
        let base = exact_fiber(&quartic(), 0, &[1, -1, 2, -2]);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let lifts: Vec<_> = [1i8, -1].iter().map(|&s| EquivariantLift::random(s, &base, &mut rng).unwrap()).collect();
        // The same lift stays admissible when each pair shares its scale.
        let shared = base.clone().with_volume_scales(vec![q(3, 1), q(3, 1), q(-2, 5), q(-2, 5)]).unwrap();
        for lift in &lifts {
            let before = equivariant_split(&base, lift, &TOL).unwrap().verdict;
            assert_eq!(equivariant_split(&shared, lift, &TOL).unwrap().verdict, before);
        }
        // Independent scales: lifts normalised against the new volumes.
        let independent = base.with_volume_scales(vec![q(3, 1), q(1, 7), q(-2, 5), q(4, 1)]).unwrap();
        for sign in [1, -1] {
            let lift = EquivariantLift::random(sign, &independent, &mut rng).unwrap();
            assert_eq!(equivariant_split(&independent, &lift, &TOL).unwrap().verdict, SplitVerdict::expected_for(sign));
        }
        // The pairing changes by the per-sheet factor.
        let s = shared.delta_section(2, [Exact::one(), Exact::zero()]);
        let t = shared.delta_section(2, [Exact::zero(), Exact::one()]);
        assert_eq!(shared.residue_pairing(&s, &t).unwrap(), q(-2, 5) * q(1, 12));
    }
}
