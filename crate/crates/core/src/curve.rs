//! Local model of a spectral curve `p(x, z) = 0` over a coordinate disc
//! `|z| ≤ R` of the base.
//!
//! The coefficients `aᵢ(z)` are polynomials in the disc coordinate. Shapes:
//!
//! * `SL(m,H)`: `p = x^m + a₂ x^{m−2} + … + a_m` (no `x^{m−1}` term);
//! * `SO(2m,H)`, `Sp(m,m)`: `p = x^{2m} + a₁ x^{2m−2} + … + a_m` (even in `x`);
//! * quotient of an even curve by `x ↦ −x`: `w^m + a₁ w^{m−1} + … + a_m`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::models::Group;
use crate::poly::{interpolate_samples, Poly};
use crate::scalar::{Float, Scalar};
use crate::spectra::min_separation;
use crate::tolerance::Tolerance;

/// Clusters of fiber roots closer than this (relative) are treated as one
/// collision when locating singular points.
const COLLISION_WINDOW: f64 = 1e-4;
/// `|∂p/∂z| ≤ SINGULAR_GRADIENT · scale` at a collision marks a singular point.
const SINGULAR_GRADIENT: f64 = 1e-6;
/// Discriminant samples below this fraction of the Hadamard bound count as zero.
const NON_REDUCED_RATIO: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveShape {
    Traceless,
    Even,
    Quotient,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlaneCurve<T> {
    group: Group,
    m: usize,
    radius: f64,
    shape: CurveShape,
    /// `a₂..a_m` (traceless) or `a₁..a_m` (even, quotient).
    coefficients: Vec<Poly<T>>,
    /// Coefficient of `x^k` at index `k`.
    x_coeffs: Vec<Poly<T>>,
    dense: Vec<Poly<Complex64>>,
    dense_dz: Vec<Poly<Complex64>>,
}

/// Builds `p(x, z)` from the list of coefficient polynomials.
pub fn curve_from_coefficients<T: Scalar>(
    group: Group,
    m: usize,
    coefficients: Vec<Poly<T>>,
    radius: f64,
) -> Result<PlaneCurve<T>> {
    PlaneCurve::from_coefficients(group, m, coefficients, radius)
}

impl<T: Scalar> PlaneCurve<T> {
    pub fn from_coefficients(group: Group, m: usize, coefficients: Vec<Poly<T>>, radius: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::BadDegreePattern("m must be at least 1".into()));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::BadDegreePattern(format!("disc radius {radius} must be positive")));
        }
        let shape = if group.has_involution() { CurveShape::Even } else { CurveShape::Traceless };
        let expected = match shape {
            CurveShape::Traceless => m - 1,
            _ => m,
        };
        if coefficients.len() != expected {
            return Err(Error::BadDegreePattern(format!(
                "{group} with m = {m} takes {expected} coefficient polynomials, got {}",
                coefficients.len()
            )));
        }
        let n = match shape {
            CurveShape::Traceless => m,
            _ => 2 * m,
        };
        let mut x_coeffs = vec![Poly::zero(); n + 1];
        x_coeffs[n] = Poly::constant(T::one());
        for (idx, a) in coefficients.iter().enumerate() {
            let power = match shape {
                // aᵢ multiplies x^{m−i}, i = idx + 2.
                CurveShape::Traceless => m - (idx + 2),
                _ => 2 * m - 2 * (idx + 1),
            };
            x_coeffs[power] = a.clone();
        }
        Ok(Self::assemble(group, m, radius, shape, coefficients, x_coeffs))
    }

    /// Builds a curve from all `x`-coefficients (index `k` multiplies
    /// `x^k`), rejecting terms the group's shape forbids.
    pub fn from_dense(group: Group, m: usize, x_coeffs: Vec<Poly<T>>, radius: f64) -> Result<Self> {
        let n = if group.has_involution() { 2 * m } else { m };
        if m == 0 || x_coeffs.len() != n + 1 {
            return Err(Error::BadDegreePattern(format!(
                "{group} with m = {m} has x-degree {n}, got {} coefficients",
                x_coeffs.len()
            )));
        }
        if x_coeffs[n] != Poly::constant(T::one()) {
            return Err(Error::BadDegreePattern("leading x-coefficient must be 1".into()));
        }
        let coefficients = if group.has_involution() {
            if let Some(k) = (1..n).step_by(2).find(|&k| !x_coeffs[k].is_zero()) {
                return Err(Error::BadDegreePattern(format!("odd power x^{k} in an even curve")));
            }
            (1..=m).map(|i| x_coeffs[2 * m - 2 * i].clone()).collect()
        } else {
            if m >= 2 && !x_coeffs[m - 1].is_zero() {
                return Err(Error::BadDegreePattern(format!("x^{} term in a traceless curve", m - 1)));
            }
            (2..=m).map(|i| x_coeffs[m - i].clone()).collect()
        };
        Self::from_coefficients(group, m, coefficients, radius)
    }

    fn assemble(
        group: Group,
        m: usize,
        radius: f64,
        shape: CurveShape,
        coefficients: Vec<Poly<T>>,
        x_coeffs: Vec<Poly<T>>,
    ) -> Self {
        let dense: Vec<Poly<Complex64>> = x_coeffs.iter().map(Poly::to_c64).collect();
        let dense_dz = dense.iter().map(Poly::derivative).collect();
        PlaneCurve { group, m, radius, shape, coefficients, x_coeffs, dense, dense_dz }
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn shape(&self) -> CurveShape {
        self.shape
    }

    pub fn coefficients(&self) -> &[Poly<T>] {
        &self.coefficients
    }

    pub fn x_coeffs(&self) -> &[Poly<T>] {
        &self.x_coeffs
    }

    /// Degree of `p` in `x`.
    pub fn x_degree(&self) -> usize {
        self.x_coeffs.len() - 1
    }

    /// Largest degree in `z` among the coefficients.
    pub fn z_degree(&self) -> usize {
        self.x_coeffs.iter().filter(|c| !c.is_zero()).map(Poly::degree).max().unwrap_or(0)
    }

    /// The last coefficient `a_m`, whose zeros are the images of fixed
    /// points of `x ↦ −x` on an even curve.
    pub fn last_coefficient(&self) -> Poly<T> {
        self.coefficients.last().cloned().unwrap_or_else(Poly::zero)
    }

    /// `p(·, z)` as a polynomial in `x`.
    pub fn fiber_poly(&self, z: &T) -> Poly<T> {
        Poly::new(self.x_coeffs.iter().map(|c| c.eval(z)).collect())
    }

    /// `p(·, z)` with floating coefficients.
    pub fn fiber_poly_at(&self, z: Complex64) -> Poly<Complex64> {
        Poly::new(self.dense.iter().map(|c| c.eval(&z)).collect())
    }

    pub fn eval(&self, x: Complex64, z: Complex64) -> Complex64 {
        horner(self.dense.iter().map(|c| c.eval(&z)), x)
    }

    pub fn dp_dx(&self, x: Complex64, z: Complex64) -> Complex64 {
        horner(self.dense.iter().enumerate().skip(1).map(|(k, c)| c.eval(&z) * k as f64), x)
    }

    pub fn dp_dz(&self, x: Complex64, z: Complex64) -> Complex64 {
        horner(self.dense_dz.iter().map(|c| c.eval(&z)), x)
    }

    fn d2p_dx2(&self, x: Complex64, z: Complex64) -> Complex64 {
        horner(self.dense.iter().enumerate().skip(2).map(|(k, c)| c.eval(&z) * (k * (k - 1)) as f64), x)
    }

    fn d2p_dxdz(&self, x: Complex64, z: Complex64) -> Complex64 {
        horner(self.dense_dz.iter().enumerate().skip(1).map(|(k, c)| c.eval(&z) * k as f64), x)
    }

    /// `Σ |c_{kj}| |z|^j |x|^k`: the size of the individual terms of `p`.
    fn term_scale(&self, x: Complex64, z: Complex64) -> f64 {
        self.dense
            .iter()
            .enumerate()
            .map(|(k, c)| {
                c.coeffs().iter().enumerate().map(|(j, a)| a.norm() * z.norm().powi(j as i32)).sum::<f64>()
                    * x.norm().powi(k as i32)
            })
            .sum()
    }

    /// `Res_x(p, ∂p/∂x)` as a polynomial in `z`.
    ///
    /// Sylvester determinants evaluated at interpolation nodes: exact
    /// integer nodes in the exact backend, points on the circle `|z| = R`
    /// in the floating backend.
    pub fn discriminant(&self) -> Result<Discriminant<T>> {
        let n = self.x_degree();
        let bound = (2 * n).saturating_sub(1) * self.z_degree();
        let mut worst_ratio: f64 = 0.0;
        let poly = interpolate_samples(bound, self.radius, |z: &T| {
            let f = self.fiber_poly(z);
            let s = sylvester(&f, &f.derivative(), n);
            let det = s.det()?;
            let hadamard: f64 =
                (0..s.rows()).map(|i| s.row(i).iter().map(|v| v.modulus().powi(2)).sum::<f64>().sqrt()).product();
            worst_ratio = worst_ratio.max(det.modulus() / hadamard.max(f64::MIN_POSITIVE));
            Ok(det)
        })?;
        let non_reduced = if T::EXACT { poly.is_zero() } else { worst_ratio <= NON_REDUCED_RATIO };
        Ok(Discriminant { poly, non_reduced })
    }

    /// Newton refinement of a point of `{p = 0, ∂p/∂x = 0}` near `z`.
    fn locate_collision(&self, z: Complex64) -> (Complex64, Complex64, bool) {
        let roots = self.fiber_poly_at(z).roots().unwrap_or_default();
        let Some(mut x) =
            roots.iter().copied().min_by(|a, b| self.dp_dx(*a, z).norm().total_cmp(&self.dp_dx(*b, z).norm()))
        else {
            return (Complex64::new(0.0, 0.0), z, false);
        };
        let mut z = z;
        for _ in 0..40 {
            let f = self.eval(x, z);
            let g = self.dp_dx(x, z);
            let (a, b) = (g, self.dp_dz(x, z));
            let (c, d) = (self.d2p_dx2(x, z), self.d2p_dxdz(x, z));
            let det = a * d - b * c;
            if det.norm() <= 1e-14 * (1.0 + self.term_scale(x, z)).powi(2) {
                return (x, z, false);
            }
            let dx = (d * f - b * g) / det;
            let dz = (a * g - c * f) / det;
            if !(dx.is_finite() && dz.is_finite()) {
                return (x, z, false);
            }
            x -= dx;
            z -= dz;
            if dx.norm() + dz.norm() <= 1e-15 * (1.0 + x.norm() + z.norm()) {
                return (x, z, true);
            }
        }
        (x, z, true)
    }

    /// Root clusters of `p(·, z)` of size at least two, with a relative
    /// window `window · (1 + max|x|)`.
    fn collisions_at(&self, z: Complex64, window: f64) -> Result<Vec<(Complex64, usize)>> {
        let roots = self.fiber_poly_at(z).roots()?;
        let scale = 1.0 + roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
        Ok(cluster(&roots, window * scale).into_iter().filter(|&(_, k)| k >= 2).collect())
    }

    /// Branch points in the disc: zeros of the discriminant, refined on
    /// `{p = ∂p/∂x = 0}` and grouped with multiplicity.
    pub fn branch_points(&self, tol: &Tolerance) -> Result<Vec<BranchPoint>> {
        let disc = self.discriminant()?;
        if disc.non_reduced {
            return Err(Error::NonReduced);
        }
        self.branch_points_from(&disc.poly, tol)
    }

    fn branch_points_from(&self, disc: &Poly<T>, tol: &Tolerance) -> Result<Vec<BranchPoint>> {
        let loose = roots_in_disc(&disc.to_c64(), self.radius * 1.05 + 1e-6)?;
        let refined: Vec<(Complex64, Complex64)> = loose
            .into_iter()
            .map(|z| {
                let (x, z, _) = self.locate_collision(z);
                (x, z)
            })
            .filter(|(_, z)| z.norm() <= self.radius + tol.disc_margin)
            .collect();
        let mut out: Vec<BranchPoint> = Vec::new();
        for (x, z) in refined {
            match out.iter_mut().find(|b| (b.z - z).norm() <= 1e-6 * (1.0 + z.norm())) {
                Some(b) => b.multiplicity += 1,
                None => out.push(BranchPoint { z, x, multiplicity: 1 }),
            }
        }
        out.sort_by(|a, b| a.z.re.total_cmp(&b.z.re).then(a.z.im.total_cmp(&b.z.im)));
        Ok(out)
    }

    /// Smooth on the disc unless some branch point has `∂p/∂z = 0` at a
    /// root collision, or the curve is non-reduced.
    pub fn smoothness_check(&self, tol: &Tolerance) -> Result<Smoothness> {
        let disc = self.discriminant()?;
        if disc.non_reduced {
            return Ok(Smoothness::Singular { points: Vec::new(), non_reduced: true });
        }
        let mut points = Vec::new();
        for b in self.branch_points_from(&disc.poly, tol)? {
            let mut centers: Vec<Complex64> =
                self.collisions_at(b.z, COLLISION_WINDOW)?.into_iter().map(|(x, _)| x).collect();
            if centers.is_empty() {
                centers.push(b.x);
            }
            for x in centers {
                let scale = 1.0 + self.term_scale(x, b.z);
                if self.dp_dz(x, b.z).norm() <= SINGULAR_GRADIENT * scale {
                    points.push(SingularPoint { x, z: b.z });
                }
            }
        }
        if points.is_empty() {
            Ok(Smoothness::Smooth)
        } else {
            Ok(Smoothness::Singular { points, non_reduced: false })
        }
    }

    /// Zeros of `a_m` in the disc: the points over which `x = 0` lies on
    /// an even curve.
    pub fn sigma_fixed_points(&self, tol: &Tolerance) -> Result<Vec<Complex64>> {
        if self.shape != CurveShape::Even {
            return Err(Error::WrongGroup(format!("{} ({:?} curve)", self.group, self.shape)));
        }
        let am = self.last_coefficient().to_c64();
        if am.is_zero() {
            return Err(Error::NonReduced);
        }
        let mut roots = roots_in_disc(&am, self.radius + tol.disc_margin)?;
        roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        Ok(roots)
    }

    /// `w^m + a₁ w^{m−1} + … + a_m` with `w = x²`.
    pub fn quotient_curve(&self) -> Result<PlaneCurve<T>> {
        if self.shape != CurveShape::Even {
            return Err(Error::WrongGroup(format!("{} ({:?} curve)", self.group, self.shape)));
        }
        let m = self.m;
        let mut x_coeffs = vec![Poly::zero(); m + 1];
        x_coeffs[m] = Poly::constant(T::one());
        for (idx, a) in self.coefficients.iter().enumerate() {
            x_coeffs[m - (idx + 1)] = a.clone();
        }
        Ok(Self::assemble(self.group, m, self.radius, CurveShape::Quotient, self.coefficients.clone(), x_coeffs))
    }

    /// All roots of `p(·, z₀)` with multiplicity, `(x, −x)` pairs for even
    /// curves, and whether `z₀` is regular (no collision within
    /// `tol.cluster · (1 + max|x|)`).
    pub fn fiber_roots(&self, z0: Complex64, tol: &Tolerance) -> Result<FiberRoots> {
        let mut roots = self.fiber_poly_at(z0).roots()?;
        roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let scale = 1.0 + roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
        let regular = min_separation(&roots) > tol.cluster * scale;
        let clusters = cluster(&roots, tol.cluster * scale);
        let pairs = if self.shape == CurveShape::Even { pair_opposites(&roots) } else { Vec::new() };
        Ok(FiberRoots { roots, clusters, pairs, regular })
    }

    pub fn classify_point(&self, z0: Complex64, tol: &Tolerance) -> Result<PointKind> {
        let fiber = self.fiber_roots(z0, tol)?;
        if fiber.regular {
            return Ok(PointKind::Regular);
        }
        let on_zero_section = self.shape == CurveShape::Even
            && fiber.clusters.iter().any(|&(x, k)| k >= 2 && x.norm() <= tol.cluster.sqrt());
        Ok(if on_zero_section { PointKind::SigmaFixedImage } else { PointKind::Branch })
    }

    pub fn to_record(&self) -> CurveRecord {
        CurveRecord {
            group: self.group,
            m: self.m,
            radius: self.radius,
            coefficients: self
                .coefficients
                .iter()
                .map(|p| {
                    p.coeffs()
                        .iter()
                        .map(|c| {
                            let z = c.to_c64();
                            [z.re, z.im]
                        })
                        .collect()
                })
                .collect(),
            quotient: self.shape == CurveShape::Quotient,
        }
    }
}

impl PlaneCurve<Float> {
    pub fn from_record(record: &CurveRecord) -> Result<Self> {
        let coefficients: Vec<Poly<Float>> = record
            .coefficients
            .iter()
            .map(|c| Poly::new(c.iter().map(|&[re, im]| Complex64::new(re, im)).collect()))
            .collect();
        if record.quotient {
            let group = if record.group.has_involution() { record.group } else { Group::SoStar };
            let even = Self::from_coefficients(group, record.m, coefficients, record.radius)?;
            return even.quotient_curve();
        }
        Self::from_coefficients(record.group, record.m, coefficients, record.radius)
    }
}

/// JSON form of a curve: `{group, m, R, coefficients}` where
/// `coefficients[i]` lists `[re, im]` pairs in ascending powers of `z`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub group: Group,
    pub m: usize,
    #[serde(rename = "R")]
    pub radius: f64,
    pub coefficients: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub quotient: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Discriminant<T> {
    pub poly: Poly<T>,
    /// `Res_x(p, ∂p/∂x) ≡ 0`: `p` has a repeated factor.
    pub non_reduced: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchPoint {
    pub z: Complex64,
    /// A colliding root over `z`.
    pub x: Complex64,
    /// Multiplicity as a zero of the discriminant.
    pub multiplicity: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularPoint {
    pub x: Complex64,
    pub z: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Smoothness {
    Smooth,
    Singular { points: Vec<SingularPoint>, non_reduced: bool },
}

impl Smoothness {
    pub fn is_smooth(&self) -> bool {
        matches!(self, Smoothness::Smooth)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    Regular,
    Branch,
    SigmaFixedImage,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiberRoots {
    /// All roots with multiplicity, sorted by real then imaginary part.
    pub roots: Vec<Complex64>,
    /// Distinct roots (cluster centres) with multiplicities.
    pub clusters: Vec<(Complex64, usize)>,
    /// `(x, −x)` pairs; empty unless the curve is even.
    pub pairs: Vec<(Complex64, Complex64)>,
    pub regular: bool,
}

/// Random curve with coefficient polynomials of degree `degree` in `z`.
pub fn random_curve<T: Scalar>(group: Group, m: usize, degree: usize, radius: f64, seed: u64) -> PlaneCurve<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = if group.has_involution() { m } else { m.saturating_sub(1) };
    let coefficients = (0..count).map(|_| Poly::new((0..=degree).map(|_| T::random(&mut rng)).collect())).collect();
    PlaneCurve::from_coefficients(group, m, coefficients, radius).expect("shape by construction")
}

fn horner(coeffs: impl DoubleEndedIterator<Item = Complex64>, x: Complex64) -> Complex64 {
    coeffs.rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
}

/// Sylvester matrix of `f` (degree `n`) and `g` (degree `≤ n − 1`),
/// padded to the nominal degrees.
fn sylvester<T: Scalar>(f: &Poly<T>, g: &Poly<T>, n: usize) -> Matrix<T> {
    let size = 2 * n - 1;
    let fd: Vec<T> = (0..=n).rev().map(|k| f.coeff(k)).collect();
    let gd: Vec<T> = (0..n).rev().map(|k| g.coeff(k)).collect();
    Matrix::from_fn(size, size, |i, j| {
        if i < n - 1 {
            j.checked_sub(i).and_then(|k| fd.get(k)).cloned().unwrap_or_else(T::zero)
        } else {
            let r = i - (n - 1);
            j.checked_sub(r).and_then(|k| gd.get(k)).cloned().unwrap_or_else(T::zero)
        }
    })
}

/// Roots of `p` with `|z| ≤ limit`, computed on the rescaled polynomial
/// `p(limit · u)` so that the companion matrix is balanced on the disc.
fn roots_in_disc(p: &Poly<Complex64>, limit: f64) -> Result<Vec<Complex64>> {
    let scaled: Vec<Complex64> = p.coeffs().iter().enumerate().map(|(k, c)| c * limit.powi(k as i32)).collect();
    let top = scaled.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if top == 0.0 {
        return Ok(Vec::new());
    }
    // Leading coefficients at rounding level only carry roots far outside.
    let mut kept = scaled;
    while kept.last().is_some_and(|c| c.norm() <= 1e-13 * top) {
        kept.pop();
    }
    let roots = Poly::new(kept).roots()?;
    Ok(roots.into_iter().map(|u| u * limit).filter(|z| z.norm() <= limit).collect())
}

fn cluster(values: &[Complex64], window: f64) -> Vec<(Complex64, usize)> {
    let mut groups: Vec<(Complex64, usize)> = Vec::new();
    for &v in values {
        match groups.iter_mut().find(|(c, _)| (*c - v).norm() <= window) {
            Some((c, k)) => {
                *c = (*c * *k as f64 + v) / (*k + 1) as f64;
                *k += 1;
            }
            None => groups.push((v, 1)),
        }
    }
    groups
}

fn pair_opposites(roots: &[Complex64]) -> Vec<(Complex64, Complex64)> {
    let mut used = vec![false; roots.len()];
    let mut pairs = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let partner = (0..roots.len())
            .filter(|&j| !used[j])
            .min_by(|&a, &b| (roots[a] + roots[i]).norm().total_cmp(&(roots[b] + roots[i]).norm()));
        if let Some(j) = partner {
            used[j] = true;
            pairs.push((roots[i], roots[j]));
        }
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    const TOL: Tolerance = Tolerance::DEFAULT;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn exact_curve(group: Group, m: usize, coeffs: &[&[i64]], radius: f64) -> PlaneCurve<Exact> {
        PlaneCurve::from_coefficients(group, m, coeffs.iter().map(|c| Poly::from_i64(c)).collect(), radius).unwrap()
    }

    #[test]
    fn coefficient_placement() {
        let curve = exact_curve(Group::SlH, 2, &[&[0, -1]], 1.5);
        assert_eq!(curve.x_coeffs(), &[Poly::from_i64(&[0, -1]), Poly::zero(), Poly::from_i64(&[1])]);
        let curve = exact_curve(Group::SoStar, 1, &[&[0, 1]], 1.5);
        assert_eq!(curve.x_coeffs(), &[Poly::from_i64(&[0, 1]), Poly::zero(), Poly::from_i64(&[1])]);
        let curve = exact_curve(Group::SlH, 3, &[&[1], &[2]], 1.5);
        assert_eq!(curve.x_coeffs()[1], Poly::from_i64(&[1]));
        assert_eq!(curve.x_coeffs()[0], Poly::from_i64(&[2]));
        assert!(curve.x_coeffs()[2].is_zero());
    }

    #[test]
    fn degree_pattern_errors() {
        let bad = PlaneCurve::<Exact>::from_coefficients(Group::SlH, 2, vec![], 1.0);
        assert!(matches!(bad, Err(Error::BadDegreePattern(_))));
        let odd = vec![Poly::from_i64(&[1]), Poly::from_i64(&[1]), Poly::from_i64(&[1])];
        assert!(matches!(PlaneCurve::<Exact>::from_dense(Group::SoStar, 1, odd, 1.0), Err(Error::BadDegreePattern(_))));
        let trace = vec![Poly::from_i64(&[0]), Poly::from_i64(&[3]), Poly::from_i64(&[1])];
        assert!(matches!(PlaneCurve::<Exact>::from_dense(Group::SlH, 2, trace, 1.0), Err(Error::BadDegreePattern(_))));
        let ok = vec![Poly::from_i64(&[0, 1]), Poly::zero(), Poly::from_i64(&[1])];
        let curve = PlaneCurve::<Exact>::from_dense(Group::SoStar, 1, ok, 1.0).unwrap();
        assert_eq!(curve.coefficients(), &[Poly::from_i64(&[0, 1])]);
    }

    #[test]
    fn discriminant_of_double_covers() {
        // Res_x(x² + a, 2x) = 4a.
        let curve = exact_curve(Group::SlH, 2, &[&[-1, 0, 1]], 2.0);
        assert_eq!(curve.discriminant().unwrap().poly, Poly::from_i64(&[-4, 0, 4]));
        let curve = exact_curve(Group::SlH, 2, &[&[0, -1]], 1.5);
        assert_eq!(curve.discriminant().unwrap().poly, Poly::from_i64(&[0, -4]));
    }

    #[test]
    fn discriminant_matches_product_formula() {
        // For monic f of degree n, Res(f, f') = Π_i f'(rᵢ).
        let curve = random_curve::<Float>(Group::SpMm, 2, 3, 1.5, 4);
        let disc = curve.discriminant().unwrap().poly;
        for z in [c(0.3, -0.2), c(-1.0, 0.5), c(0.0, 1.2)] {
            let f = curve.fiber_poly(&z);
            let df = f.derivative();
            let product: Complex64 = f.roots().unwrap().iter().map(|r| df.eval(r)).product();
            let got = disc.eval(&z);
            assert!((got - product).norm() <= 1e-8 * (1.0 + product.norm()), "{got} vs {product}");
        }
    }

    #[test]
    fn smoothness_examples() {
        let smooth = exact_curve(Group::SlH, 2, &[&[0, -1]], 1.5);
        assert_eq!(smooth.smoothness_check(&TOL).unwrap(), Smoothness::Smooth);
        let double_line = exact_curve(Group::SlH, 2, &[&[0]], 1.5);
        assert_eq!(
            double_line.smoothness_check(&TOL).unwrap(),
            Smoothness::Singular { points: vec![], non_reduced: true }
        );
        let node = exact_curve(Group::SlH, 2, &[&[0, 0, -1]], 1.5);
        match node.smoothness_check(&TOL).unwrap() {
            Smoothness::Singular { points, non_reduced: false } => {
                assert!(!points.is_empty());
                for p in points {
                    assert!(p.x.norm() < 1e-9 && p.z.norm() < 1e-9);
                    // Both partials vanish there.
                    assert!(node.dp_dx(p.x, p.z).norm() < 1e-9 && node.dp_dz(p.x, p.z).norm() < 1e-9);
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn float_node_and_non_reduced() {
        let node = PlaneCurve::<Float>::from_coefficients(
            Group::SlH,
            2,
            vec![Poly::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])],
            1.5,
        )
        .unwrap();
        assert!(!node.smoothness_check(&TOL).unwrap().is_smooth());
        // (x² − z)² as an even SO curve with m = 2.
        let sq = PlaneCurve::<Float>::from_coefficients(
            Group::SoStar,
            2,
            vec![Poly::new(vec![c(0.0, 0.0), c(-2.0, 0.0)]), Poly::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])],
            1.5,
        )
        .unwrap();
        assert_eq!(sq.smoothness_check(&TOL).unwrap(), Smoothness::Singular { points: vec![], non_reduced: true });
        assert_eq!(sq.branch_points(&TOL), Err(Error::NonReduced));
    }

    #[test]
    fn branch_point_examples() {
        let curve = exact_curve(Group::SlH, 2, &[&[0, -1]], 1.5);
        let b = curve.branch_points(&TOL).unwrap();
        assert_eq!(b.len(), 1);
        assert!(b[0].z.norm() < 1e-12 && b[0].multiplicity == 1);

        let curve = exact_curve(Group::SlH, 2, &[&[1, 0, -1]], 2.0);
        let b = curve.branch_points(&TOL).unwrap();
        assert_eq!(b.len(), 2);
        assert!((b[0].z - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((b[1].z - c(1.0, 0.0)).norm() < 1e-12);

        let curve = exact_curve(Group::SlH, 2, &[&[-1]], 1.5);
        assert!(curve.branch_points(&TOL).unwrap().is_empty());

        // The only zero, z = 2, lies outside the disc.
        let curve = exact_curve(Group::SlH, 2, &[&[-2, 1]], 1.5);
        assert!(curve.branch_points(&TOL).unwrap().is_empty());
    }

    #[test]
    fn sigma_fixed_point_examples() {
        let curve = exact_curve(Group::SoStar, 1, &[&[0, 1]], 1.5);
        let pts = curve.sigma_fixed_points(&TOL).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].norm() < 1e-12);

        let curve = exact_curve(Group::SpMm, 2, &[&[3, 1], &[-1, 0, 1]], 2.0);
        let pts = curve.sigma_fixed_points(&TOL).unwrap();
        assert_eq!(pts.len(), 2);
        assert!((pts[0] + 1.0).norm() < 1e-12 && (pts[1] - 1.0).norm() < 1e-12);

        let curve = exact_curve(Group::SpMm, 1, &[&[5]], 2.0);
        assert!(curve.sigma_fixed_points(&TOL).unwrap().is_empty());

        let sl = exact_curve(Group::SlH, 2, &[&[0, 1]], 2.0);
        assert!(matches!(sl.sigma_fixed_points(&TOL), Err(Error::WrongGroup(_))));
    }

    #[test]
    fn quotient_examples() {
        let curve = exact_curve(Group::SoStar, 1, &[&[0, 1]], 1.5);
        let q = curve.quotient_curve().unwrap();
        assert_eq!(q.x_coeffs(), &[Poly::from_i64(&[0, 1]), Poly::from_i64(&[1])]);
        assert!(q.branch_points(&TOL).unwrap().is_empty());

        let curve = exact_curve(Group::SpMm, 2, &[&[1, 1], &[0, 0, 1]], 1.5);
        let q = curve.quotient_curve().unwrap();
        assert_eq!(q.x_coeffs(), &[Poly::from_i64(&[0, 0, 1]), Poly::from_i64(&[1, 1]), Poly::from_i64(&[1])]);
        assert!(matches!(q.quotient_curve(), Err(Error::WrongGroup(_))));
        // σ-fixed points of p lie on w = 0 of the quotient.
        for z in curve.sigma_fixed_points(&TOL).unwrap() {
            let fiber = q.fiber_roots(z, &TOL).unwrap();
            assert!(fiber.roots.iter().any(|w| w.norm() < 1e-6));
        }
    }

    #[test]
    fn fiber_root_examples() {
        let curve = exact_curve(Group::SlH, 2, &[&[0, -1]], 1.5);
        let f = curve.fiber_roots(c(1.0, 0.0), &TOL).unwrap();
        assert!(f.regular);
        assert!((f.roots[0] + 1.0).norm() < 1e-12 && (f.roots[1] - 1.0).norm() < 1e-12);
        let f = curve.fiber_roots(c(0.0, 0.0), &TOL).unwrap();
        assert!(!f.regular);
        assert_eq!(f.clusters.len(), 1);
        assert_eq!(f.clusters[0].1, 2);
        assert_eq!(curve.classify_point(c(0.0, 0.0), &TOL).unwrap(), PointKind::Branch);

        let curve = exact_curve(Group::SoStar, 2, &[&[-5], &[4]], 1.5);
        for z0 in [c(0.0, 0.0), c(1.0, 1.0)] {
            let f = curve.fiber_roots(z0, &TOL).unwrap();
            assert!(f.regular);
            assert_eq!(f.pairs.len(), 2);
            for (a, b) in &f.pairs {
                assert!((a + b).norm() < 1e-12);
            }
            let mut moduli: Vec<f64> = f.roots.iter().map(|r| r.norm()).collect();
            moduli.sort_by(f64::total_cmp);
            for (got, want) in moduli.iter().zip([1.0, 1.0, 2.0, 2.0]) {
                assert!((got - want).abs() < 1e-12);
            }
        }
        let curve = exact_curve(Group::SoStar, 1, &[&[0, 1]], 1.5);
        assert_eq!(curve.classify_point(c(0.0, 0.0), &TOL).unwrap(), PointKind::SigmaFixedImage);
        assert_eq!(curve.classify_point(c(0.5, 0.0), &TOL).unwrap(), PointKind::Regular);
    }

    #[test]
    fn random_curves_are_smooth_and_consistent() {
        for group in Group::ALL {
            for seed in 0..8 {
                let curve = random_curve::<Float>(group, 2, 4, 1.5, seed);
                assert!(curve.smoothness_check(&TOL).unwrap().is_smooth(), "{group} seed {seed}");
                let branch = curve.branch_points(&TOL).unwrap();
                for b in &branch {
                    assert!(!curve.fiber_roots(b.z, &TOL).unwrap().regular, "{group} seed {seed} z {}", b.z);
                }
                if group.has_involution() {
                    let fixed = curve.sigma_fixed_points(&TOL).unwrap();
                    let oracle = curve.last_coefficient().count_roots_in_disc(1.5).unwrap();
                    assert_eq!(fixed.len(), oracle);
                    for z in &fixed {
                        assert!(branch.iter().any(|b| (b.z - z).norm() < 1e-7), "{group} seed {seed}");
                    }
                    // Branch points of p are the zeros of a_m together with
                    // the branch points of the quotient.
                    let q = curve.quotient_curve().unwrap().branch_points(&TOL).unwrap();
                    for b in &branch {
                        let from_fixed = fixed.iter().any(|z| (b.z - z).norm() < 1e-7);
                        let from_quotient = q.iter().any(|w| (b.z - w.z).norm() < 1e-7);
                        assert!(from_fixed || from_quotient);
                    }
                    assert_eq!(branch.len(), fixed.len() + q.len());
                }
            }
        }
    }

    #[test]
    fn random_fibers_have_full_degree() {
        for seed in 0..10 {
            let curve = random_curve::<Float>(Group::SoStar, 3, 4, 1.5, seed);
            let f = curve.fiber_roots(c(0.2, 0.1), &TOL).unwrap();
            assert_eq!(f.roots.len(), 6);
            let mut neg: Vec<Complex64> = f.roots.iter().map(|r| -r).collect();
            neg.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
            for (a, b) in neg.iter().zip(&f.roots) {
                assert!((a - b).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn exact_and_float_discriminants_agree() {
        let exact = random_curve::<Exact>(Group::SoStar, 2, 2, 1.5, 3);
        let float = PlaneCurve::<Float>::from_record(&exact.to_record()).unwrap();
        let de = exact.discriminant().unwrap().poly.to_c64();
        let df = float.discriminant().unwrap().poly;
        let scale = de.max_abs();
        for k in 0..=de.degree() {
            assert!((de.coeff(k) - df.coeff(k)).norm() <= 1e-9 * scale, "k = {k}");
        }
    }

    #[test]
    fn record_roundtrip() {
        let curve = random_curve::<Float>(Group::SpMm, 2, 3, 1.25, 8);
        let json = serde_json::to_string(&curve.to_record()).unwrap();
        assert!(json.contains("\"R\":1.25") && json.contains("\"SP_MM\""));
        let back: CurveRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(PlaneCurve::from_record(&back).unwrap(), curve);
        let q = curve.quotient_curve().unwrap();
        assert_eq!(PlaneCurve::from_record(&q.to_record()).unwrap(), q);
    }
}
