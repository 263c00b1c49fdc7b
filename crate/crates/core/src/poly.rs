//! Dense univariate polynomials, interpolation, and complex root finding.

use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::Result;
use crate::matrix::Matrix;
use crate::numeric;
use crate::scalar::Scalar;

/// Polynomial with coefficients in ascending order: `c[0] + c[1] x + ...`.
///
/// Trailing zeros are trimmed, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `c · x^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[T]) -> Self {
        roots.iter().fold(Self::constant(T::one()), |acc, r| &acc * &Self::new(vec![-r.clone(), T::one()]))
    }

    /// Coefficients listed from the leading term down: `[1, a_1, ..., a_m]`
    /// for a monic polynomial.
    pub fn from_descending(desc: Vec<T>) -> Self {
        let mut c = desc;
        c.reverse();
        Self::new(c)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| T::from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn descending(&self) -> Vec<T> {
        self.coeffs.iter().rev().cloned().collect()
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == T::one()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.clone() * T::from_i64(k as i64)).collect())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|v| v.clone() * c.clone()).collect())
    }

    /// `p(A)` by Horner's rule.
    pub fn eval_matrix(&self, a: &Matrix<T>) -> Matrix<T> {
        let n = a.rows();
        self.coeffs.iter().rev().fold(Matrix::zeros(n, n), |acc, c| &(&acc * a) + &Matrix::scalar(n, c.clone()))
    }

    /// Substitutes `x -> x^k`.
    pub fn inflate(&self, k: usize) -> Self {
        let mut out = vec![T::zero(); self.degree() * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * k] = c.clone();
        }
        Self::new(out)
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(Scalar::modulus).fold(0.0, f64::max)
    }

    pub fn to_c64(&self) -> Poly<Complex64> {
        Poly { coeffs: self.coeffs.iter().map(Scalar::to_c64).collect() }
    }

    /// Interpolating polynomial through `(nodes[i], values[i])` by Newton
    /// divided differences. Nodes must be distinct.
    pub fn interpolate(nodes: &[T], values: &[T]) -> Self {
        assert_eq!(nodes.len(), values.len());
        let n = nodes.len();
        let mut dd = values.to_vec();
        for level in 1..n {
            for i in (level..n).rev() {
                dd[i] = (dd[i].clone() - dd[i - 1].clone()) / (nodes[i].clone() - nodes[i - level].clone());
            }
        }
        // Horner-style expansion of the Newton form.
        let mut acc = Self::zero();
        for i in (0..n).rev() {
            acc = &(&acc * &Self::new(vec![-nodes[i].clone(), T::one()])) + &Self::constant(dd[i].clone());
        }
        acc
    }
}

/// Recovers a polynomial of degree at most `degree` from samples of `f`.
///
/// Exact backend: nodes `0, 1, ..., degree` and exact Newton interpolation.
/// Floating backend: nodes on the circle `|x| = radius` at the
/// `(degree + 1)`-th roots of unity, inverted by a discrete Fourier sum.
pub fn interpolate_samples<T: Scalar>(
    degree: usize,
    radius: f64,
    mut f: impl FnMut(&T) -> Result<T>,
) -> Result<Poly<T>> {
    let n = degree + 1;
    if T::EXACT {
        let nodes: Vec<T> = (0..n).map(|k| T::from_i64(k as i64)).collect();
        let values = nodes.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        return Ok(Poly::interpolate(&nodes, &values));
    }
    let roots: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64)).collect();
    let values = roots.iter().map(|w| f(&T::from_c64(w * radius)).map(|v| v.to_c64())).collect::<Result<Vec<_>>>()?;
    let coeffs = (0..n)
        .map(|j| {
            let s: Complex64 = values.iter().enumerate().map(|(k, v)| v * roots[(j * k) % n].conj()).sum();
            T::from_c64(s / (n as f64 * radius.powi(j as i32)))
        })
        .collect();
    Ok(Poly::new(coeffs))
}

impl Poly<Complex64> {
    /// All complex roots with multiplicity: eigenvalues of the companion
    /// matrix, each polished by three Newton steps.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let n = self.degree();
        if self.is_zero() || n == 0 {
            return Ok(Vec::new());
        }
        let lead = self.leading();
        let monic: Vec<Complex64> = self.coeffs.iter().map(|c| c / lead).collect();
        let companion = Matrix::from_fn(n, n, |i, j| {
            if j == n - 1 {
                -monic[i]
            } else if i == j + 1 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let mut roots = numeric::eigenvalues(&companion)?;
        let dp = self.derivative();
        for r in &mut roots {
            for _ in 0..3 {
                let d = dp.eval(r);
                if d.norm() == 0.0 {
                    break;
                }
                let step = *r - self.eval(r) / d;
                if !step.is_finite() || self.eval(&step).norm() > self.eval(r).norm() {
                    break;
                }
                *r = step;
            }
        }
        Ok(roots)
    }

    /// Number of zeros inside the circle `|x| = radius` by the argument
    /// principle: the winding number of `p` along the circle, sampled
    /// adaptively so that no phase increment exceeds a quarter turn.
    ///
    /// Independent of [`Poly::roots`]; returns `None` if `p` has a zero
    /// numerically on the circle.
    pub fn count_roots_in_disc(&self, radius: f64) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let at = |t: f64| self.eval(&Complex64::from_polar(radius, t));
        let scale = self.coeffs.iter().enumerate().map(|(k, c)| c.norm() * radius.powi(k as i32)).sum::<f64>();
        let mut total = 0.0;
        let base = (4 * self.degree()).max(16);
        for k in 0..base {
            let (t0, t1) = (TAU * k as f64 / base as f64, TAU * (k + 1) as f64 / base as f64);
            let mut stack = vec![(t0, t1, at(t0), at(t1), 0u32)];
            while let Some((a, b, fa, fb, depth)) = stack.pop() {
                if fa.norm() <= 1e-13 * scale || fb.norm() <= 1e-13 * scale {
                    return None;
                }
                let dphi = (fb / fa).arg();
                if dphi.abs() > std::f64::consts::FRAC_PI_4 {
                    if depth > 40 {
                        return None;
                    }
                    let mid = 0.5 * (a + b);
                    let fm = at(mid);
                    stack.push((mid, b, fm, fb, depth + 1));
                    stack.push((a, mid, fa, fm, depth + 1));
                } else {
                    total += dphi;
                }
            }
        }
        let winding = (total / TAU).round();
        (winding >= 0.0).then_some(winding as usize)
    }
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;

    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;

    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;

    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}
