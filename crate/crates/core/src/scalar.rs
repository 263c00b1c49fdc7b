//! Scalar backends.
//!
//! Two fields are supported: exact Gaussian rationals (`Complex<BigRational>`)
//! and machine-precision complex numbers (`Complex64`). Every structured
//! algorithm in this crate is generic over [`Scalar`], so the same code path
//! produces exact identities in the rational backend and residual-bounded
//! identities in the floating one.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;

/// Exact scalar: a complex number with arbitrary-precision rational parts.
pub type Exact = Complex<BigRational>;

/// Floating scalar.
pub type Float = Complex64;

/// Which arithmetic a computation runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Floating,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Backend::Exact => f.write_str("exact"),
            Backend::Floating => f.write_str("floating"),
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Backend::Exact),
            "floating" | "float" => Ok(Backend::Floating),
            other => Err(format!("unknown backend `{other}`")),
        }
    }
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` when arithmetic is closed with no rounding.
    const EXACT: bool;
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// The real rational `num / den`. Panics on `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Nearest representable value. Lossy for the exact backend only in the
    /// sense that the binary expansion of the float is taken literally.
    fn from_c64(z: Complex64) -> Self;
    fn to_c64(&self) -> Complex64;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;

    /// Random entry for seeded instance generation: real and imaginary parts
    /// uniform in `[-1, 1]` (floating) or `n/d` with `n in [-9, 9]`,
    /// `d in 1..=4` (exact).
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }

    fn imag_unit() -> Self;

    /// Determinant of a square matrix. The exact backend overrides this with
    /// fraction-free elimination over the Gaussian integers.
    fn determinant(a: &Matrix<Self>) -> Self {
        a.det_by_elimination()
    }

    /// Pfaffian of a skew matrix, symmetry not checked. The exact backend
    /// overrides this with a fraction-free variant.
    fn pfaffian(s: &Matrix<Self>) -> Self {
        crate::linalg::pfaffian_by_elimination(s)
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Ratios of huge integers: scale both sides down first.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

impl Scalar for Exact {
    const EXACT: bool = true;
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }

    fn one() -> Self {
        Self::from_i64(1)
    }

    fn from_i64(v: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(BigRational::new(BigInt::from(num), BigInt::from(den)), BigRational::zero())
    }

    fn from_c64(z: Complex64) -> Self {
        let part = |x: f64| BigRational::from_float(x).expect("finite float");
        Complex::new(part(z.re), part(z.im))
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut part = || {
            let n: i64 = rng.random_range(-9..=9);
            let d: i64 = rng.random_range(1..=4);
            BigRational::new(BigInt::from(n), BigInt::from(d))
        };
        let re = part();
        let im = part();
        Complex::new(re, im)
    }

    fn imag_unit() -> Self {
        Complex::new(BigRational::zero(), BigRational::from_integer(BigInt::from(1)))
    }

    fn determinant(a: &Matrix<Self>) -> Self {
        gaussian_integer_det(a)
    }

    fn pfaffian(s: &Matrix<Self>) -> Self {
        gaussian_integer_pfaffian(s)
    }
}

type GaussianInt = Complex<BigInt>;

/// `(L·a, L)` with `L` the least common denominator of the entries of `a`.
fn clear_denominators(a: &Matrix<Exact>) -> (Vec<Vec<GaussianInt>>, BigInt) {
    let (rows, cols) = (a.rows(), a.cols());
    let mut l = BigInt::from(1);
    for i in 0..rows {
        for j in 0..cols {
            l = l.lcm(a[(i, j)].re.denom()).lcm(a[(i, j)].im.denom());
        }
    }
    let scaled = |r: &BigRational| r.numer() * (&l / r.denom());
    let m = (0..rows)
        .map(|i| (0..cols).map(|j| Complex::new(scaled(&a[(i, j)].re), scaled(&a[(i, j)].im))).collect())
        .collect();
    (m, l)
}

fn from_gaussian(v: GaussianInt, denom: BigInt) -> Exact {
    Complex::new(BigRational::new(v.re, denom.clone()), BigRational::new(v.im, denom))
}

/// Bareiss elimination on `L·a`, where `L` clears every denominator, so
/// all intermediate values are Gaussian integers and every division is
/// exact. Avoids the gcd work of rational elimination.
fn gaussian_integer_det(a: &Matrix<Exact>) -> Exact {
    let n = a.rows();
    let (mut m, l) = clear_denominators(a);
    let mut negate = false;
    let mut prev = GaussianInt::new(BigInt::from(1), BigInt::zero());
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return <Exact as Scalar>::zero();
        };
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            for j in (k + 1)..n {
                let v = &row[j] * &pivot_row[k] - &row[k] * &pivot_row[j];
                row[j] = exact_gaussian_div(v, &prev);
            }
        }
        prev = m[k][k].clone();
    }
    let det = if negate { -prev } else { prev };
    from_gaussian(det, num_traits::pow(l, n))
}

/// Pfaffian analogue of Bareiss elimination on `L·s`. Eliminating the pair
/// `(k, k+1)` replaces each trailing entry by the 4×4 Pfaffian
/// `Pf(s[k, k+1, i, j])` divided by the previous pivot; the division is
/// exact by the Pfaffian form of Sylvester's identity, and the last pivot
/// is the Pfaffian.
fn gaussian_integer_pfaffian(s: &Matrix<Exact>) -> Exact {
    let n = s.rows();
    if n % 2 == 1 {
        return <Exact as Scalar>::zero();
    }
    let (mut a, l) = clear_denominators(s);
    let mut negate = false;
    let mut prev = GaussianInt::new(BigInt::from(1), BigInt::zero());
    let mut k = 0;
    while k + 1 < n {
        let Some(p) = ((k + 1)..n).find(|&i| !a[i][k].is_zero()) else {
            return <Exact as Scalar>::zero();
        };
        if p != k + 1 {
            a.swap(k + 1, p);
            for row in a.iter_mut() {
                row.swap(k + 1, p);
            }
            negate = !negate;
        }
        let pivot = a[k][k + 1].clone();
        for i in (k + 2)..n {
            for j in (i + 1)..n {
                let v = &pivot * &a[i][j] - &a[k][i] * &a[k + 1][j] + &a[k][j] * &a[k + 1][i];
                let v = exact_gaussian_div(v, &prev);
                a[j][i] = -v.clone();
                a[i][j] = v;
            }
        }
        prev = pivot;
        k += 2;
    }
    let pf = if negate { -prev } else { prev };
    from_gaussian(pf, num_traits::pow(l, n / 2))
}

fn exact_gaussian_div(v: Complex<BigInt>, d: &Complex<BigInt>) -> Complex<BigInt> {
    let norm = &d.re * &d.re + &d.im * &d.im;
    let num = v * d.conj();
    debug_assert!((&num.re % &norm).is_zero() && (&num.im % &norm).is_zero());
    Complex::new(num.re / &norm, num.im / norm)
}

impl Scalar for Float {
    const EXACT: bool = false;
    const BACKEND: Backend = Backend::Floating;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn from_c64(z: Complex64) -> Self {
        z
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let re = rng.random_range(-1.0..=1.0);
        let im = rng.random_range(-1.0..=1.0);
        Complex64::new(re, im)
    }

    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }
}

/// Threshold test that is exact in the rational backend: there only a
/// residual of literally zero passes.
pub fn within<T: Scalar>(residual: f64, tol: f64) -> bool {
    if T::EXACT {
        residual == 0.0
    } else {
        residual <= tol
    }
}
