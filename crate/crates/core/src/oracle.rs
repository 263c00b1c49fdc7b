//! Independent reference computations used only by tests.
//!
//! Nothing here shares a code path with the production algorithms: the
//! Pfaffian is a signed sum over perfect matchings, determinants are
//! cofactor expansions, and characteristic polynomials come from the
//! Faddeev–LeVerrier trace recursion.

use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::scalar::Scalar;

/// `Σ_matchings sgn(μ) Π a_{i, μ(i)}`, recursing on the partner of the first
/// free index. Exponential; intended for `n ≤ 8`.
pub fn pfaffian_by_matchings<T: Scalar>(s: &Matrix<T>) -> T {
    fn rec<T: Scalar>(s: &Matrix<T>, free: &[usize]) -> T {
        if free.is_empty() {
            return T::one();
        }
        let first = free[0];
        let mut total = T::zero();
        for (pos, &partner) in free.iter().enumerate().skip(1) {
            let rest: Vec<usize> =
                free.iter().enumerate().filter(|&(k, _)| k != 0 && k != pos).map(|(_, &v)| v).collect();
            let term = s[(first, partner)].clone() * rec(s, &rest);
            // Moving `partner` next to `first` crosses pos-1 indices.
            total = if pos % 2 == 1 { total + term } else { total - term };
        }
        total
    }
    assert!(s.is_square() && s.rows().is_multiple_of(2));
    let idx: Vec<usize> = (0..s.rows()).collect();
    rec(s, &idx)
}

/// Laplace expansion along the first row.
pub fn det_by_cofactors<T: Scalar>(a: &Matrix<T>) -> T {
    fn rec<T: Scalar>(a: &Matrix<T>, rows: &[usize], cols: &[usize]) -> T {
        if rows.is_empty() {
            return T::one();
        }
        let r = rows[0];
        let mut total = T::zero();
        for (k, &c) in cols.iter().enumerate() {
            if a[(r, c)].is_zero() {
                continue;
            }
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = a[(r, c)].clone() * rec(a, &rows[1..], &sub_cols);
            total = if k % 2 == 0 { total + term } else { total - term };
        }
        total
    }
    assert!(a.is_square());
    let idx: Vec<usize> = (0..a.rows()).collect();
    rec(a, &idx, &idx)
}

/// `det(xI − A)` via Faddeev–LeVerrier.
pub fn char_poly<T: Scalar>(a: &Matrix<T>) -> Poly<T> {
    let n = a.rows();
    let mut coeffs = vec![T::zero(); n + 1];
    coeffs[n] = T::one();
    let mut m = Matrix::zeros(n, n);
    for k in 1..=n {
        m = &(a * &m) + &Matrix::scalar(n, coeffs[n - k + 1].clone());
        let am = a * &m;
        coeffs[n - k] = -am.trace() / T::from_i64(k as i64);
    }
    Poly::new(coeffs)
}
