//! Exact rational helpers: polynomials over `BigRational` with the exact
//! division needed by fraction-free (Bareiss) elimination, and binomial
//! coefficients.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense univariate polynomial over the rationals, coefficient of `s^i` at
/// index `i`.  Supports the exact division required by Bareiss elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly { coeffs: vec![] }
    }

    pub fn constant(c: BigRational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            RatPoly { coeffs: vec![c] }
        }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    /// The monomial `c * s^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        RatPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        Self::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - other.coeff(i));
        }
        Self::from_coeffs(out)
    }

    pub fn neg(&self) -> Self {
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    /// Exact division; panics if the remainder is nonzero (Bareiss guarantees
    /// divisibility at every step).
    pub fn exact_div(&self, divisor: &Self) -> Self {
        assert!(!divisor.is_zero(), "exact_div by zero polynomial");
        if self.is_zero() {
            return Self::zero();
        }
        let mut rem = self.coeffs.clone();
        let d = divisor.coeffs.len();
        let lead = divisor.coeffs[d - 1].clone();
        assert!(
            rem.len() >= d,
            "exact_div: degree(dividend) < degree(divisor)"
        );
        let mut quot = vec![BigRational::zero(); rem.len() - d + 1];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + d - 1] / &lead;
            if !q.is_zero() {
                for j in 0..d {
                    let v = &divisor.coeffs[j] * &q;
                    rem[k + j] -= v;
                }
            }
            quot[k] = q;
        }
        assert!(rem.iter().all(Zero::is_zero), "exact_div left a remainder");
        Self::from_coeffs(quot)
    }

    pub fn eval(&self, s: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * s + c;
        }
        acc
    }

    pub fn eval_f64(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * s + rational_to_f64(c);
        }
        acc
    }
}

/// Determinant of a square matrix of polynomials by fraction-free Bareiss
/// elimination; every interior division is exact in `QQ[s]`.
pub fn bareiss_det(matrix: &[Vec<RatPoly>]) -> RatPoly {
    let n = matrix.len();
    if n == 0 {
        return RatPoly::constant(BigRational::one());
    }
    let mut m: Vec<Vec<RatPoly>> = matrix.to_vec();
    let mut sign = false;
    let mut prev = RatPoly::constant(BigRational::one());
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            // pivot search
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return RatPoly::zero();
            };
            m.swap(k, swap);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.exact_div(&prev);
            }
        }
        for row in m.iter_mut().skip(k + 1) {
            row[k] = RatPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

/// Binomial coefficient `C(n, k)` in exact integers.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

pub fn big_rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Conversion adequate for the magnitudes this crate feeds it (reporting and
/// test oracles); balances the two sides first so huge ratios stay finite.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    let num = r.numer();
    let den = r.denom();
    let nbits = num.bits() as i64;
    let dbits = den.bits() as i64;
    let shift = (nbits.max(dbits) - 900).max(0) as usize;
    let n2: BigInt = num >> shift;
    let d2: BigInt = den >> shift;
    bigint_to_f64(&n2) / bigint_to_f64(&d2)
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    let neg = x.is_negative();
    let mag = x.magnitude();
    let bits = mag.bits();
    let v = if bits == 0 {
        0.0
    } else if bits <= 63 {
        mag.to_u64_digits().first().copied().unwrap_or(0) as f64
    } else {
        let shift = (bits - 53) as usize;
        let top: num_bigint::BigUint = mag >> shift;
        (top.to_u64_digits().first().copied().unwrap_or(0) as f64)
            * crate::math::powi(2.0, shift as i32)
    };
    if neg {
        -v
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        big_rational(n, d)
    }

    #[test]
    fn poly_arith_roundtrip() {
        // (s^2 + 2s + 1) / (s + 1) = s + 1
        let p = RatPoly::from_coeffs(vec![r(1, 1), r(2, 1), r(1, 1)]);
        let d = RatPoly::from_coeffs(vec![r(1, 1), r(1, 1)]);
        assert_eq!(p.exact_div(&d), d);
        let q = p.mul(&d);
        assert_eq!(q.exact_div(&p), d);
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        // det [[s, 1], [2, s]] = s^2 - 2
        let m = vec![
            vec![RatPoly::monomial(r(1, 1), 1), RatPoly::constant(r(1, 1))],
            vec![RatPoly::constant(r(2, 1)), RatPoly::monomial(r(1, 1), 1)],
        ];
        let det = bareiss_det(&m);
        assert_eq!(det, RatPoly::from_coeffs(vec![r(-2, 1), r(0, 1), r(1, 1)]));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(30, 15), BigInt::from(155117520u64));
        assert_eq!(binomial(3, 5), BigInt::zero());
    }

    #[test]
    fn rational_to_f64_basic() {
        assert_eq!(rational_to_f64(&r(1, 2)), 0.5);
        assert!((rational_to_f64(&r(-7, 3)) + 7.0 / 3.0).abs() < 1e-15);
    }
}
