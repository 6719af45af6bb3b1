//! Dense univariate polynomials with real coefficients.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Real scalar field usable for polynomial arithmetic.
///
/// Implemented for `f64` (rounded) and [`BigRational`] (exact).
pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed + FromPrimitive {
    /// Whether `value` should be treated as zero relative to `scale`.
    fn negligible(value: &Self, scale: &Self) -> bool;

    fn to_f64_lossy(&self) -> f64;

    fn from_usize_exact(n: usize) -> Self {
        Self::from_usize(n).expect("usize fits every scalar")
    }
}

impl Scalar for f64 {
    fn negligible(value: &f64, scale: &f64) -> bool {
        value.abs() <= 1e-11 * scale.abs().max(1e-300)
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl Scalar for BigRational {
    fn negligible(value: &BigRational, _scale: &BigRational) -> bool {
        value.is_zero()
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Exact rational conversion of a finite float.
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or(Error::NonFinite("coefficient"))
}

/// Rational number `num / den`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Polynomial stored as ascending coefficients with no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct RealPolynomial<T = f64> {
    coeffs: Vec<T>,
}

impl<T: Scalar> RealPolynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(k: usize, c: T) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// Ascending coefficients; empty for the zero polynomial.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * T::from_usize_exact(k))
            .collect();
        Self::new(coeffs)
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Quotient and remainder of Euclidean division.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if nd < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let q = rem[k + dd].clone() / lead.clone();
            if !q.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].clone() - q.clone() * d.clone();
                }
            }
            rem[k + dd] = T::zero();
            quot[k] = q;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Divides by the leading coefficient's absolute value.
    pub fn normalized(&self) -> Self {
        match self.leading() {
            Some(l) => {
                let inv = T::one() / l.abs();
                self.scale(&inv)
            }
            None => Self::zero(),
        }
    }

    pub fn to_f64(&self) -> RealPolynomial<f64> {
        RealPolynomial::new(self.coeffs.iter().map(Scalar::to_f64_lossy).collect())
    }
}

impl RealPolynomial<f64> {
    /// Value, first and second derivative at `x`.
    pub fn jet(&self, x: f64) -> (f64, f64, f64) {
        let (mut p, mut d1, mut d2) = (0.0, 0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            d2 = d2 * x + 2.0 * d1;
            d1 = d1 * x + p;
            p = p * x + c;
        }
        (p, d1, d2)
    }

    pub fn to_rational(&self) -> Result<RealPolynomial<BigRational>> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| rational_from_f64(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(RealPolynomial::new(coeffs))
    }

    /// Sum of absolute coefficient values.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }
}

impl<T: Scalar> Add for &RealPolynomial<T> {
    type Output = RealPolynomial<T>;

    fn add(self, rhs: Self) -> RealPolynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RealPolynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Sub for &RealPolynomial<T> {
    type Output = RealPolynomial<T>;

    fn sub(self, rhs: Self) -> RealPolynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RealPolynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Mul for &RealPolynomial<T> {
    type Output = RealPolynomial<T>;

    fn mul(self, rhs: Self) -> RealPolynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return RealPolynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        RealPolynomial::new(out)
    }
}

impl<T: Scalar> Neg for &RealPolynomial<T> {
    type Output = RealPolynomial<T>;

    fn neg(self) -> RealPolynomial<T> {
        RealPolynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}
