//! Romanovski-Routh polynomials.
//!
//! The canonical polynomial of order `m` and complex index `alpha` is
//!
//! ```text
//! R_m^(alpha)(eta) = (-i)^m P_m^(alpha*, alpha)(i eta)
//! P_m^(beta, alpha)(y) = 2^-m sum_k (alpha)_k (beta)_(m-k) / (k! (m-k)!) (y-1)^k (y+1)^(m-k)
//! ```
//!
//! with rising factorials `(z)_k`. All routines are generic over [`Scalar`],
//! so the same code produces exact rational polynomials and `f64` ones.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::{Complex, Complex64};
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Zero};

use crate::oracle::quadrature::adaptive_quadrature;
use crate::poly::{RealPolynomial, Scalar};
use crate::{Error, Result};

/// Which construction produced a [`RouthPolynomial`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// Complex-index Jacobi sum evaluated on the imaginary axis.
    Canonical,
    /// Rodrigues formula with weight `(1+eta^2)^alpha_R exp(2 alpha_I atan eta)`.
    Rodrigues,
}

/// A real polynomial tagged with its order, complex index and construction.
#[derive(Clone, Debug, PartialEq)]
pub struct RouthPolynomial<T = f64> {
    order: usize,
    index: Complex<T>,
    convention: Convention,
    poly: RealPolynomial<T>,
}

impl<T: Scalar> RouthPolynomial<T> {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn index(&self) -> &Complex<T> {
        &self.index
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn poly(&self) -> &RealPolynomial<T> {
        &self.poly
    }

    pub fn into_poly(self) -> RealPolynomial<T> {
        self.poly
    }

    /// True when the degree drops below the order.
    pub fn is_degenerate(&self) -> bool {
        self.poly.degree() != Some(self.order)
    }

    pub fn to_f64(&self) -> RouthPolynomial<f64> {
        RouthPolynomial {
            order: self.order,
            index: Complex::new(self.index.re.to_f64_lossy(), self.index.im.to_f64_lossy()),
            convention: self.convention,
            poly: self.poly.to_f64(),
        }
    }
}

impl RouthPolynomial<f64> {
    pub fn eval(&self, eta: f64) -> f64 {
        self.poly.eval(&eta)
    }
}

/// Rising factorial `(x)_k`.
pub fn rising<T: Scalar>(x: &Complex<T>, k: usize) -> Complex<T> {
    (0..k).fold(Complex::one(), |acc, j| {
        acc * (x.clone() + Complex::from(T::from_usize_exact(j)))
    })
}

fn factorial<T: Scalar>(k: usize) -> T {
    (1..=k).fold(T::one(), |acc, j| acc * T::from_usize_exact(j))
}

fn l1<T: Scalar>(z: &Complex<T>) -> T {
    z.re.abs() + z.im.abs()
}

/// Weights `2^-m (alpha)_k (beta)_(m-k) / (k! (m-k)!)` of the Jacobi sum.
fn jacobi_weights<T: Scalar>(m: usize, beta: &Complex<T>, alpha: &Complex<T>) -> Vec<Complex<T>> {
    let two_m = (0..m).fold(T::one(), |acc, _| acc * T::from_usize_exact(2));
    (0..=m)
        .map(|k| {
            let den = factorial::<T>(k) * factorial::<T>(m - k) * two_m.clone();
            rising(alpha, k) * rising(beta, m - k) / Complex::from(den)
        })
        .collect()
}

/// Evaluates the complex-parameter Jacobi polynomial at a complex point.
pub fn jacobi_complex_eval<T: Scalar>(
    m: usize,
    beta: &Complex<T>,
    alpha: &Complex<T>,
    y: &Complex<T>,
) -> Complex<T> {
    let one = Complex::<T>::one();
    let ym = y.clone() - one.clone();
    let yp = y.clone() + one;
    jacobi_weights(m, beta, alpha)
        .into_iter()
        .enumerate()
        .fold(Complex::zero(), |acc, (k, w)| {
            acc + w * ym.powu(k as u32) * yp.powu((m - k) as u32)
        })
}

/// Ascending coefficients in `y` of the complex Jacobi polynomial, plus a
/// magnitude bound used to judge rounding of the imaginary parts.
fn jacobi_expand<T: Scalar>(
    m: usize,
    beta: &Complex<T>,
    alpha: &Complex<T>,
) -> (Vec<Complex<T>>, T) {
    let binom = |n: usize| -> Vec<T> {
        let mut row = vec![T::one()];
        for _ in 0..n {
            let mut next = vec![T::one(); row.len() + 1];
            for j in 1..row.len() {
                next[j] = row[j - 1].clone() + row[j].clone();
            }
            row = next;
        }
        row
    };
    let mut coeffs = vec![Complex::<T>::zero(); m + 1];
    let mut scale = T::zero();
    for (k, w) in jacobi_weights(m, beta, alpha).into_iter().enumerate() {
        scale = scale + l1(&w) * (0..m).fold(T::one(), |a, _| a * T::from_usize_exact(2));
        // (y-1)^k (y+1)^(m-k)
        let bk = binom(k);
        let bmk = binom(m - k);
        for (i, ci) in bk.iter().enumerate() {
            let sign = if (k - i) % 2 == 0 { T::one() } else { -T::one() };
            for (j, cj) in bmk.iter().enumerate() {
                let c = sign.clone() * ci.clone() * cj.clone();
                coeffs[i + j] = coeffs[i + j].clone() + w.clone() * Complex::from(c);
            }
        }
    }
    (coeffs, scale)
}

fn i_pow<T: Scalar>(k: usize) -> Complex<T> {
    match k % 4 {
        0 => Complex::new(T::one(), T::zero()),
        1 => Complex::new(T::zero(), T::one()),
        2 => Complex::new(-T::one(), T::zero()),
        _ => Complex::new(T::zero(), -T::one()),
    }
}

/// Canonical Routh polynomial `R_m^(alpha)`.
///
/// Fails with [`Error::ImaginaryResidue`] if a coefficient is not real
/// (exactly for rationals, to rounding for floats).
pub fn routh_polynomial<T: Scalar>(m: usize, alpha: Complex<T>) -> Result<RouthPolynomial<T>> {
    let beta = alpha.conj();
    let (coeffs, scale) = jacobi_expand(m, &beta, &alpha);
    // (-i)^m (i eta)^j = i^(j + 3m) eta^j
    let mut real = Vec::with_capacity(m + 1);
    for (j, c) in coeffs.into_iter().enumerate() {
        let v = c * i_pow::<T>(j + 3 * m);
        if !T::negligible(&v.im, &scale) {
            return Err(Error::ImaginaryResidue { degree: j, residue: v.im.to_f64_lossy() });
        }
        real.push(v.re);
    }
    Ok(RouthPolynomial {
        order: m,
        index: alpha,
        convention: Convention::Canonical,
        poly: RealPolynomial::new(real),
    })
}

/// Rodrigues-form polynomial
/// `w^-1 (d/deta)^m [w (1+eta^2)^m]`, `w = (1+eta^2)^alpha_R exp(2 alpha_I atan eta)`.
///
/// Related to the canonical family by
/// `routh_rodrigues(m, a) = (-2)^m m! routh_polynomial(m, -a* - m)`.
pub fn routh_rodrigues<T: Scalar>(m: usize, alpha: Complex<T>) -> RouthPolynomial<T> {
    let two = T::from_usize_exact(2);
    let one_plus_sq = RealPolynomial::new(vec![T::one(), T::zero(), T::one()]);
    let mut q = RealPolynomial::constant(T::one());
    for k in 0..m {
        let slope = two.clone() * (T::from_usize_exact(m - k) + alpha.re.clone());
        let lin = RealPolynomial::new(vec![two.clone() * alpha.im.clone(), slope]);
        q = &(&one_plus_sq * &q.derivative()) + &(&lin * &q);
    }
    RouthPolynomial { order: m, index: alpha, convention: Convention::Rodrigues, poly: q }
}

/// Index `-alpha* - m` under which the Rodrigues and canonical forms agree.
pub fn rodrigues_partner_index<T: Scalar>(m: usize, alpha: &Complex<T>) -> Complex<T> {
    -alpha.conj() - Complex::from(T::from_usize_exact(m))
}

/// `(-2)^m m!`, the constant relating the two constructions.
pub fn rodrigues_constant<T: Scalar>(m: usize) -> T {
    let c = (0..m).fold(T::one(), |a, _| a * T::from_usize_exact(2)) * factorial::<T>(m);
    if m % 2 == 0 {
        c
    } else {
        -c
    }
}

/// Canonical polynomial evaluated through the Gauss hypergeometric series of
/// the classical Jacobi polynomial with index `alpha' = -alpha - m`.
pub fn routh_hypergeometric_eval(m: usize, alpha: Complex64, eta: f64) -> Result<f64> {
    let ap = -alpha - Complex64::from(m as f64);
    let c = ap + 1.0;
    for k in 0..m {
        if (c + k as f64).norm() < 1e-14 {
            return Err(Error::DegenerateParameter("hypergeometric lower parameter hits a pole"));
        }
    }
    let z = Complex64::new(1.0, eta) * 0.5;
    let b = m as f64 + 1.0 + 2.0 * ap.re;
    let mut term = Complex64::one();
    let mut sum = Complex64::one();
    for k in 0..m {
        let kf = k as f64;
        term = term * ((kf - m as f64) * (b + kf)) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
    }
    // The (-1)^m of the classical form cancels against the one relating it
    // to the canonical polynomial, leaving (-i)^m.
    let value = rising(&c, m) / factorial::<f64>(m) * sum * i_pow::<f64>(3 * m);
    Ok(value.re)
}

/// Left side of the real-variable differential equation applied to the
/// polynomial; identically zero for a correct construction.
pub fn ode_residual<T: Scalar>(r: &RouthPolynomial<T>) -> RealPolynomial<T> {
    let two = T::from_usize_exact(2);
    let m = T::from_usize_exact(r.order);
    let (ar, ai) = (r.index.re.clone(), r.index.im.clone());
    let (slope, c0) = match r.convention {
        Convention::Canonical => (
            T::one() - m.clone() - ar.clone(),
            m.clone() * (m.clone() - T::one() + two.clone() * ar),
        ),
        Convention::Rodrigues => (
            ar.clone() + T::one(),
            -(m.clone() * (m + T::one() + two.clone() * ar)),
        ),
    };
    let a2 = RealPolynomial::new(vec![T::one(), T::zero(), T::one()]);
    let a1 = RealPolynomial::new(vec![two.clone() * ai, two * slope]);
    let p = &r.poly;
    let d1 = p.derivative();
    let d2 = d1.derivative();
    &(&(&a2 * &d2) + &(&a1 * &d1)) + &p.scale(&c0)
}

/// Weight `w^(alpha)(eta) = (1+eta^2)^alpha_R exp(2 alpha_I atan eta)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightParams {
    pub index: Complex64,
}

impl WeightParams {
    pub fn new(index: Complex64) -> Self {
        Self { index }
    }
}

pub fn weight_eval(w: &WeightParams, eta: f64) -> f64 {
    (1.0 + eta * eta).powf(w.index.re) * (2.0 * w.index.im * eta.atan()).exp()
}

/// `int p q w` over the real line.
pub fn inner_product(p: &RealPolynomial, q: &RealPolynomial, w: &WeightParams) -> Result<f64> {
    let deg = p.degree().unwrap_or(0) + q.degree().unwrap_or(0);
    let exponent = deg as f64 + 2.0 * w.index.re;
    if exponent >= -1.0 {
        return Err(Error::NonIntegrable { exponent });
    }
    let scale = p.l1_norm() * q.l1_norm();
    adaptive_quadrature(
        |eta| p.eval(&eta) * q.eval(&eta) * weight_eval(w, eta),
        f64::NEG_INFINITY,
        f64::INFINITY,
        1e-13 * scale.max(1e-300),
    )
}

/// The orthogonal family `R_m^(gamma - m)`, `m = 0, 1, ...`, with weight
/// `w^(-gamma*)`. Members with `m < gamma_R - 1/2` are square integrable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RomanovskiFamily {
    pub gamma: Complex64,
}

impl RomanovskiFamily {
    pub fn new(gamma: Complex64) -> Self {
        Self { gamma }
    }

    pub fn member(&self, m: usize) -> Result<RouthPolynomial> {
        routh_polynomial(m, self.gamma - m as f64)
    }

    pub fn weight(&self) -> WeightParams {
        WeightParams::new(-self.gamma.conj())
    }

    /// Largest admissible order, if any.
    pub fn max_order(&self) -> Option<usize> {
        let bound = self.gamma.re - 0.5;
        if bound <= 0.0 {
            return None;
        }
        let m = bound.ceil() as usize - 1;
        Some(m)
    }

    pub fn inner_product(&self, n: usize, m: usize) -> Result<f64> {
        let p = self.member(n)?;
        let q = self.member(m)?;
        inner_product(p.poly(), q.poly(), &self.weight())
    }
}

/// Discriminant `b^2 - 4ac` of the order-2 canonical polynomial.
pub fn discriminant_order2<T: Scalar>(alpha: Complex<T>) -> Result<T> {
    let r = routh_polynomial(2, alpha)?;
    let p = r.poly();
    let four = T::from_usize_exact(4);
    Ok(p.coeff(1) * p.coeff(1) - four * p.coeff(2) * p.coeff(0))
}

/// Closed form `(2 alpha_R + 1)(alpha_R^2 + alpha_I^2) / 4` of the same
/// discriminant.
pub fn discriminant_order2_closed<T: Scalar>(alpha: &Complex<T>) -> T {
    let two = T::from_usize_exact(2);
    let four = T::from_usize_exact(4);
    (two * alpha.re.clone() + T::one()) * alpha.norm_sqr() / four
}

/// Order-2 coefficients `[c0, c1, c2]` in a commonly quoted form for
/// `-P_2^(alpha*, alpha)(i eta)`; kept for comparison only.
pub fn printed_order2_coefficients(alpha: Complex64) -> [f64; 3] {
    let (ar, ai) = (alpha.re, alpha.im);
    [
        -(ai * ai + 2.0 * ar + 4.0) / 8.0,
        0.5 * ai * (2.0 * ar + 3.0),
        -0.25 * (2.0 * ar + 3.0) * (ar + 2.0),
    ]
}

/// Discriminant in the printed closed form; kept for comparison only.
pub fn printed_discriminant_order2(alpha: Complex64) -> f64 {
    let (ar, ai) = (alpha.re, alpha.im);
    let s = (ar + 2.0) * (ar + 2.0);
    -0.25 * (ar + 3.0) * s * (1.0 - (3.0 * ar + 4.0) / (2.0 * s) * ai * ai)
}
