//! Tangent polynomials, the Bose invariant and the Liouville change of
//! variable `eta(x)` defined by `eta' = (1 + eta^2) / sqrt(T(eta))`.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::oracle::quadrature::adaptive_quadrature;
use crate::oracle::Grid1D;
use crate::{Error, Result};

/// Quadratic `T(eta) = [c*(eta - i)^2 + c (eta + i)^2 + d (eta^2 + 1)] / 4`
/// with complex `c` (the coefficient at `eta = i`) and real `d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentPoly {
    c: Complex64,
    d: f64,
}

impl TangentPoly {
    /// `T = a (eta^2 + kappa)`.
    pub fn symmetric(a: f64, kappa: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter("tangent polynomial leading coefficient must be positive"));
        }
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::InvalidParameter("kappa must be positive"));
        }
        Ok(Self { c: Complex64::new(a * (1.0 - kappa), 0.0), d: 2.0 * a * (1.0 + kappa) })
    }

    /// General form; requires a positive leading coefficient and no real zeros.
    pub fn general(c: Complex64, d: f64) -> Result<Self> {
        let tp = Self { c, d };
        let [t0, t1, t2] = tp.coefficients();
        if !(t2 > 0.0) {
            return Err(Error::InvalidParameter("tangent polynomial leading coefficient must be positive"));
        }
        if !(t1 * t1 - 4.0 * t2 * t0 < 0.0) {
            return Err(Error::InvalidParameter("tangent polynomial must have no real zeros"));
        }
        Ok(tp)
    }

    /// Ascending coefficients `[t0, t1, t2]`.
    pub fn coefficients(&self) -> [f64; 3] {
        let (cr, ci) = (self.c.re, self.c.im);
        [(self.d - 2.0 * cr) / 4.0, -ci, (2.0 * cr + self.d) / 4.0]
    }

    pub fn leading(&self) -> f64 {
        self.coefficients()[2]
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn is_symmetric(&self) -> bool {
        self.c.im == 0.0
    }

    /// `kappa` of the symmetric form, `None` otherwise.
    pub fn kappa(&self) -> Option<f64> {
        let [t0, _, t2] = self.coefficients();
        self.is_symmetric().then(|| t0 / t2)
    }

    pub fn eval(&self, eta: f64) -> f64 {
        let [t0, t1, t2] = self.coefficients();
        (t2 * eta + t1) * eta + t0
    }

    fn derivs(&self, eta: f64) -> (f64, f64, f64) {
        let [t0, t1, t2] = self.coefficients();
        ((t2 * eta + t1) * eta + t0, 2.0 * t2 * eta + t1, 2.0 * t2)
    }

    fn symmetric_parts(&self) -> Result<(f64, f64)> {
        match self.kappa() {
            Some(k) => Ok((self.leading(), k)),
            None => Err(Error::PreconditionViolated("symmetric tangent polynomial required")),
        }
    }
}

pub fn tangent_eval(tp: &TangentPoly, eta: f64) -> f64 {
    tp.eval(eta)
}

/// Density `T(eta) / (1 + eta^2)^2`.
pub fn density(tp: &TangentPoly, eta: f64) -> f64 {
    let s = 1.0 + eta * eta;
    tp.eval(eta) / (s * s)
}

/// `d eta / dx` as a function of `eta`.
pub fn eta_prime(tp: &TangentPoly, eta: f64) -> f64 {
    (1.0 + eta * eta) / tp.eval(eta).sqrt()
}

/// Potential parameters: ray identifier `h0`, the constant `O00` and the
/// tangent polynomial. Potentials vanishing at infinity need `O00 = 2 h_R + 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialSpec {
    h0: Complex64,
    o00: f64,
    tp: TangentPoly,
}

impl PotentialSpec {
    pub fn new(h0: Complex64, tp: TangentPoly) -> Result<Self> {
        if !h0.re.is_finite() || !h0.im.is_finite() {
            return Err(Error::NonFinite("h0"));
        }
        Ok(Self { h0, o00: 2.0 * h0.re + 1.0, tp })
    }

    /// Validates a user-supplied `O00` against the vanishing constraint.
    pub fn with_o00(h0: Complex64, o00: f64, tp: TangentPoly) -> Result<Self> {
        let spec = Self::new(h0, tp)?;
        if (o00 - spec.o00).abs() > 1e-12 * (1.0 + spec.o00.abs()) {
            return Err(Error::ConstraintViolated { given: o00, expected: spec.o00 });
        }
        Ok(spec)
    }

    /// Milson potential from `h0`, `a` and `kappa`.
    pub fn milson(h0: Complex64, a: f64, kappa: f64) -> Result<Self> {
        Self::new(h0, TangentPoly::symmetric(a, kappa)?)
    }

    pub fn h0(&self) -> Complex64 {
        self.h0
    }

    pub fn o00(&self) -> f64 {
        self.o00
    }

    pub fn tp(&self) -> &TangentPoly {
        &self.tp
    }

    /// `lambda0 = sqrt(h0 + 1)` on the branch with positive real part.
    pub fn lambda0(&self) -> Result<Complex64> {
        let l = (self.h0 + 1.0).sqrt();
        if !(l.re > 0.0) {
            return Err(Error::BranchUndefined { energy: 0.0 });
        }
        Ok(l)
    }
}

/// Bose invariant `I(eta; eps)`; satisfies `I = -density * V_rational + density * eps`.
pub fn bose_invariant_eval(spec: &PotentialSpec, eps: f64, eta: f64) -> f64 {
    let i = Complex64::i();
    let c = spec.tp.c;
    let z = Complex64::new(eta, 0.0);
    let hm = spec.h0.conj() - c * eps;
    let hp = spec.h0 - c.conj() * eps;
    let o = spec.o00 + spec.tp.d * eps;
    let sum = hm / ((z - i) * (z - i)) + hp / ((z + i) * (z + i));
    -0.25 * (sum.re - o / (1.0 + eta * eta))
}

/// Closed form of the Schwarzian `{eta, x}` for `T = a (eta^2 + kappa)`.
pub fn schwarzian_symmetric(a: f64, kappa: f64, eta: f64) -> f64 {
    let e2 = eta * eta;
    let q = (1.0 + e2) / (e2 + kappa);
    let bracket = -0.5 - (kappa + 1.0) / (e2 + 1.0) + 5.0 * kappa / (2.0 * (e2 + kappa));
    ((1.0 - e2) / (e2 + kappa) - q * q * bracket) / a
}

/// Schwarzian derivative `{eta, x}` expressed in `eta`.
pub fn schwarzian_eval(tp: &TangentPoly, eta: f64) -> f64 {
    match tp.kappa() {
        Some(kappa) => schwarzian_symmetric(tp.leading(), kappa, eta),
        None => schwarzian_general(tp, eta),
    }
}

/// `f = d eta / dx = (1 + eta^2) T^(-1/2)` and its first two `eta`-derivatives.
pub fn eta_prime_jet(tp: &TangentPoly, eta: f64) -> (f64, f64, f64) {
    let (t, t1, t2) = tp.derivs(eta);
    let s = 1.0 + eta * eta;
    let r = t.sqrt();
    let f = s / r;
    let f1 = 2.0 * eta / r - 0.5 * s * t1 / (t * r);
    let f2 = 2.0 / r - 2.0 * eta * t1 / (t * r) - 0.5 * s * t2 / (t * r) + 0.75 * s * t1 * t1 / (t * t * r);
    (f, f1, f2)
}

// {eta, x} = f f'' - f'^2 / 2
fn schwarzian_general(tp: &TangentPoly, eta: f64) -> f64 {
    let (f, f1, f2) = eta_prime_jet(tp, eta);
    f * f2 - 0.5 * f1 * f1
}

/// Potential as a function of `eta`.
pub fn potential_at_eta(spec: &PotentialSpec, eta: f64) -> f64 {
    let h = spec.h0;
    let e2 = eta * eta;
    let num = 2.0 * h.re * (e2 - 1.0) - spec.o00 * (e2 + 1.0) + 4.0 * h.im * eta;
    num / (4.0 * spec.tp.eval(eta)) - 0.5 * schwarzian_eval(&spec.tp, eta)
}

/// Potential at `x` through the tabulated change of variable.
pub fn potential_eval(spec: &PotentialSpec, map: &VariableMap, x: f64) -> Result<f64> {
    Ok(potential_at_eta(spec, map.eta_of_x(x)?))
}

/// Stevenson's variable `2 / (i eta + 1)`.
pub fn stevenson_xi(eta: f64) -> Complex64 {
    Complex64::new(2.0, 0.0) / Complex64::new(1.0, eta)
}

/// `du/dx` for `u = asinh(eta)` and `T = a (eta^2 + kappa)`.
fn du_dx(a: f64, kappa: f64, u: f64) -> f64 {
    let th = u.tanh();
    let sech = 1.0 / u.cosh();
    1.0 / (a * (th * th + kappa * sech * sech)).sqrt()
}

fn x_of_u(a: f64, kappa: f64, u: f64) -> Result<f64> {
    let tol = 1e-14 * u.abs().max(1.0);
    adaptive_quadrature(|s| 1.0 / du_dx(a, kappa, s), 0.0, u, tol)
}

/// `eta(x)` for a symmetric tangent polynomial without a table, by Newton
/// iteration on `x(u)`.
pub fn eta_of_x_direct(tp: &TangentPoly, x: f64) -> Result<f64> {
    let (a, kappa) = tp.symmetric_parts()?;
    let target = x.abs();
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while x_of_u(a, kappa, hi)? < target {
        lo = hi;
        hi *= 2.0;
        if hi > 1e4 {
            return Err(Error::NotConverged("inverse change of variable"));
        }
    }
    let mut u = 0.5 * (lo + hi);
    for _ in 0..200 {
        let f = x_of_u(a, kappa, u)? - target;
        if f > 0.0 {
            hi = u;
        } else {
            lo = u;
        }
        let mut next = u - f * du_dx(a, kappa, u);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - u).abs() <= 1e-15 * next.abs().max(1.0) {
            return Ok(next.sinh().copysign(x));
        }
        u = next;
    }
    Err(Error::NotConverged("inverse change of variable"))
}

// Dormand-Prince 5(4) tableau
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const RK_TOL: f64 = 1e-13;

/// Advances `u` by `span` in `x` with adaptive Dormand-Prince steps.
fn rk_advance(g: &impl Fn(f64) -> f64, u0: f64, span: f64, h0: &mut f64) -> Result<f64> {
    let dir = span.signum();
    let mut done = 0.0;
    let mut u = u0;
    while done < span.abs() {
        let mut h = h0.min(span.abs() - done);
        loop {
            let mut k = [0.0; 7];
            k[0] = g(u);
            for s in 1..7 {
                let inc: f64 = (0..s).map(|j| A[s][j] * k[j]).sum();
                k[s] = g(u + dir * h * inc);
            }
            let next = u + dir * h * (0..6).map(|j| A[6][j] * k[j]).sum::<f64>();
            let err = (h * (0..7).map(|j| E[j] * k[j]).sum::<f64>()).abs();
            let sc = RK_TOL * (1.0 + next.abs());
            let factor = if err == 0.0 { 5.0 } else { (0.9 * (sc / err).powf(0.2)).clamp(0.2, 5.0) };
            if err <= sc && next.is_finite() {
                u = next;
                done += h;
                *h0 = h * factor;
                break;
            }
            h *= factor;
            if h < 1e-12 {
                return Err(Error::StepFailure { x: dir * done });
            }
        }
    }
    Ok(u)
}

/// Tabulated change of variable on a uniform symmetric `x` grid.
///
/// Stores `u = asinh(eta)` and interpolates it with cubic Hermite
/// polynomials using the exact slope `du/dx`.
#[derive(Clone, Debug, PartialEq)]
pub struct VariableMap {
    a: f64,
    kappa: f64,
    x_max: f64,
    step: f64,
    u: Vec<f64>,
}

/// Builds the map on `n` points of `[-x_max, x_max]` (`n` is rounded up to
/// an odd number so that `x = 0` is a node).
pub fn build_variable_map(tp: &TangentPoly, x_max: f64, n: usize) -> Result<VariableMap> {
    let (a, kappa) = tp.symmetric_parts()?;
    if !(x_max > 0.0) || !x_max.is_finite() {
        return Err(Error::InvalidParameter("x_max must be positive"));
    }
    if n < 3 {
        return Err(Error::InvalidParameter("map needs at least three points"));
    }
    let n = n | 1;
    let half = n / 2;
    let step = x_max / half as f64;
    let g = |u: f64| du_dx(a, kappa, u);
    let mut u = alloc::vec![0.0; n];
    for dir in [1isize, -1] {
        let mut h = step;
        let mut cur = 0.0;
        for j in 1..=half {
            cur = rk_advance(&g, cur, dir as f64 * step, &mut h)?;
            u[(half as isize + dir * j as isize) as usize] = cur;
        }
    }
    Ok(VariableMap { a, kappa, x_max, step, u })
}

impl VariableMap {
    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn spacing(&self) -> f64 {
        self.step
    }

    pub fn x(&self, i: usize) -> f64 {
        (i as f64 - (self.u.len() / 2) as f64) * self.step
    }

    pub fn eta(&self, i: usize) -> f64 {
        self.u[i].sinh()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.x(i)).collect()
    }

    pub fn etas(&self) -> Vec<f64> {
        self.u.iter().map(|u| u.sinh()).collect()
    }

    pub fn tp(&self) -> TangentPoly {
        TangentPoly::symmetric(self.a, self.kappa).expect("validated at construction")
    }

    /// `d eta / dx` at a given `eta`.
    pub fn derivative(&self, eta: f64) -> f64 {
        (1.0 + eta * eta) / (self.a * (eta * eta + self.kappa)).sqrt()
    }

    pub fn eta_of_x(&self, x: f64) -> Result<f64> {
        if !(x.abs() <= self.x_max * (1.0 + 1e-14)) {
            return Err(Error::OutOfGrid { x, x_max: self.x_max });
        }
        let t = (x + self.x_max) / self.step;
        let i = (t.floor() as usize).min(self.u.len() - 2);
        let s = t - i as f64;
        let (u0, u1) = (self.u[i], self.u[i + 1]);
        let d0 = du_dx(self.a, self.kappa, u0) * self.step;
        let d1 = du_dx(self.a, self.kappa, u1) * self.step;
        let s2 = s * s;
        let s3 = s2 * s;
        let u = (2.0 * s3 - 3.0 * s2 + 1.0) * u0
            + (s3 - 2.0 * s2 + s) * d0
            + (-2.0 * s3 + 3.0 * s2) * u1
            + (s3 - s2) * d1;
        Ok(u.sinh())
    }

    pub fn x_of_eta(&self, eta: f64) -> Result<f64> {
        x_of_u(self.a, self.kappa, eta.asinh())
    }
}

/// Potential sampled on the nodes of a map, ready for the Numerov oracle.
pub fn potential_grid(spec: &PotentialSpec, map: &VariableMap) -> Result<Grid1D> {
    let values = map.etas().into_iter().map(|e| potential_at_eta(spec, e)).collect();
    Grid1D::new(-map.x_max(), map.x_max(), values)
}

/// Smallest half-width (multiple of 1/4) beyond which `|V| < threshold`
/// on both sides, checked over two further units of length.
pub fn decay_x_max(spec: &PotentialSpec, threshold: f64) -> Result<f64> {
    let tp = spec.tp;
    let v_at = |x: f64| -> Result<f64> {
        let l = potential_at_eta(spec, eta_of_x_direct(&tp, -x)?).abs();
        let r = potential_at_eta(spec, eta_of_x_direct(&tp, x)?).abs();
        Ok(l.max(r))
    };
    let mut x = 1.0;
    while x < 400.0 {
        if v_at(x)? < threshold && v_at(x + 1.0)? < threshold && v_at(x + 2.0)? < threshold {
            return Ok(x);
        }
        x += 0.25;
    }
    Err(Error::NotConverged("potential does not decay below the threshold"))
}
