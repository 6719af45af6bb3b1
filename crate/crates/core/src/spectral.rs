//! Spectra of the potentials generated by a symmetric tangent polynomial.
//!
//! With `lambda(eps) = sqrt(h0 + 1 - c eps)`, `c = a (1 - kappa)`, a state of
//! order `m` has energy `eps = -(lambda_R - m - 1/2)^2 / a`. Eliminating `eps`
//! and `lambda_I = h_I / (2 lambda_R)` leaves a quartic in `lambda_R`:
//!
//! ```text
//! lambda^4 - h_I^2 / 4 = [h_R + 1 + (1 - kappa)(lambda - m - 1/2)^2] lambda^2
//! ```
//!
//! Roots above `m + 1/2` give bound states (type c), negative roots give
//! solutions irregular at both ends (type d). Eigenfunctions in `eta` are
//!
//! ```text
//! Phi = (1 + eta^2)^((1 - lambda_R)/2) exp(-lambda_I atan eta) R_m^(lambda* - m)(eta)
//! ```

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::geometry::{bose_invariant_eval, density, eta_prime, stevenson_xi, PotentialSpec, TangentPoly, VariableMap};
use crate::oracle::quadrature::adaptive_quadrature;
use crate::oracle::count_sign_changes_fn;
use crate::poly::RealPolynomial;
use crate::roots::{count_distinct_real_roots, real_roots};
use crate::routh::{discriminant_order2, rising, routh_polynomial, RouthPolynomial};
use crate::{Error, Result};

/// Energies closer to zero than this are treated as threshold states.
pub const THRESHOLD_ENERGY: f64 = 1e-10;
/// Largest admissible relative residual of the transformed equation.
pub const RESIDUAL_GATE: f64 = 1e-9;

fn symmetric_parts(spec: &PotentialSpec) -> Result<(f64, f64)> {
    let tp = spec.tp();
    match tp.kappa() {
        Some(k) => Ok((tp.leading(), k)),
        None => Err(Error::PreconditionViolated("symmetric tangent polynomial required")),
    }
}

/// Spectral parameter at a given energy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaBranch {
    pub energy: f64,
    pub lambda: Complex64,
}

/// `lambda(eps)` on the branch with positive real part.
pub fn lambda_of_energy(spec: &PotentialSpec, eps: f64) -> Result<LambdaBranch> {
    let (a, kappa) = symmetric_parts(spec)?;
    let c = a * (1.0 - kappa);
    let lambda = (spec.h0() + 1.0 - c * eps).sqrt();
    if !(lambda.re > 0.0) || !lambda.re.is_finite() {
        return Err(Error::BranchUndefined { energy: eps });
    }
    Ok(LambdaBranch { energy: eps, lambda })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootKind {
    /// `lambda_R > m + 1/2`: normalizable.
    C,
    /// `lambda_R < 0`: irregular at both ends.
    D,
    /// `0 < lambda_R <= m + 1/2`.
    Between,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuarticRoot {
    pub lambda_r: f64,
    pub kind: RootKind,
    /// `|q(lambda)|` relative to the sum of term magnitudes.
    pub residual: f64,
}

/// Ascending coefficients of the quartic for order `m` (leading `kappa`).
pub fn quartic_coefficients(spec: &PotentialSpec, m: usize) -> Result<[f64; 5]> {
    let (_, kappa) = symmetric_parts(spec)?;
    let h = spec.h0();
    let c = 1.0 - kappa;
    let mu = m as f64 + 0.5;
    Ok([-0.25 * h.im * h.im, 0.0, -(h.re + 1.0) - c * mu * mu, 2.0 * c * mu, kappa])
}

/// Real roots of the quartic, classified. The spurious double root at zero
/// that appears when `h_I = 0` is removed.
pub fn quartic_lambda_roots(spec: &PotentialSpec, m: usize) -> Result<Vec<QuarticRoot>> {
    let coeffs = quartic_coefficients(spec, m)?;
    let full = RealPolynomial::new(coeffs.to_vec());
    let reduced = if coeffs[0] == 0.0 { RealPolynomial::new(coeffs[2..].to_vec()) } else { full.clone() };
    let mu = m as f64 + 0.5;
    let mut out = Vec::new();
    let mut last = f64::NAN;
    for r in real_roots(&reduced)? {
        if r == last {
            continue;
        }
        last = r;
        let lambda_r = polish(&full, r);
        let residual = {
            let v = full.eval(&lambda_r).abs();
            let scale: f64 = coeffs.iter().enumerate().map(|(k, c)| (c * lambda_r.powi(k as i32)).abs()).sum();
            v / scale.max(f64::MIN_POSITIVE)
        };
        let kind = if lambda_r > mu {
            RootKind::C
        } else if lambda_r < 0.0 {
            RootKind::D
        } else {
            RootKind::Between
        };
        out.push(QuarticRoot { lambda_r, kind, residual });
    }
    Ok(out)
}

fn polish(p: &RealPolynomial, mut x: f64) -> f64 {
    for _ in 0..3 {
        let (v, d, _) = p.jet(x);
        if d == 0.0 {
            break;
        }
        let next = x - v / d;
        if p.eval(&next).abs() < v.abs() {
            x = next;
        } else {
            break;
        }
    }
    x
}

fn lambda_from_root(spec: &PotentialSpec, lambda_r: f64) -> Complex64 {
    let hi = spec.h0().im;
    Complex64::new(lambda_r, if hi == 0.0 { 0.0 } else { hi / (2.0 * lambda_r) })
}

fn order_energy(a: f64, lambda_r: f64, m: usize) -> f64 {
    let d = lambda_r - m as f64 - 0.5;
    -d * d / a
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundLevel {
    pub n: usize,
    pub energy: f64,
    pub lambda: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Diagnostic {
    /// A level with `|eps| < THRESHOLD_ENERGY` was dropped.
    NearThreshold { n: usize, energy: f64 },
    /// More than one normalizable root for one order; the largest was used.
    MultipleRoots { n: usize, count: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub levels: Vec<BoundLevel>,
    pub lambda0: Complex64,
    /// Levels found constructively.
    pub count_constructive: usize,
    /// Largest index from the closed-form bound, `floor(lambda0_R)`.
    pub n_max_formula: usize,
    /// Level count implied by the closed-form bound, `n_max_formula + 1`.
    pub count_formula: usize,
    pub formula_discrepancy: bool,
    pub diagnostics: Vec<Diagnostic>,
}

impl Spectrum {
    pub fn n_max_constructive(&self) -> Option<usize> {
        self.count_constructive.checked_sub(1)
    }

    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }
}

/// All bound levels, from the largest normalizable quartic root of each order.
pub fn enumerate_bound_spectrum(spec: &PotentialSpec) -> Result<Spectrum> {
    let (a, _) = symmetric_parts(spec)?;
    let lambda0 = spec.lambda0()?;
    let mut levels = Vec::new();
    let mut diagnostics = Vec::new();
    for n in 0..10_000 {
        let c_roots: Vec<f64> = quartic_lambda_roots(spec, n)?
            .into_iter()
            .filter(|r| r.kind == RootKind::C)
            .map(|r| r.lambda_r)
            .collect();
        let Some(&lambda_r) = c_roots.iter().max_by(|x, y| x.total_cmp(y)) else {
            break;
        };
        if c_roots.len() > 1 {
            diagnostics.push(Diagnostic::MultipleRoots { n, count: c_roots.len() });
        }
        let energy = order_energy(a, lambda_r, n);
        if energy.abs() < THRESHOLD_ENERGY {
            diagnostics.push(Diagnostic::NearThreshold { n, energy });
            break;
        }
        levels.push(BoundLevel { n, energy, lambda: lambda_from_root(spec, lambda_r) });
    }
    let n_max_formula = lambda0.re.floor() as usize;
    let count = levels.len();
    Ok(Spectrum {
        levels,
        lambda0,
        count_constructive: count,
        n_max_formula,
        count_formula: n_max_formula + 1,
        formula_discrepancy: count != n_max_formula + 1,
        diagnostics,
    })
}

/// Closed-form `lambda0_R` for the quartic with `kappa = 1`:
/// `lambda^2 = [(h_R + 1) + sqrt((h_R + 1)^2 + h_I^2)] / 2`.
pub fn lambda0_closed_form(h0: Complex64) -> f64 {
    let p = h0.re + 1.0;
    (0.5 * (p + (p * p + h0.im * h0.im).sqrt())).sqrt()
}

/// Variant of the closed form with `4 h_I^2` under the root, which does not
/// match the spectrum. Kept for comparison only.
pub fn lambda0_closed_form_printed(h0: Complex64) -> f64 {
    let p = h0.re + 1.0;
    (0.5 * (p + (p * p + 4.0 * h0.im * h0.im).sqrt())).sqrt()
}

/// Function `(1 + eta^2)^p exp(q atan eta) poly(eta)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugedPolynomial {
    pub p: f64,
    pub q: f64,
    pub poly: RealPolynomial,
}

impl GaugedPolynomial {
    pub fn gauge(&self, eta: f64) -> f64 {
        (1.0 + eta * eta).powf(self.p) * (self.q * eta.atan()).exp()
    }

    /// `g'/g` and its derivative for the gauge factor `g`.
    fn log_gauge(&self, eta: f64) -> (f64, f64) {
        let s = 1.0 + eta * eta;
        let l1 = (2.0 * self.p * eta + self.q) / s;
        let l1p = (2.0 * self.p * s - 2.0 * eta * (2.0 * self.p * eta + self.q)) / (s * s);
        (l1, l1p)
    }

    pub fn value(&self, eta: f64) -> f64 {
        if eta.abs() <= 1e8 {
            return self.gauge(eta) * self.poly.eval(&eta);
        }
        // far out the gauge underflows while the polynomial overflows
        let c = self.poly.coeffs();
        let Some(d) = self.poly.degree() else { return 0.0 };
        let inv = 1.0 / eta;
        let tail = c.iter().fold(0.0, |acc, ck| acc * inv + ck);
        let log = d as f64 * eta.abs().ln() + self.p * (1.0 + eta * eta).ln() + self.q * eta.atan();
        let sign = if d % 2 == 1 && eta < 0.0 { -1.0 } else { 1.0 };
        sign * tail * log.exp()
    }

    /// Value, first and second derivative in `eta`.
    pub fn jet(&self, eta: f64) -> (f64, f64, f64) {
        let g = self.gauge(eta);
        let (l1, l1p) = self.log_gauge(eta);
        let (r, r1, r2) = self.poly.jet(eta);
        (g * r, g * (r1 + l1 * r), g * (r2 + 2.0 * l1 * r1 + (l1 * l1 + l1p) * r))
    }

    /// First and second derivative of `ln|value|`.
    pub fn log_derivatives(&self, eta: f64) -> (f64, f64) {
        let (l1, l1p) = self.log_gauge(eta);
        let (r, r1, r2) = self.poly.jet(eta);
        (l1 + r1 / r, l1p + (r2 * r - r1 * r1) / (r * r))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { p: self.p, q: self.q, poly: self.poly.scale(&factor) }
    }
}

/// Relative residual of `Phi'' + I(eta; eps) Phi = 0`, maximized over samples.
pub fn rcsle_residual(spec: &PotentialSpec, eps: f64, phi: &GaugedPolynomial, samples: &[f64]) -> f64 {
    samples
        .iter()
        .map(|&eta| {
            let (l1, l1p) = phi.log_gauge(eta);
            let (r, r1, r2) = phi.poly.jet(eta);
            let inv = bose_invariant_eval(spec, eps, eta);
            let terms = [r2, 2.0 * l1 * r1, (l1 * l1 + l1p) * r, inv * r];
            let sum: f64 = terms.iter().sum();
            let mag: f64 = terms.iter().map(|t| t.abs()).sum();
            if mag == 0.0 {
                0.0
            } else {
                sum.abs() / mag
            }
        })
        .fold(0.0, f64::max)
}

/// Default sample points for residual checks.
pub fn residual_samples() -> Vec<f64> {
    let mut s: Vec<f64> = (0..=20).map(|k| -5.0 + 0.5 * k as f64).collect();
    s.extend_from_slice(&[-40.0, -12.0, 12.0, 40.0]);
    s
}

/// Candidate index maps `lambda -> alpha` for the polynomial factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexCandidate {
    NegConj,
    Neg,
    NegConjPlusOne,
    NegPlusOne,
    ConjMinusOrder,
    MinusOrder,
    NegConjMinusOrder,
    NegMinusOrder,
}

impl IndexCandidate {
    pub const ALL: [IndexCandidate; 8] = [
        IndexCandidate::NegConj,
        IndexCandidate::Neg,
        IndexCandidate::NegConjPlusOne,
        IndexCandidate::NegPlusOne,
        IndexCandidate::ConjMinusOrder,
        IndexCandidate::MinusOrder,
        IndexCandidate::NegConjMinusOrder,
        IndexCandidate::NegMinusOrder,
    ];

    pub fn index(self, lambda: Complex64, m: usize) -> Complex64 {
        let mf = m as f64;
        match self {
            Self::NegConj => -lambda.conj(),
            Self::Neg => -lambda,
            Self::NegConjPlusOne => -lambda.conj() + 1.0,
            Self::NegPlusOne => -lambda + 1.0,
            Self::ConjMinusOrder => lambda.conj() - mf,
            Self::MinusOrder => lambda - mf,
            Self::NegConjMinusOrder => -lambda.conj() - mf,
            Self::NegMinusOrder => -lambda - mf,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::NegConj => "-lambda*",
            Self::Neg => "-lambda",
            Self::NegConjPlusOne => "-lambda*+1",
            Self::NegPlusOne => "-lambda+1",
            Self::ConjMinusOrder => "lambda*-m",
            Self::MinusOrder => "lambda-m",
            Self::NegConjMinusOrder => "-lambda*-m",
            Self::NegMinusOrder => "-lambda-m",
        }
    }
}

/// Index map plus the sign of `lambda_I` in the `exp(atan)` gauge factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexConvention {
    pub candidate: IndexCandidate,
    pub exp_sign: i8,
}

/// The convention selected by [`pin_convention`] on every tested order,
/// potential and solution type.
pub const PINNED_CONVENTION: IndexConvention =
    IndexConvention { candidate: IndexCandidate::ConjMinusOrder, exp_sign: -1 };

impl IndexConvention {
    pub fn polynomial(&self, lambda: Complex64, m: usize) -> Result<RouthPolynomial> {
        routh_polynomial(m, self.candidate.index(lambda, m))
    }

    pub fn phi(&self, lambda: Complex64, m: usize) -> Result<(RouthPolynomial, GaugedPolynomial)> {
        let r = self.polynomial(lambda, m)?;
        let phi = GaugedPolynomial {
            p: 0.5 * (1.0 - lambda.re),
            q: f64::from(self.exp_sign) * lambda.im,
            poly: r.poly().clone(),
        };
        Ok((r, phi))
    }
}

/// Scans all candidate conventions and returns the one with the smallest
/// residual, or [`Error::ConventionUnresolved`] if none passes the gate.
pub fn pin_convention(
    spec: &PotentialSpec,
    lambda: Complex64,
    m: usize,
    eps: f64,
    samples: &[f64],
) -> Result<(IndexConvention, f64)> {
    let mut best: Option<(IndexConvention, f64)> = None;
    for candidate in IndexCandidate::ALL {
        for exp_sign in [-1i8, 1] {
            let conv = IndexConvention { candidate, exp_sign };
            let Ok((_, phi)) = conv.phi(lambda, m) else { continue };
            if phi.poly.is_zero() {
                continue;
            }
            let res = rcsle_residual(spec, eps, &phi, samples);
            if best.is_none_or(|(_, b)| res < b) {
                best = Some((conv, res));
            }
        }
    }
    match best {
        Some((c, r)) if r < RESIDUAL_GATE => Ok((c, r)),
        Some((_, r)) => Err(Error::ConventionUnresolved { best_residual: r }),
        None => Err(Error::ConventionUnresolved { best_residual: f64::INFINITY }),
    }
}

fn pinned_phi(
    spec: &PotentialSpec,
    lambda: Complex64,
    m: usize,
    eps: f64,
) -> Result<(RouthPolynomial, GaugedPolynomial, f64)> {
    let (r, phi) = PINNED_CONVENTION.phi(lambda, m)?;
    let residual = rcsle_residual(spec, eps, &phi, &residual_samples());
    if !(residual < RESIDUAL_GATE) {
        return Err(Error::ConventionUnresolved { best_residual: residual });
    }
    Ok((r, phi, residual))
}

/// `int f(eta) d eta` over the real line, computed in `u = asinh(eta)`.
fn integrate_line<F: Fn(f64) -> f64>(f: F, tol: f64) -> Result<f64> {
    adaptive_quadrature(
        |u| {
            // beyond |u| = 300 the densities overflow; integrands there are
            // below exp(-300 (2 lambda_R - 2m - 1)) of their peak
            if u.abs() > 300.0 {
                0.0
            } else {
                f(u.sinh()) * u.cosh()
            }
        },
        f64::NEG_INFINITY,
        f64::INFINITY,
        tol,
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundState {
    pub level: BoundLevel,
    pub poly: RouthPolynomial,
    pub phi: GaugedPolynomial,
    /// `int Phi^2 T / (1 + eta^2)^2 d eta`, the squared norm in `x`.
    pub norm: f64,
    /// Distinct real zeros of the polynomial factor.
    pub nodes: usize,
    pub residual: f64,
    pub convention: IndexConvention,
    /// Normalized `psi(x)` on the map grid.
    pub psi: Vec<f64>,
}

impl BoundState {
    /// Normalized `psi` at a given `eta`.
    pub fn psi_at_eta(&self, tp: &TangentPoly, eta: f64) -> f64 {
        self.phi.value(eta) / (eta_prime(tp, eta).sqrt() * self.norm.sqrt())
    }
}

/// Builds the eigenfunction of a level and samples it on the map grid.
pub fn assemble_level(spec: &PotentialSpec, level: &BoundLevel, map: &VariableMap) -> Result<BoundState> {
    let (poly, phi, residual) = pinned_phi(spec, level.lambda, level.n, level.energy)?;
    let tp = *spec.tp();
    let scale = phi.poly.l1_norm().powi(2);
    let norm = integrate_line(|eta| phi.value(eta).powi(2) * density(&tp, eta), 1e-13 * scale)?;
    if !(norm > 0.0) {
        return Err(Error::NonFinite("eigenfunction norm"));
    }
    let nodes = count_distinct_real_roots(&phi.poly)?;
    let psi = map
        .etas()
        .into_iter()
        .map(|eta| phi.value(eta) / (eta_prime(&tp, eta).sqrt() * norm.sqrt()))
        .collect();
    Ok(BoundState { level: *level, poly, phi, norm, nodes, residual, convention: PINNED_CONVENTION, psi })
}

/// Eigenfunction of level `n`.
pub fn assemble_eigenfunction(spec: &PotentialSpec, n: usize, map: &VariableMap) -> Result<BoundState> {
    let spectrum = enumerate_bound_spectrum(spec)?;
    let level = spectrum.levels.get(n).ok_or(Error::NoSuchRoot { order: n })?;
    assemble_level(spec, level, map)
}

/// `int psi_a psi_b dx` for two bound states.
pub fn overlap(spec: &PotentialSpec, a: &BoundState, b: &BoundState) -> Result<f64> {
    let tp = *spec.tp();
    let scale = a.phi.poly.l1_norm() * b.phi.poly.l1_norm();
    let v = integrate_line(|eta| a.phi.value(eta) * b.phi.value(eta) * density(&tp, eta), 1e-14 * scale)?;
    Ok(v / (a.norm * b.norm).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AehKind {
    C,
    D,
}

/// Auxiliary solution built from a quartic root of a given type.
#[derive(Clone, Debug, PartialEq)]
pub struct AehSolution {
    pub kind: AehKind,
    pub order: usize,
    pub energy: f64,
    pub lambda: Complex64,
    pub poly: RouthPolynomial,
    pub phi: GaugedPolynomial,
    pub real_roots: usize,
    pub nodeless: bool,
    pub residual: f64,
    pub convention: IndexConvention,
}

pub fn aeh_solution(spec: &PotentialSpec, kind: AehKind, m: usize) -> Result<AehSolution> {
    let (a, _) = symmetric_parts(spec)?;
    let roots = quartic_lambda_roots(spec, m)?;
    let pick = match kind {
        AehKind::C => roots.iter().filter(|r| r.kind == RootKind::C).map(|r| r.lambda_r).max_by(f64::total_cmp),
        AehKind::D => roots.iter().filter(|r| r.kind == RootKind::D).map(|r| r.lambda_r).min_by(f64::total_cmp),
    };
    let lambda_r = pick.ok_or(Error::NoSuchRoot { order: m })?;
    let lambda = lambda_from_root(spec, lambda_r);
    let energy = order_energy(a, lambda_r, m);
    let (poly, phi, residual) = pinned_phi(spec, lambda, m, energy)?;
    let real_roots = count_distinct_real_roots(&phi.poly)?;
    Ok(AehSolution {
        kind,
        order: m,
        energy,
        lambda,
        poly,
        phi,
        real_roots,
        nodeless: real_roots == 0,
        residual,
        convention: PINNED_CONVENTION,
    })
}

/// Scarf II (Gendenshtein) potential
/// `V = [b^2 - a(a+1)] / cosh^2 x + (2a+1) b sinh x / cosh^2 x`
/// as the `kappa = 1`, unit-scale member of the family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GendenshteinParams {
    pub a: f64,
    pub b: f64,
    pub spec: PotentialSpec,
    pub lambda0: Complex64,
}

impl GendenshteinParams {
    /// The closed-form potential in `x`.
    pub fn potential(&self, x: f64) -> f64 {
        let (a, b) = (self.a, self.b);
        let c2 = x.cosh().powi(2);
        (b * b - a * (a + 1.0)) / c2 + (2.0 * a + 1.0) * b * x.sinh() / c2
    }

    /// `eps_n = -(a - n)^2` for `n < a`.
    pub fn energies(&self) -> Vec<f64> {
        (0..).map(|n| self.a - n as f64).take_while(|d| *d > 0.0).map(|d| -d * d).collect()
    }
}

pub fn gendenshtein_params(a: f64, b: f64) -> Result<GendenshteinParams> {
    if !(a > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParameter("Gendenshtein parameters need a > 0"));
    }
    let lambda0 = Complex64::new(a + 0.5, b);
    let h0 = lambda0 * lambda0 - 1.0;
    let spec = PotentialSpec::new(h0, TangentPoly::symmetric(1.0, 1.0)?)?;
    Ok(GendenshteinParams { a, b, spec, lambda0 })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SigmaRho {
    pub sigma: f64,
    pub rho: Complex64,
    pub lambda: Complex64,
    /// `|(sigma-1/2)^2 + (rho-1/2)^2 - (h_R + 1 - c eps)|`
    pub sum_deviation: f64,
    /// Same with `+ c eps`, the printed sign.
    pub sum_deviation_printed: f64,
    /// `2i (rho - 1/2)(sigma - 1/2)`, equal to `-2 lambda_R lambda_I = -h_I`.
    pub product: Complex64,
}

pub fn milson_sigma_rho(spec: &PotentialSpec, eps: f64) -> Result<SigmaRho> {
    let (a, kappa) = symmetric_parts(spec)?;
    let c = a * (1.0 - kappa);
    let lambda = lambda_of_energy(spec, eps)?.lambda;
    let sigma = 0.5 - lambda.re;
    let rho = Complex64::new(0.5, -lambda.im);
    let half = Complex64::new(0.5, 0.0);
    let sum = (sigma - 0.5).powi(2) + (rho - half) * (rho - half);
    let hr1 = spec.h0().re + 1.0;
    Ok(SigmaRho {
        sigma,
        rho,
        lambda,
        sum_deviation: (sum - (hr1 - c * eps)).norm(),
        sum_deviation_printed: (sum - (hr1 + c * eps)).norm(),
        product: Complex64::i() * 2.0 * (rho - half) * (sigma - 0.5),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StevensonReport {
    /// Identity with `xi^-n`.
    pub deviation: f64,
    /// Same identity with `xi^n`, which does not hold.
    pub deviation_printed: f64,
}

/// Compares Stevenson's hypergeometric polynomial in `xi = 2/(i eta + 1)`
/// with `R_n^(lambda* - n)(eta)`:
///
/// ```text
/// xi^-n F(-n, lambda* - n; 2(lambda_R - n); xi) (-i)^n (2 lambda_R - 2n)_n / n!
/// ```
///
/// Deviations are `|lhs - rhs| / max(1, |rhs|)`, maximized over samples.
pub fn stevenson_identity_check(lambda: Complex64, n: usize, samples: &[f64]) -> Result<StevensonReport> {
    let c = Complex64::new(2.0 * (lambda.re - n as f64), 0.0);
    for k in 0..n {
        if (c + k as f64).norm() < 1e-14 {
            return Err(Error::DegenerateParameter("Stevenson lower parameter hits a pole"));
        }
    }
    let b = lambda.conj() - n as f64;
    let rhs_poly = routh_polynomial(n, b)?;
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    let mut minus_i_n = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        minus_i_n *= Complex64::new(0.0, -1.0);
    }
    let pre = minus_i_n * rising(&c, n) / fact;
    let mut report = StevensonReport { deviation: 0.0, deviation_printed: 0.0 };
    for &eta in samples {
        let xi = stevenson_xi(eta);
        let mut term = Complex64::new(1.0, 0.0);
        let mut f = term;
        for k in 0..n {
            let kf = k as f64;
            term = term * (kf - n as f64) * (b + kf) / ((c + kf) * (kf + 1.0)) * xi;
            f += term;
        }
        let rhs = rhs_poly.eval(eta);
        let scale = rhs.abs().max(1.0);
        let xin = xi.powu(n as u32);
        let lhs = pre * f / xin;
        let lhs_printed = pre * f * xin;
        report.deviation = report.deviation.max((lhs - rhs).norm() / scale);
        report.deviation_printed = report.deviation_printed.max((lhs_printed - rhs).norm() / scale);
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanCell {
    pub a: f64,
    pub b: f64,
    /// Distinct real zeros of the polynomial (exact isolation).
    pub root_count: usize,
    /// Sign changes of the sampled solution.
    pub sign_changes: usize,
    pub empirical_nodeless: bool,
    /// `b^2 < (2a+5)^2 / (6a+11)`, stated for order 2 only.
    pub paper_6_15: Option<bool>,
    /// Negative order-2 discriminant of the polynomial actually used.
    pub canonical_disc: Option<bool>,
    /// Root count and sign-change count agree on nodelessness.
    pub consistent: bool,
}

impl ScanCell {
    pub fn agrees_with_closed_form(&self) -> Option<bool> {
        self.paper_6_15.map(|p| p == self.empirical_nodeless)
    }

    pub fn agrees_with_discriminant(&self) -> Option<bool> {
        self.canonical_disc.map(|p| p == self.empirical_nodeless)
    }
}

/// Nodelessness of the type-d solution of order `m` for one Gendenshtein
/// parameter pair.
pub fn scan_cell(a: f64, b: f64, m: usize) -> Result<ScanCell> {
    let g = gendenshtein_params(a, b)?;
    let sol = aeh_solution(&g.spec, AehKind::D, m)?;
    let p = sol.phi.poly.clone();
    let bound = 1.0 + p.coeffs().iter().map(|c| (c / p.leading().copied().unwrap_or(1.0)).abs()).fold(0.0, f64::max);
    let sign_changes = count_sign_changes_fn(|eta| p.eval(&eta), -bound, bound, 20_001)?;
    let (paper_6_15, canonical_disc) = if m == 2 {
        let index = PINNED_CONVENTION.candidate.index(sol.lambda, m);
        (Some(b * b < (2.0 * a + 5.0).powi(2) / (6.0 * a + 11.0)), Some(discriminant_order2(index)? < 0.0))
    } else {
        (None, None)
    };
    Ok(ScanCell {
        a,
        b,
        root_count: sol.real_roots,
        sign_changes,
        empirical_nodeless: sol.nodeless,
        paper_6_15,
        canonical_disc,
        consistent: (sol.real_roots == 0) == (sign_changes == 0),
    })
}

/// Grid of `(a, b)` values, inclusive of both ends.
pub fn scan_axis(range: (f64, f64), points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![range.0];
    }
    (0..points).map(|i| range.0 + (range.1 - range.0) * i as f64 / (points - 1) as f64).collect()
}

/// One grid point of a scan; `cell` is `None` where no type-d root exists.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanPoint {
    pub a: f64,
    pub b: f64,
    pub cell: Option<ScanCell>,
}

/// [`scan_cell`] with a missing root recorded as an empty cell.
pub fn scan_point(a: f64, b: f64, m: usize) -> Result<ScanPoint> {
    match scan_cell(a, b, m) {
        Ok(cell) => Ok(ScanPoint { a, b, cell: Some(cell) }),
        Err(Error::NoSuchRoot { .. }) => Ok(ScanPoint { a, b, cell: None }),
        Err(e) => Err(e),
    }
}

/// Row-major scan over `a` (outer) and `b` (inner).
pub fn nodeless_scan(
    a_range: (f64, f64),
    b_range: (f64, f64),
    resolution: (usize, usize),
    m: usize,
) -> Result<Vec<ScanPoint>> {
    validate_scan(a_range, resolution, m)?;
    let mut out = Vec::with_capacity(resolution.0 * resolution.1);
    for a in scan_axis(a_range, resolution.0) {
        for b in scan_axis(b_range, resolution.1) {
            out.push(scan_point(a, b, m)?);
        }
    }
    Ok(out)
}

pub fn validate_scan(a_range: (f64, f64), resolution: (usize, usize), m: usize) -> Result<()> {
    if m < 2 || m % 2 != 0 {
        return Err(Error::InvalidParameter("scan order must be even and at least 2"));
    }
    if resolution.0 < 16 || resolution.1 < 16 {
        return Err(Error::InvalidParameter("scan resolution must be at least 16 per axis"));
    }
    if !(a_range.0 > 0.0) || !(a_range.1 >= a_range.0) {
        return Err(Error::InvalidParameter("scan a-range must be positive and ordered"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gendenshtein_spectrum() {
        let g = gendenshtein_params(2.5, 0.5).unwrap();
        let s = enumerate_bound_spectrum(&g.spec).unwrap();
        let e = s.energies();
        assert_eq!(e.len(), 3);
        for (x, y) in e.iter().zip([-6.25, -2.25, -0.25]) {
            assert!((x - y).abs() < 1e-10, "{x} vs {y}");
        }
        assert!((s.lambda0 - Complex64::new(3.0, 0.5)).norm() < 1e-14);
        assert!(s.formula_discrepancy);
        assert_eq!(s.n_max_formula, 3);
    }

    #[test]
    fn quartic_reference_values() {
        let spec = PotentialSpec::milson(Complex64::new(7.75, 3.0), 1.0, 2.0).unwrap();
        let s = enumerate_bound_spectrum(&spec).unwrap();
        let want = [-3.51250, -1.53896, -0.21602];
        assert_eq!(s.levels.len(), 3);
        for (l, w) in s.levels.iter().zip(want) {
            assert!((l.energy - w).abs() < 1e-4, "{} vs {w}", l.energy);
        }
    }

    #[test]
    fn real_h0_drops_zero_root() {
        let spec = PotentialSpec::milson(Complex64::new(5.0, 0.0), 1.0, 1.5).unwrap();
        let roots = quartic_lambda_roots(&spec, 0).unwrap();
        assert!(roots.iter().all(|r| r.lambda_r != 0.0));
        assert!(roots.iter().all(|r| r.residual < 1e-12));
    }

    #[test]
    fn empty_spectrum_below_one_half() {
        let spec = PotentialSpec::milson(Complex64::new(-0.9, 0.0), 1.0, 1.0).unwrap();
        let s = enumerate_bound_spectrum(&spec).unwrap();
        assert!(s.levels.is_empty());
        assert_eq!(s.n_max_constructive(), None);
    }

    #[test]
    fn branch_undefined_on_negative_axis() {
        let spec = PotentialSpec::milson(Complex64::new(-3.0, 0.0), 1.0, 1.0).unwrap();
        assert!(matches!(lambda_of_energy(&spec, -1.0), Err(Error::BranchUndefined { .. })));
    }

    #[test]
    fn stevenson_example() {
        let r = stevenson_identity_check(Complex64::new(3.0, 0.5), 1, &[-2.0, 0.0, 1.0]).unwrap();
        assert!(r.deviation < 1e-12);
        assert!(r.deviation_printed > 1e-3);
    }

    #[test]
    fn sigma_rho_identities() {
        let spec = PotentialSpec::milson(Complex64::new(7.75, 3.0), 1.0, 2.0).unwrap();
        let sr = milson_sigma_rho(&spec, -1.5).unwrap();
        assert!(sr.sum_deviation < 1e-12);
        assert!(sr.sum_deviation_printed > 1.0);
        assert!((sr.product.re + spec.h0().im).abs() < 1e-12);
        assert!(sr.product.im.abs() < 1e-12);
    }

    #[test]
    fn scan_validation() {
        assert!(nodeless_scan((1.0, 2.0), (0.0, 1.0), (16, 16), 3).is_err());
        assert!(nodeless_scan((1.0, 2.0), (0.0, 1.0), (8, 16), 2).is_err());
    }

    #[test]
    fn gauge_jet_matches_finite_differences() {
        let phi = GaugedPolynomial { p: -1.3, q: 0.7, poly: RealPolynomial::new(vec![0.5, -1.0, 2.0]) };
        let h = 1e-4;
        for eta in [-2.0, 0.3, 1.7] {
            let (v, d1, d2) = phi.jet(eta);
            let (vp, vm) = (phi.value(eta + h), phi.value(eta - h));
            assert!((d1 - (vp - vm) / (2.0 * h)).abs() < 1e-7);
            assert!((d2 - (vp - 2.0 * v + vm) / (h * h)).abs() < 1e-5);
        }
    }
}
