//! Darboux (SUSY) partners `V - 2 (ln psi)''` of the family potentials.

use alloc::vec::Vec;

use crate::geometry::{eta_prime_jet, potential_at_eta, potential_grid, PotentialSpec, VariableMap};
use crate::oracle::{count_sign_changes, shoot_from_left};
use crate::roots::count_distinct_real_roots;
use crate::spectral::{enumerate_bound_spectrum, AehKind, AehSolution, BoundState, GaugedPolynomial};
use crate::{Error, Result};

/// Where a factorization function came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FfSource {
    Aeh { kind: AehKind, order: usize },
    Bound { n: usize },
    Custom,
}

/// Factorization function `psi = Phi / sqrt(eta')` given by its `eta` form.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorizationFunction {
    pub phi: GaugedPolynomial,
    pub energy: f64,
    pub source: FfSource,
}

impl FactorizationFunction {
    /// Unchecked; [`partner_potential`] rejects functions with zeros.
    pub fn new(phi: GaugedPolynomial, energy: f64) -> Self {
        Self { phi, energy, source: FfSource::Custom }
    }

    pub fn from_aeh(sol: &AehSolution) -> Result<Self> {
        if sol.real_roots > 0 {
            return Err(Error::NodeDetected { count: sol.real_roots });
        }
        Ok(Self {
            phi: positive(&sol.phi),
            energy: sol.energy,
            source: FfSource::Aeh { kind: sol.kind, order: sol.order },
        })
    }

    pub fn from_bound_state(state: &BoundState) -> Result<Self> {
        if state.nodes > 0 {
            return Err(Error::NodeDetected { count: state.nodes });
        }
        Ok(Self { phi: positive(&state.phi), energy: state.level.energy, source: FfSource::Bound { n: state.level.n } })
    }

    /// `d^2/dx^2 ln psi` at a given `eta`.
    pub fn log_second_derivative(&self, spec: &PotentialSpec, eta: f64) -> f64 {
        let (f, f1, f2) = eta_prime_jet(spec.tp(), eta);
        let (p1, p2) = self.phi.log_derivatives(eta);
        let l1 = p1 - 0.5 * f1 / f;
        let l2 = p2 - 0.5 * (f2 / f - (f1 / f) * (f1 / f));
        f * (f1 * l1 + f * l2)
    }
}

fn positive(phi: &GaugedPolynomial) -> GaugedPolynomial {
    if phi.poly.eval(&0.0) < 0.0 {
        phi.scaled(-1.0)
    } else {
        phi.clone()
    }
}

/// Parent and partner potentials sampled on the map grid.
#[derive(Clone, Debug, PartialEq)]
pub struct PartnerPotential {
    pub xs: Vec<f64>,
    pub parent: Vec<f64>,
    pub partner: Vec<f64>,
    pub ff_energy: f64,
}

/// Partner value at a single `eta`.
pub fn partner_at_eta(spec: &PotentialSpec, ff: &FactorizationFunction, eta: f64) -> f64 {
    potential_at_eta(spec, eta) - 2.0 * ff.log_second_derivative(spec, eta)
}

pub fn partner_potential(spec: &PotentialSpec, ff: &FactorizationFunction, map: &VariableMap) -> Result<PartnerPotential> {
    let count = count_distinct_real_roots(&ff.phi.poly)?;
    if count > 0 {
        return Err(Error::NodeDetected { count });
    }
    let etas = map.etas();
    let samples: Vec<f64> = etas.iter().map(|&e| ff.phi.poly.eval(&e)).collect();
    let changes = count_sign_changes(&samples)?;
    if changes > 0 {
        return Err(Error::NodeDetected { count: changes });
    }
    let parent: Vec<f64> = etas.iter().map(|&e| potential_at_eta(spec, e)).collect();
    let partner = etas
        .iter()
        .zip(&parent)
        .map(|(&e, v)| v - 2.0 * ff.log_second_derivative(spec, e))
        .collect();
    Ok(PartnerPotential { xs: map.xs(), parent, partner, ff_energy: ff.energy })
}

/// Even, nodeless solution irregular at both ends.
#[derive(Clone, Debug, PartialEq)]
pub struct IrregularSolution {
    pub xs: Vec<f64>,
    /// Normalized to a maximum of one.
    pub values: Vec<f64>,
    pub energy: f64,
}

/// Builds `psi_a(x) + psi_a(-x)` from the solution decaying at the left end,
/// for a symmetric potential (`h_I = 0`) and an energy below the ground level.
pub fn symmetric_irregular_solution(spec: &PotentialSpec, eps: f64, map: &VariableMap) -> Result<IrregularSolution> {
    if spec.h0().im != 0.0 {
        return Err(Error::PreconditionViolated("potential must be even (h_I = 0)"));
    }
    let ground = enumerate_bound_spectrum(spec)?.levels.first().map_or(0.0, |l| l.energy);
    if !(eps < ground) {
        return Err(Error::PreconditionViolated("energy must lie below the ground level"));
    }
    let grid = potential_grid(spec, map)?;
    let left = shoot_from_left(&grid, eps);
    let n = left.len();
    let mut sym: Vec<f64> = (0..n).map(|i| left[i] + left[n - 1 - i]).collect();
    let max = sym.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(max > 0.0) || !max.is_finite() {
        return Err(Error::NonFinite("irregular solution"));
    }
    sym.iter_mut().for_each(|v| *v /= max);
    if sym.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::NodeDetected { count: count_sign_changes(&sym).unwrap_or(1).max(1) });
    }
    Ok(IrregularSolution { xs: map.xs(), values: sym, energy: eps })
}
