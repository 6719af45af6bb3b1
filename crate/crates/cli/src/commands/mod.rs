//! One module per subcommand. Each returns whether its checks passed.

mod identities;
mod partner;
mod scan;
mod spectrum;
mod verify;

use routh_core::geometry::{build_variable_map, decay_x_max, potential_grid, PotentialSpec, VariableMap};
use routh_core::oracle::Grid1D;
use routh_core::spectral::{IndexConvention, PINNED_CONVENTION};
use serde::Serialize;

use crate::config::Loaded;
use crate::error::CliError;
use crate::output::{inputs_digest, OutDir};

pub use identities::run as identities;
pub use partner::run as partner;
pub use scan::run as scan_nodeless;
pub use spectrum::run as spectrum;
pub use verify::run as verify;

/// Potentials are treated as negligible beyond this magnitude.
const DECAY_THRESHOLD: f64 = 1e-9;
/// Half-width in units of the slowest decay length `1/sqrt|eps|`.
const DECAY_LENGTHS: f64 = 14.0;
const MAX_AUTO_HALF_WIDTH: f64 = 400.0;

pub struct Context {
    pub loaded: Loaded,
    pub out: OutDir,
    pub tol: Option<f64>,
    pub workers: usize,
}

impl Context {
    pub fn digest(&self, command: &str) -> String {
        inputs_digest(command, &self.loaded.canonical, self.tol)
    }

    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.or(self.loaded.config.tol).unwrap_or(default)
    }

    /// Map over the configured or automatic half-width. The automatic
    /// width covers the potential's decay and `shallowest`, the least bound
    /// energy that must fit.
    pub fn map(&self, spec: &PotentialSpec, shallowest: Option<f64>) -> Result<VariableMap, CliError> {
        let x_max = match self.loaded.config.grid.x_max {
            Some(x) => x,
            None => {
                let decay = decay_x_max(spec, DECAY_THRESHOLD)?;
                let tail = shallowest.filter(|e| *e < 0.0).map_or(0.0, |e| DECAY_LENGTHS / (-e).sqrt());
                decay.max(tail).min(MAX_AUTO_HALF_WIDTH)
            }
        };
        Ok(build_variable_map(spec.tp(), x_max, self.loaded.grid_points())?)
    }

    pub fn grid(&self, spec: &PotentialSpec, map: &VariableMap) -> Result<Grid1D, CliError> {
        Ok(potential_grid(spec, map)?)
    }
}

#[derive(Serialize)]
pub struct ConventionRecord {
    pub index_map: &'static str,
    pub exp_sign: i8,
}

impl From<IndexConvention> for ConventionRecord {
    fn from(c: IndexConvention) -> Self {
        Self { index_map: c.candidate.label(), exp_sign: c.exp_sign }
    }
}

pub fn pinned() -> ConventionRecord {
    PINNED_CONVENTION.into()
}

#[derive(Serialize)]
pub struct GridRecord {
    pub x_max: f64,
    pub n: usize,
}

impl GridRecord {
    pub fn of(map: &VariableMap) -> Self {
        Self { x_max: map.x_max(), n: map.len() }
    }
}

#[derive(Serialize)]
pub struct PotentialRecord {
    pub h0_re: f64,
    pub h0_im: f64,
    pub o00: f64,
    pub scale: f64,
    pub kappa_plus: Option<f64>,
}

impl PotentialRecord {
    pub fn of(spec: &PotentialSpec) -> Self {
        let tp = spec.tp();
        Self { h0_re: spec.h0().re, h0_im: spec.h0().im, o00: spec.o00(), scale: tp.leading(), kappa_plus: tp.kappa() }
    }
}

/// `|a - b| / |b|`, or the absolute difference when `b` is zero.
pub fn rel_dev(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        (a - b).abs()
    } else {
        (a - b).abs() / b.abs()
    }
}
