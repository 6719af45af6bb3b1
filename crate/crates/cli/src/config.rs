//! Run configuration: one JSON file per run.

use std::fmt;
use std::path::Path;

use routh_core::geometry::{PotentialSpec, TangentPoly};
use routh_core::spectral::gendenshtein_params;
use routh_core::Complex64;
use serde::{Deserialize, Serialize};

pub const DEFAULT_GRID_POINTS: usize = 8193;
const MIN_GRID_POINTS: usize = 257;
const MAX_GRID_POINTS: usize = 2_000_001;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub potential: PotentialConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partner: Option<PartnerConfig>,
}

/// Exactly one potential block.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialConfig {
    Gendenshtein(GendenshteinBlock),
    Milson(MilsonBlock),
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GendenshteinBlock {
    pub a: f64,
    pub b: f64,
    /// Must equal `2 h_R + 1` if given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub o00: Option<f64>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MilsonBlock {
    pub h0_re: f64,
    pub h0_im: f64,
    pub kappa_plus: f64,
    /// Leading coefficient of the tangent polynomial.
    #[serde(default = "unit")]
    pub scale: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub o00: Option<f64>,
}

fn unit() -> f64 {
    1.0
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// Half-width in `x`; chosen from the potential's decay when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub a_range: [f64; 2],
    pub b_range: [f64; 2],
    #[serde(default = "default_resolution")]
    pub resolution: [usize; 2],
    #[serde(default = "default_scan_order")]
    pub m: usize,
}

fn default_resolution() -> [usize; 2] {
    [16, 16]
}

fn default_scan_order() -> usize {
    2
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum SolutionKind {
    C,
    D,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PartnerConfig {
    pub kind: SolutionKind,
    #[serde(default)]
    pub m: usize,
}

impl Default for PartnerConfig {
    fn default() -> Self {
        Self { kind: SolutionKind::D, m: 0 }
    }
}

/// Invalid configuration, with the offending location or field.
#[derive(Debug)]
pub struct ConfigError {
    pub location: String,
    pub message: String,
}

impl ConfigError {
    fn field(field: &str, message: impl Into<String>) -> Self {
        Self { location: field.to_string(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// A parsed and validated configuration.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub config: RunConfig,
    pub spec: PotentialSpec,
    /// Compact JSON of the parsed configuration, the basis of the digest.
    pub canonical: String,
}

impl Loaded {
    pub fn grid_points(&self) -> usize {
        self.config.grid.n.unwrap_or(DEFAULT_GRID_POINTS)
    }

    /// Scarf II parameters, for the closed-form comparisons.
    pub fn gendenshtein(&self) -> Option<(f64, f64)> {
        match &self.config.potential {
            PotentialConfig::Gendenshtein(g) => Some((g.a, g.b)),
            PotentialConfig::Milson(_) => None,
        }
    }
}

pub fn load(path: &Path) -> Result<Loaded, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError { location: path.display().to_string(), message: e.to_string() })?;
    parse(&text, &path.display().to_string())
}

pub fn parse(text: &str, origin: &str) -> Result<Loaded, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let config: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let inner = e.inner();
        let path = e.path().to_string();
        let field = if path == "." { String::new() } else { format!(" {path}") };
        ConfigError {
            location: format!("{origin}:{}:{}{field}", inner.line(), inner.column()),
            message: inner.to_string(),
        }
    })?;
    let spec = validate(&config)?;
    let canonical = serde_json::to_string(&config).expect("configuration serializes");
    Ok(Loaded { config, spec, canonical })
}

fn finite(field: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ConfigError::field(field, "must be finite"))
    }
}

fn validate(config: &RunConfig) -> Result<PotentialSpec, ConfigError> {
    let spec = match &config.potential {
        PotentialConfig::Gendenshtein(g) => {
            finite("potential.gendenshtein.a", g.a)?;
            finite("potential.gendenshtein.b", g.b)?;
            let params = gendenshtein_params(g.a, g.b)
                .map_err(|e| ConfigError::field("potential.gendenshtein.a", e.to_string()))?;
            match g.o00 {
                Some(o) => PotentialSpec::with_o00(params.spec.h0(), o, *params.spec.tp())
                    .map_err(|e| ConfigError::field("potential.gendenshtein.o00", e.to_string()))?,
                None => params.spec,
            }
        }
        PotentialConfig::Milson(m) => {
            let h0 = Complex64::new(finite("potential.milson.h0_re", m.h0_re)?, finite("potential.milson.h0_im", m.h0_im)?);
            let tp = TangentPoly::symmetric(finite("potential.milson.scale", m.scale)?, finite("potential.milson.kappa_plus", m.kappa_plus)?)
                .map_err(|e| ConfigError::field("potential.milson.kappa_plus", e.to_string()))?;
            match m.o00 {
                Some(o) => PotentialSpec::with_o00(h0, o, tp),
                None => PotentialSpec::new(h0, tp),
            }
            .map_err(|e| ConfigError::field("potential.milson.o00", e.to_string()))?
        }
    };
    if let Some(x) = config.grid.x_max {
        if !(x.is_finite() && x > 0.0) {
            return Err(ConfigError::field("grid.x_max", "must be positive and finite"));
        }
    }
    if let Some(n) = config.grid.n {
        if !(MIN_GRID_POINTS..=MAX_GRID_POINTS).contains(&n) {
            return Err(ConfigError::field("grid.n", format!("must lie in {MIN_GRID_POINTS}..={MAX_GRID_POINTS}")));
        }
    }
    if let Some(t) = config.tol {
        check_tol("tol", t)?;
    }
    if let Some(s) = &config.scan {
        validate_scan(s)?;
    }
    Ok(spec)
}

pub fn check_tol(field: &str, t: f64) -> Result<f64, ConfigError> {
    if t.is_finite() && t > 0.0 {
        Ok(t)
    } else {
        Err(ConfigError::field(field, "tolerance must be positive and finite"))
    }
}

fn validate_scan(s: &ScanConfig) -> Result<(), ConfigError> {
    for (name, r) in [("scan.a_range", s.a_range), ("scan.b_range", s.b_range)] {
        if !(r[0].is_finite() && r[1].is_finite() && r[0] <= r[1]) {
            return Err(ConfigError::field(name, "expected finite [low, high] with low <= high"));
        }
    }
    if s.a_range[0] <= 0.0 {
        return Err(ConfigError::field("scan.a_range", "a must be positive"));
    }
    if s.resolution[0] < 2 || s.resolution[1] < 2 {
        return Err(ConfigError::field("scan.resolution", "at least 2 points per axis"));
    }
    if s.m < 2 || s.m % 2 == 1 {
        return Err(ConfigError::field("scan.m", "order must be even and at least 2"));
    }
    Ok(())
}
