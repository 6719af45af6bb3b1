//! Darboux partner from an auxiliary solution, checked against Numerov.

use routh_core::darboux::{partner_potential, FactorizationFunction};
use routh_core::oracle::{numerov_bound_states, Grid1D};
use routh_core::spectral::{aeh_solution, enumerate_bound_spectrum, AehKind};
use serde::Serialize;

use super::{rel_dev, Context, GridRecord};
use crate::config::SolutionKind;
use crate::error::CliError;
use crate::output::num;

const DEFAULT_TOL: f64 = 1e-3;

#[derive(Serialize)]
struct Report {
    command: &'static str,
    inputs_digest: String,
    kind: SolutionKind,
    order: usize,
    factorization_energy: f64,
    factorization_lambda: [f64; 2],
    /// `insert` when the energy is new, `erase` when it is a parent level.
    action: &'static str,
    parent_levels: Vec<f64>,
    expected_levels: Vec<f64>,
    numerov_levels: Vec<f64>,
    max_rel_dev: Option<f64>,
    tol: f64,
    passed: bool,
    grid: GridRecord,
}

pub fn run(ctx: &mut Context) -> Result<bool, CliError> {
    let cfg = ctx.loaded.config.partner.clone().unwrap_or_default();
    let tol = ctx.tol_or(DEFAULT_TOL);
    let spec = ctx.loaded.spec;
    let parent = enumerate_bound_spectrum(&spec)?.energies();
    let kind = match cfg.kind {
        SolutionKind::C => AehKind::C,
        SolutionKind::D => AehKind::D,
    };
    let sol = aeh_solution(&spec, kind, cfg.m)?;
    let ff = FactorizationFunction::from_aeh(&sol).map_err(|e| {
        CliError::Numeric(format!("{:?}{} solution cannot factorize: {e}", cfg.kind, cfg.m).to_lowercase())
    })?;

    let matched = parent.iter().position(|e| (e - ff.energy).abs() <= 1e-9 * e.abs().max(1.0));
    let mut expected = parent.clone();
    let action = match matched {
        Some(i) => {
            expected.remove(i);
            "erase"
        }
        None => {
            expected.push(ff.energy);
            expected.sort_by(f64::total_cmp);
            "insert"
        }
    };
    let shallowest = expected.iter().chain(&parent).copied().fold(f64::NEG_INFINITY, f64::max);
    let map = ctx.map(&spec, shallowest.is_finite().then_some(shallowest))?;
    let partner = partner_potential(&spec, &ff, &map)?;
    let grid = Grid1D::new(-map.x_max(), map.x_max(), partner.partner.clone())?;
    let numerov: Vec<f64> = numerov_bound_states(&grid, 1e-12)?.into_iter().map(|l| l.energy).collect();

    let max_dev = (numerov.len() == expected.len())
        .then(|| numerov.iter().zip(&expected).map(|(n, e)| rel_dev(*n, *e)).fold(0.0, f64::max));
    let passed = max_dev.is_some_and(|d| d <= tol);

    let header: Vec<String> = ["x", "V_parent", "V_partner"].iter().map(|s| s.to_string()).collect();
    let rows: Vec<Vec<String>> = (0..partner.xs.len())
        .map(|i| vec![num(partner.xs[i]), num(partner.parent[i]), num(partner.partner[i])])
        .collect();
    ctx.out.write_csv("partner.csv", &header, &rows)?;
    let report = Report {
        command: "partner",
        inputs_digest: ctx.digest("partner"),
        kind: cfg.kind,
        order: cfg.m,
        factorization_energy: ff.energy,
        factorization_lambda: [sol.lambda.re, sol.lambda.im],
        action,
        parent_levels: parent,
        expected_levels: expected,
        numerov_levels: numerov,
        max_rel_dev: max_dev,
        tol,
        passed,
        grid: GridRecord::of(&map),
    };
    ctx.out.write_json("partner_report.json", &report)?;
    Ok(passed)
}
