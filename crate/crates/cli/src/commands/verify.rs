//! Constructive spectrum against the Numerov oracle.

use routh_core::oracle::numerov_bound_states;
use routh_core::roots::count_distinct_real_roots;
use routh_core::spectral::{enumerate_bound_spectrum, PINNED_CONVENTION};
use serde::Serialize;

use super::{pinned, rel_dev, ConventionRecord, Context, GridRecord};
use crate::error::CliError;

const DEFAULT_TOL: f64 = 1e-4;

#[derive(Serialize)]
struct LevelCheck {
    n: usize,
    constructive: f64,
    numerov: Option<f64>,
    closed_form: Option<f64>,
    rel_dev: Option<f64>,
    nodes_exact: usize,
    nodes_numerov: Option<usize>,
    pass: bool,
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    inputs_digest: String,
    tol: f64,
    passed: bool,
    count_constructive: usize,
    count_numerov: usize,
    count_formula: usize,
    formula_discrepancy: bool,
    convention: ConventionRecord,
    grid: GridRecord,
    levels: Vec<LevelCheck>,
}

pub fn run(ctx: &mut Context) -> Result<bool, CliError> {
    let tol = ctx.tol_or(DEFAULT_TOL);
    let spec = ctx.loaded.spec;
    let spectrum = enumerate_bound_spectrum(&spec)?;
    let map = ctx.map(&spec, spectrum.levels.last().map(|l| l.energy))?;
    let grid = ctx.grid(&spec, &map)?;
    let numerov = numerov_bound_states(&grid, 1e-12)?;
    let closed = ctx.loaded.gendenshtein().map(|(a, _)| a);

    let mut levels = Vec::new();
    for level in &spectrum.levels {
        let (_, phi) = PINNED_CONVENTION.phi(level.lambda, level.n)?;
        let nodes_exact = count_distinct_real_roots(&phi.poly)?;
        let est = numerov.get(level.n);
        let closed_form = closed.map(|a| -(a - level.n as f64).powi(2));
        let dev = est.map(|e| rel_dev(e.energy, level.energy));
        let closed_ok = closed_form.is_none_or(|c| rel_dev(level.energy, c) <= tol);
        let pass = dev.is_some_and(|d| d <= tol)
            && closed_ok
            && nodes_exact == level.n
            && est.is_some_and(|e| e.nodes == level.n);
        levels.push(LevelCheck {
            n: level.n,
            constructive: level.energy,
            numerov: est.map(|e| e.energy),
            closed_form,
            rel_dev: dev,
            nodes_exact,
            nodes_numerov: est.map(|e| e.nodes),
            pass,
        });
    }
    let passed = levels.iter().all(|l| l.pass) && numerov.len() == spectrum.levels.len();
    let report = Report {
        command: "verify",
        inputs_digest: ctx.digest("verify"),
        tol,
        passed,
        count_constructive: spectrum.count_constructive,
        count_numerov: numerov.len(),
        count_formula: spectrum.count_formula,
        formula_discrepancy: spectrum.formula_discrepancy,
        convention: pinned(),
        grid: GridRecord::of(&map),
        levels,
    };
    ctx.out.write_json("verify.json", &report)?;
    Ok(passed)
}
