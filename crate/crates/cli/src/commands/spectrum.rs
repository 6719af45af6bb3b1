use routh_core::spectral::{assemble_level, enumerate_bound_spectrum, Spectrum};
use serde::Serialize;

use super::{pinned, ConventionRecord, Context, GridRecord, PotentialRecord};
use crate::error::CliError;
use crate::output::num;

#[derive(Serialize)]
struct LevelRecord {
    n: usize,
    energy: f64,
    lambda_re: f64,
    lambda_im: f64,
    nodes: usize,
    residual: f64,
    norm: f64,
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    inputs_digest: String,
    potential: PotentialRecord,
    /// `[re, im]`, absent when `h0 + 1` has no root with positive real part.
    lambda0: Option<[f64; 2]>,
    count_constructive: usize,
    count_formula: Option<usize>,
    formula_discrepancy: bool,
    diagnostics: Vec<String>,
    convention: ConventionRecord,
    grid: GridRecord,
    outputs: Vec<String>,
    levels: Vec<LevelRecord>,
}

pub fn run(ctx: &mut Context) -> Result<bool, CliError> {
    let spec = ctx.loaded.spec;
    let spectrum: Option<Spectrum> = match spec.lambda0() {
        Ok(_) => Some(enumerate_bound_spectrum(&spec)?),
        Err(_) => None,
    };
    let levels = spectrum.as_ref().map(|s| s.levels.clone()).unwrap_or_default();
    let map = ctx.map(&spec, levels.last().map(|l| l.energy))?;
    let states = levels.iter().map(|l| assemble_level(&spec, l, &map)).collect::<Result<Vec<_>, _>>()?;

    let mut header = vec!["x".to_string()];
    header.extend((0..states.len()).map(|k| format!("psi_{k}")));
    let rows: Vec<Vec<String>> = (0..map.len())
        .map(|i| {
            let mut r = vec![num(map.x(i))];
            r.extend(states.iter().map(|s| num(s.psi[i])));
            r
        })
        .collect();
    ctx.out.write_csv("eigenfunctions.csv", &header, &rows)?;

    let mut outputs = ctx.out.written().to_vec();
    outputs.push("spectrum.json".into());
    let report = Report {
        command: "spectrum",
        inputs_digest: ctx.digest("spectrum"),
        potential: PotentialRecord::of(&spec),
        lambda0: spectrum.as_ref().map(|s| [s.lambda0.re, s.lambda0.im]),
        count_constructive: states.len(),
        count_formula: spectrum.as_ref().map(|s| s.count_formula),
        formula_discrepancy: spectrum.as_ref().is_some_and(|s| s.formula_discrepancy),
        diagnostics: spectrum.as_ref().map(|s| s.diagnostics.iter().map(|d| format!("{d:?}")).collect()).unwrap_or_default(),
        convention: pinned(),
        grid: GridRecord::of(&map),
        outputs,
        levels: states
            .iter()
            .map(|s| LevelRecord {
                n: s.level.n,
                energy: s.level.energy,
                lambda_re: s.level.lambda.re,
                lambda_im: s.level.lambda.im,
                nodes: s.nodes,
                residual: s.residual,
                norm: s.norm,
            })
            .collect(),
    };
    ctx.out.write_json("spectrum.json", &report)?;
    Ok(true)
}
