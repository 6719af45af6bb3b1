//! Nodelessness map of the order-m type-d solution over Scarf II parameters.

use std::thread;

use routh_core::spectral::{scan_axis, scan_point, ScanPoint};
use serde::Serialize;

use super::Context;
use crate::config::{ConfigError, ScanConfig};
use crate::error::CliError;
use crate::output::{flag, num};

#[derive(Serialize)]
struct CellRecord {
    a: f64,
    b: f64,
    root_count: Option<usize>,
    sign_changes: Option<usize>,
    empirical_nodeless: Option<bool>,
    paper_6_15: Option<bool>,
    canonical_disc: Option<bool>,
    agrees_closed_form: Option<bool>,
    agrees_disc: Option<bool>,
    consistent: Option<bool>,
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    inputs_digest: String,
    m: usize,
    a_range: [f64; 2],
    b_range: [f64; 2],
    resolution: [usize; 2],
    cells: usize,
    empty_cells: usize,
    nodeless: usize,
    inconsistent: usize,
    agree_closed_form: usize,
    disagree_closed_form: usize,
    agree_disc: usize,
    disagree_disc: usize,
    consistent: bool,
    map: Vec<CellRecord>,
}

fn count(points: &[ScanPoint], pred: impl Fn(&routh_core::spectral::ScanCell) -> bool) -> usize {
    points.iter().filter_map(|p| p.cell).filter(|c| pred(c)).count()
}

pub fn run(ctx: &mut Context) -> Result<bool, CliError> {
    let cfg: ScanConfig = ctx.loaded.config.scan.clone().ok_or_else(|| ConfigError {
        location: "scan".into(),
        message: "scan-nodeless needs a scan block".into(),
    })?;
    let axis_a = scan_axis((cfg.a_range[0], cfg.a_range[1]), cfg.resolution[0]);
    let axis_b = scan_axis((cfg.b_range[0], cfg.b_range[1]), cfg.resolution[1]);
    let jobs: Vec<(f64, f64)> = axis_a.iter().flat_map(|&a| axis_b.iter().map(move |&b| (a, b))).collect();
    let points = run_parallel(&jobs, cfg.m, ctx.workers)?;

    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| {
            let c = p.cell;
            vec![
                num(p.a),
                num(p.b),
                flag(c.map(|c| c.empirical_nodeless)),
                flag(c.and_then(|c| c.paper_6_15)),
                flag(c.and_then(|c| c.canonical_disc)),
            ]
        })
        .collect();
    let header: Vec<String> =
        ["a", "b", "empirical_nodeless", "paper_6_15", "canonical_disc"].iter().map(|s| s.to_string()).collect();
    ctx.out.write_csv("scan.csv", &header, &rows)?;

    let inconsistent = count(&points, |c| !c.consistent);
    let report = Report {
        command: "scan-nodeless",
        inputs_digest: ctx.digest("scan-nodeless"),
        m: cfg.m,
        a_range: cfg.a_range,
        b_range: cfg.b_range,
        resolution: cfg.resolution,
        cells: points.len(),
        empty_cells: points.iter().filter(|p| p.cell.is_none()).count(),
        nodeless: count(&points, |c| c.empirical_nodeless),
        inconsistent,
        agree_closed_form: count(&points, |c| c.agrees_with_closed_form() == Some(true)),
        disagree_closed_form: count(&points, |c| c.agrees_with_closed_form() == Some(false)),
        agree_disc: count(&points, |c| c.agrees_with_discriminant() == Some(true)),
        disagree_disc: count(&points, |c| c.agrees_with_discriminant() == Some(false)),
        consistent: inconsistent == 0,
        map: points
            .iter()
            .map(|p| CellRecord {
                a: p.a,
                b: p.b,
                root_count: p.cell.map(|c| c.root_count),
                sign_changes: p.cell.map(|c| c.sign_changes),
                empirical_nodeless: p.cell.map(|c| c.empirical_nodeless),
                paper_6_15: p.cell.and_then(|c| c.paper_6_15),
                canonical_disc: p.cell.and_then(|c| c.canonical_disc),
                agrees_closed_form: p.cell.and_then(|c| c.agrees_with_closed_form()),
                agrees_disc: p.cell.and_then(|c| c.agrees_with_discriminant()),
                consistent: p.cell.map(|c| c.consistent),
            })
            .collect(),
    };
    ctx.out.write_json("scan_report.json", &report)?;
    Ok(inconsistent == 0)
}

/// Evaluates the points in contiguous chunks, one per worker; the output
/// order does not depend on the worker count.
fn run_parallel(jobs: &[(f64, f64)], m: usize, workers: usize) -> Result<Vec<ScanPoint>, CliError> {
    let workers = workers.clamp(1, jobs.len().max(1));
    let chunk = jobs.len().div_ceil(workers).max(1);
    let results: Vec<routh_core::Result<Vec<ScanPoint>>> = thread::scope(|s| {
        let handles: Vec<_> = jobs
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(|&(a, b)| scan_point(a, b, m)).collect()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("scan worker panicked")).collect()
    });
    let mut out = Vec::with_capacity(jobs.len());
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}
