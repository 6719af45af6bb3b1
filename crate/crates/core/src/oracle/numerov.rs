//! Numerov shooting with Sturm node counting.
//!
//! For a trial energy `E` the equation `psi'' = (V - E) psi` is integrated
//! inward from both grid ends with decaying-exponential starting values and
//! matched at a classical turning point. The number of eigenvalues below `E`
//! is the total node count of the two pieces plus one if the logarithmic
//! derivatives mismatch in the negative direction. Eigenvalues are located by
//! bisection on that count.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::nodes::count_sign_changes;
use crate::{Error, Result};

const MIN_POINTS: usize = 256;
const RESCALE: f64 = 1e100;
const DECAY_LIMIT: f64 = 1e-2;
const SCAN_POINTS: usize = 64;

/// Potential sampled on a uniform grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    values: Vec<f64>,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < MIN_POINTS {
            return Err(Error::InvalidParameter("grid needs at least 256 points"));
        }
        if !(x_max > x_min) {
            return Err(Error::InvalidParameter("grid bounds"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("potential sample"));
        }
        Ok(Self { x_min, x_max, values })
    }

    pub fn from_fn<F: FnMut(f64) -> f64>(x_min: f64, x_max: f64, n: usize, mut f: F) -> Result<Self> {
        let h = (x_max - x_min) / (n.max(2) - 1) as f64;
        let values = (0..n).map(|i| f(x_min + i as f64 * h)).collect();
        Self::new(x_min, x_max, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.values.len() - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.spacing()
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn v_min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    fn end_min(&self) -> f64 {
        self.values[0].min(self.values[self.values.len() - 1])
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenEstimate {
    pub energy: f64,
    /// Sign changes of the matched eigenfunction.
    pub nodes: usize,
    /// Final bisection bracket.
    pub bracket: (f64, f64),
}

fn start_pair(f_end: f64, h: f64) -> (f64, f64) {
    let k = f_end.max(0.0).sqrt();
    (1.0, (k * h).exp())
}

#[inline]
fn numerov_next(p_prev: f64, p_cur: f64, f_prev: f64, f_cur: f64, f_next: f64, h2: f64) -> f64 {
    let g_prev = 1.0 - h2 * f_prev / 12.0;
    let g_next = 1.0 - h2 * f_next / 12.0;
    ((2.0 + 10.0 * h2 * f_cur / 12.0) * p_cur - g_prev * p_prev) / g_next
}

fn index(start: usize, dir: isize, j: usize) -> usize {
    (start as isize + dir * j as isize) as usize
}

/// Marches `count >= 2` points from `start`; returns the sign changes among
/// the first `node_span` points and the last two values.
fn march(v: &[f64], start: usize, dir: isize, count: usize, node_span: usize, h: f64, e: f64) -> (usize, f64, f64) {
    let h2 = h * h;
    let f = |j: usize| v[index(start, dir, j)] - e;
    let (mut p0, mut p1) = start_pair(f(0), h);
    let mut nodes = 0;
    for j in 1..count - 1 {
        let p2 = numerov_next(p0, p1, f(j - 1), f(j), f(j + 1), h2);
        if j + 1 < node_span && (p2 < 0.0) != (p1 < 0.0) {
            nodes += 1;
        }
        p0 = p1;
        p1 = p2;
        if p1.abs() > RESCALE {
            p0 /= RESCALE;
            p1 /= RESCALE;
        }
    }
    (nodes, p0, p1)
}

fn march_full(v: &[f64], start: usize, dir: isize, count: usize, h: f64, e: f64) -> Vec<f64> {
    let h2 = h * h;
    let f = |j: usize| v[index(start, dir, j)] - e;
    let (p0, p1) = start_pair(f(0), h);
    let mut out = Vec::with_capacity(count);
    out.push(p0);
    out.push(p1);
    for j in 1..count - 1 {
        let p2 = numerov_next(out[j - 1], out[j], f(j - 1), f(j), f(j + 1), h2);
        out.push(p2);
        if p2.abs() > RESCALE {
            out.iter_mut().for_each(|p| *p /= RESCALE);
        }
    }
    out
}

/// Classical turning point nearest `x = 0`, or the potential minimum.
fn matching_index(grid: &Grid1D, e: f64) -> usize {
    let v = &grid.values;
    let n = v.len();
    let mut best: Option<(usize, f64)> = None;
    for i in 0..n - 1 {
        if (v[i] - e < 0.0) != (v[i + 1] - e < 0.0) {
            let d = grid.x(i).abs();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
    }
    let m = match best {
        Some((i, _)) => i,
        None => (0..n).min_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap_or(n / 2),
    };
    m.clamp(2, n - 4)
}

/// Number of eigenvalues strictly below `e`.
pub fn sturm_count(grid: &Grid1D, e: f64) -> usize {
    let v = &grid.values;
    let n = v.len();
    let h = grid.spacing();
    let m = matching_index(grid, e);
    let (nl, l_m, l_m1) = march(v, 0, 1, m + 2, m + 1, h, e);
    let (nr, r_m1, r_m) = march(v, n - 1, -1, n - m, n - m, h, e);
    let rl = l_m1 / l_m;
    let rr = r_m1 / r_m;
    nl + nr + usize::from(rl < rr)
}

/// Eigenfunction at energy `e`, normalized to unit L2 norm and positive at
/// its first significant sample.
pub fn numerov_eigenfunction(grid: &Grid1D, e: f64) -> Result<Vec<f64>> {
    let v = &grid.values;
    let n = v.len();
    let h = grid.spacing();
    let m = matching_index(grid, e);
    let left = march_full(v, 0, 1, m + 1, h, e);
    let right = march_full(v, n - 1, -1, n - m, h, e);
    let (lm, rm) = (left[m], right[n - 1 - m]);
    if lm == 0.0 || rm == 0.0 {
        return Err(Error::NotConverged("eigenfunction vanishes at the matching point"));
    }
    let s = lm / rm;
    let mut psi = vec![0.0; n];
    psi[..=m].copy_from_slice(&left);
    for (j, r) in right.iter().enumerate().take(n - m - 1) {
        psi[n - 1 - j] = r * s;
    }
    let norm = psi.iter().map(|p| p * p).sum::<f64>() * h;
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::NonFinite("eigenfunction norm"));
    }
    let max = psi.iter().fold(0.0f64, |a, p| a.max(p.abs()));
    let first = psi.iter().find(|p| p.abs() > 1e-6 * max).copied().unwrap_or(1.0);
    let k = first.signum() / norm.sqrt();
    psi.iter_mut().for_each(|p| *p *= k);
    Ok(psi)
}

/// Solution started with a decaying exponential at the left end and marched
/// across the whole grid.
pub fn shoot_from_left(grid: &Grid1D, e: f64) -> Vec<f64> {
    march_full(&grid.values, 0, 1, grid.len(), grid.spacing(), e)
}

fn bisect_level(grid: &Grid1D, n: usize, mut lo: f64, mut hi: f64, tol: f64) -> Result<EigenEstimate> {
    let mut iter = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(grid, mid) <= n {
            lo = mid;
        } else {
            hi = mid;
        }
        iter += 1;
        if iter > 200 {
            return Err(Error::NotConverged("eigenvalue bisection"));
        }
    }
    let energy = 0.5 * (lo + hi);
    let psi = numerov_eigenfunction(grid, energy)?;
    Ok(EigenEstimate { energy, nodes: count_sign_changes(&psi)?, bracket: (lo, hi) })
}

fn energy_ceiling(grid: &Grid1D) -> f64 {
    let cap = grid.end_min();
    cap - 1e-10 * cap.abs().max(1.0)
}

/// Lowest `count` eigenvalues below the smaller end value of the potential,
/// bracketed to `tol` starting from a coarse energy scan.
pub fn numerov_spectrum(grid: &Grid1D, count: usize, tol: f64) -> Result<Vec<EigenEstimate>> {
    spectrum_below(grid, count, energy_ceiling(grid), tol)
}

fn spectrum_below(grid: &Grid1D, count: usize, cap: f64, tol: f64) -> Result<Vec<EigenEstimate>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("bisection tolerance"));
    }
    let floor = grid.v_min();
    if !(cap > floor) {
        return Err(Error::NotConverged("no energy window below the threshold"));
    }
    if sturm_count(grid, cap) < count {
        return Err(Error::NotConverged("fewer levels than requested below the threshold"));
    }
    let scan: Vec<(f64, usize)> = (0..=SCAN_POINTS)
        .map(|j| {
            let e = floor + (cap - floor) * j as f64 / SCAN_POINTS as f64;
            (e, if j == 0 { 0 } else { sturm_count(grid, e) })
        })
        .collect();
    (0..count)
        .map(|n| {
            let lo = scan.iter().rev().find(|s| s.1 <= n).map_or(floor, |s| s.0);
            let hi = scan.iter().find(|s| s.1 > n).map_or(cap, |s| s.0);
            bisect_level(grid, n, lo, hi, tol)
        })
        .collect()
}

/// Like [`numerov_spectrum`], but each level's bracket is grown around a
/// supplied estimate instead of a coarse scan.
pub fn numerov_spectrum_seeded(grid: &Grid1D, seeds: &[f64], tol: f64) -> Result<Vec<EigenEstimate>> {
    let floor = grid.v_min();
    let cap = energy_ceiling(grid);
    seeds
        .iter()
        .enumerate()
        .map(|(n, &s)| {
            let mut w = (1e-3 * s.abs()).max(1e-6);
            let mut lo = (s - w).max(floor);
            let mut hi = (s + w).min(cap);
            let mut grow = 0;
            while sturm_count(grid, lo) > n || sturm_count(grid, hi) <= n {
                w *= 2.0;
                lo = (s - w).max(floor);
                hi = (s + w).min(cap);
                grow += 1;
                if grow > 80 {
                    return Err(Error::NotConverged("seed bracket"));
                }
            }
            bisect_level(grid, n, lo, hi, tol)
        })
        .collect()
}

/// All negative eigenvalues of a potential that decays at both grid ends.
pub fn numerov_bound_states(grid: &Grid1D, tol: f64) -> Result<Vec<EigenEstimate>> {
    let ends = grid.values[0].abs().max(grid.values[grid.len() - 1].abs());
    if ends >= DECAY_LIMIT {
        return Err(Error::InsufficientDecay { value: ends });
    }
    let cap = grid.end_min().min(0.0) - 1e-10;
    let count = sturm_count(grid, cap);
    spectrum_below(grid, count, cap, tol)
}
