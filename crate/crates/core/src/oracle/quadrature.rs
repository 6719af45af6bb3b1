//! Globally adaptive Gauss-Kronrod (7/15) quadrature.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 4000;

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    let (k, g) = (kron * h, gauss * h);
    if !k.is_finite() {
        return Err(Error::NonFinite("integrand"));
    }
    Ok((k, (k - g).abs()))
}

/// Integral of `f` over `[a, b]` to absolute accuracy `tol`.
///
/// Infinite endpoints are handled with the substitution `x = tan t`.
pub fn adaptive_quadrature<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a.is_nan() || b.is_nan() || !(tol > 0.0) {
        return Err(Error::InvalidParameter("quadrature limits or tolerance"));
    }
    if a == b {
        return Ok(0.0);
    }
    if a.is_infinite() || b.is_infinite() {
        let ta = if a.is_infinite() { a.signum() * FRAC_PI_2 } else { a.atan() };
        let tb = if b.is_infinite() { b.signum() * FRAC_PI_2 } else { b.atan() };
        return integrate_finite(
            |t| {
                let c = t.cos();
                f(t.tan()) / (c * c)
            },
            ta,
            tb,
            tol,
        );
    }
    integrate_finite(f, a, b, tol)
}

fn integrate_finite<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if b < a {
        return integrate_finite(f, b, a, tol).map(|v| -v);
    }
    let (v, e) = gk15(&mut f, a, b)?;
    let mut parts: Vec<(f64, f64, f64, f64)> = Vec::with_capacity(64);
    parts.push((a, b, v, e));
    loop {
        let total_err: f64 = parts.iter().map(|p| p.3).sum();
        if total_err <= tol {
            return Ok(parts.iter().map(|p| p.2).sum());
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::NotConverged("quadrature subdivision limit"));
        }
        let (idx, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (lo, hi, _, _) = parts.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Err(Error::NotConverged("quadrature interval underflow"));
        }
        let (v1, e1) = gk15(&mut f, lo, mid)?;
        let (v2, e2) = gk15(&mut f, mid, hi)?;
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}
