//! Exact real-root isolation.
//!
//! Coefficients are converted to exact rationals, split into square-free
//! factors (Yun), and each factor's roots are isolated with a Sturm chain
//! inside the Cauchy bound, then bisected to a width of 1e-12.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::{ratio, RealPolynomial, Scalar};
use crate::{Error, Result};

type QPoly = RealPolynomial<BigRational>;

const ROOT_WIDTH: f64 = 1e-12;

/// Real roots of `p`, ascending, repeated by multiplicity.
pub fn real_roots(p: &RealPolynomial<f64>) -> Result<Vec<f64>> {
    real_roots_exact(&p.to_rational()?)
}

/// Real roots of an exact rational polynomial, ascending, with multiplicity.
pub fn real_roots_exact(p: &QPoly) -> Result<Vec<f64>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (factor, mult) in square_free_factors(p)? {
        for r in isolate_square_free(&factor)? {
            out.extend(core::iter::repeat_n(r, mult));
        }
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Number of distinct real roots.
pub fn count_distinct_real_roots(p: &RealPolynomial<f64>) -> Result<usize> {
    let q = p.to_rational()?;
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g = square_free_part(&q)?;
    if g.degree() == Some(0) {
        return Ok(0);
    }
    let chain = sturm_chain(&g)?;
    let b = cauchy_bound(&g);
    Ok(variations(&chain, &-b.clone()) - variations(&chain, &b))
}

/// Monic greatest common divisor.
pub fn gcd(a: &QPoly, b: &QPoly) -> Result<QPoly> {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let (_, r) = x.div_rem(&y)?;
        x = y;
        y = r.normalized();
    }
    Ok(monic(&x))
}

fn monic(p: &QPoly) -> QPoly {
    match p.leading() {
        Some(l) => p.scale(&(BigRational::one() / l.clone())),
        None => QPoly::zero(),
    }
}

fn exact_quotient(a: &QPoly, b: &QPoly) -> Result<QPoly> {
    Ok(a.div_rem(b)?.0)
}

fn square_free_part(p: &QPoly) -> Result<QPoly> {
    let g = gcd(p, &p.derivative())?;
    Ok(monic(&exact_quotient(p, &g)?))
}

/// Yun's square-free decomposition: pairs `(factor, multiplicity)`.
fn square_free_factors(p: &QPoly) -> Result<Vec<(QPoly, usize)>> {
    let mut out = Vec::new();
    if p.degree() == Some(0) {
        return Ok(out);
    }
    let dp = p.derivative();
    let a0 = gcd(p, &dp)?;
    let mut b = exact_quotient(p, &a0)?;
    let c = exact_quotient(&dp, &a0)?;
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = gcd(&b, &d)?;
        b = exact_quotient(&b, &a)?;
        let c = exact_quotient(&d, &a)?;
        d = &c - &b.derivative();
        if a.degree().unwrap_or(0) > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    Ok(out)
}

fn sturm_chain(p: &QPoly) -> Result<Vec<QPoly>> {
    let mut chain = vec![p.normalized(), p.derivative().normalized()];
    loop {
        let n = chain.len();
        if chain[n - 1].degree().unwrap_or(0) == 0 {
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1])?;
        if r.is_zero() {
            break;
        }
        chain.push((-&r).normalized());
    }
    Ok(chain)
}

fn variations(chain: &[QPoly], x: &BigRational) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for p in chain {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

fn cauchy_bound(p: &QPoly) -> BigRational {
    let c = p.coeffs();
    let lead = c[c.len() - 1].abs();
    let max = c[..c.len() - 1]
        .iter()
        .map(|a| a.abs() / lead.clone())
        .fold(BigRational::zero(), |m, v| if v > m { v } else { m });
    max + BigRational::one()
}

fn isolate_square_free(g: &QPoly) -> Result<Vec<f64>> {
    let chain = sturm_chain(g)?;
    let bound = cauchy_bound(g);
    let half = ratio(1, 2);
    let mut found = Vec::new();
    // Roots in (lo, hi] with their Sturm variation counts.
    let lo0 = -bound.clone();
    let mut stack = vec![(lo0.clone(), bound.clone(), variations(&chain, &lo0), variations(&chain, &bound))];
    while let Some((lo, hi, vlo, vhi)) = stack.pop() {
        let n = vlo - vhi;
        if n == 0 {
            continue;
        }
        if n == 1 {
            found.push(refine(g, &chain, lo, hi, vlo, vhi));
            continue;
        }
        let mid = (lo.clone() + hi.clone()) * half.clone();
        let vmid = variations(&chain, &mid);
        stack.push((lo, mid.clone(), vlo, vmid));
        stack.push((mid, hi, vmid, vhi));
    }
    Ok(found)
}

fn refine(
    g: &QPoly,
    chain: &[QPoly],
    mut lo: BigRational,
    mut hi: BigRational,
    mut vlo: usize,
    vhi: usize,
) -> f64 {
    let half = ratio(1, 2);
    loop {
        if g.eval(&hi).is_zero() {
            return hi.to_f64_lossy();
        }
        let width = (hi.clone() - lo.clone()).to_f64_lossy();
        let scale = hi.to_f64_lossy().abs().max(1.0);
        if width < ROOT_WIDTH * scale {
            return ((lo + hi) * half).to_f64_lossy();
        }
        let mid = (lo.clone() + hi.clone()) * half.clone();
        let vmid = variations(chain, &mid);
        if vlo - vmid == 1 {
            hi = mid;
        } else {
            lo = mid;
            vlo = vmid;
        }
        debug_assert_eq!(vlo - vhi, 1);
    }
}
