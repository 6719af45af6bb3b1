use alloc::vec::Vec;

use crate::{Error, Result};

const ZERO_FRACTION: f64 = 1e-12;

/// Number of sign changes in a sampled function.
///
/// Samples below `1e-12 * max|f|` carry no sign. Such runs at either end are
/// ignored (decaying tails); an interior run of two or more samples is
/// reported as [`Error::AmbiguousZero`].
pub fn count_sign_changes(samples: &[f64]) -> Result<usize> {
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("sample"));
    }
    let max = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max == 0.0 {
        return Err(Error::AmbiguousZero);
    }
    let thr = ZERO_FRACTION * max;
    let mut last = 0i8;
    let mut run = 0usize;
    let mut changes = 0;
    for &v in samples {
        let s = if v > thr {
            1
        } else if v < -thr {
            -1
        } else {
            0
        };
        if s == 0 {
            run += 1;
            continue;
        }
        if last != 0 {
            if run >= 2 {
                return Err(Error::AmbiguousZero);
            }
            if s != last {
                changes += 1;
            }
        }
        last = s;
        run = 0;
    }
    Ok(changes)
}

/// Samples `f` at `n` equally spaced points of `[a, b]` and counts sign changes.
pub fn count_sign_changes_fn<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> Result<usize> {
    if n < 2 || !(b > a) {
        return Err(Error::InvalidParameter("sampling interval"));
    }
    let h = (b - a) / (n - 1) as f64;
    let samples: Vec<f64> = (0..n).map(|i| f(a + i as f64 * h)).collect();
    count_sign_changes(&samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_polynomial_zeros() {
        let n = count_sign_changes_fn(|x| (x - 0.3) * (x + 1.1) * (x - 2.0), -3.0, 3.0, 1001).unwrap();
        assert_eq!(n, 3);
    }

    #[test]
    fn sample_exactly_at_zero() {
        assert_eq!(count_sign_changes(&[1.0, 0.0, -1.0]).unwrap(), 1);
        assert_eq!(count_sign_changes(&[1.0, 0.0, 1.0]).unwrap(), 0);
    }

    #[test]
    fn decaying_tails_are_ignored() {
        assert_eq!(count_sign_changes(&[0.0, 1e-30, 1.0, -1.0, -1e-20, 0.0]).unwrap(), 1);
    }

    #[test]
    fn interior_flat_zero_is_ambiguous() {
        assert_eq!(count_sign_changes(&[1.0, 0.0, 0.0, -1.0]), Err(Error::AmbiguousZero));
        assert_eq!(count_sign_changes(&[0.0, 0.0]), Err(Error::AmbiguousZero));
    }
}
