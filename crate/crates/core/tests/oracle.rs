use std::f64::consts::PI;

use routh_core::oracle::*;
use routh_core::Error;

#[test]
fn quadrature_known_integrals() {
    let g = adaptive_quadrature(|x| (-x * x).exp(), f64::NEG_INFINITY, f64::INFINITY, 1e-13).unwrap();
    assert!((g - PI.sqrt()).abs() < 1e-12);
    let c = adaptive_quadrature(|x| 1.0 / (1.0 + x * x), 0.0, f64::INFINITY, 1e-13).unwrap();
    assert!((c - PI / 2.0).abs() < 1e-12);
    let p = adaptive_quadrature(|x| 3.0 * x * x - x, -1.0, 2.0, 1e-14).unwrap();
    assert!((p - 7.5).abs() < 1e-13);
    assert!(adaptive_quadrature(|x| x, 0.0, 1.0, 0.0).is_err());
}

#[test]
fn sign_changes_with_zero_tails_and_ambiguity() {
    assert_eq!(count_sign_changes(&[0.0, 0.0, 1.0, -1.0, 2.0, 0.0]).unwrap(), 2);
    assert_eq!(count_sign_changes(&[1.0, 0.0, -1.0]).unwrap(), 1);
    assert_eq!(count_sign_changes(&[1.0, 0.0, 0.0, -1.0]), Err(Error::AmbiguousZero));
    assert_eq!(count_sign_changes_fn(|x| x.sin(), 0.1, 3.0 * PI - 0.1, 1001).unwrap(), 2);
}

/// Morse `lambda^2 (e^{-2x} - 2 e^{-x})`, levels `-(lambda - n - 1/2)^2`.
#[test]
fn morse_levels() {
    let lambda: f64 = 4.3;
    let grid = Grid1D::from_fn(-4.0, 40.0, 16384, |x| lambda * lambda * ((-2.0 * x).exp() - 2.0 * (-x).exp())).unwrap();
    let levels = numerov_spectrum(&grid, 4, 1e-12).unwrap();
    for (n, l) in levels.iter().enumerate() {
        let want = -(lambda - n as f64 - 0.5).powi(2);
        assert!((l.energy - want).abs() < 1e-6, "{n}: {} vs {want}", l.energy);
        assert_eq!(l.nodes, n);
    }
}

#[test]
fn square_well_count_and_seeding() {
    // depth 10 on |x| < 1: four even/odd states
    let grid = Grid1D::from_fn(-12.0, 12.0, 9601, |x| if x.abs() < 1.0 { -10.0 } else { 0.0 }).unwrap();
    let all = numerov_bound_states(&grid, 1e-11).unwrap();
    assert_eq!(all.len(), sturm_count(&grid, -1e-9));
    let seeds: Vec<f64> = all.iter().map(|l| l.energy + 0.05).collect();
    let seeded = numerov_spectrum_seeded(&grid, &seeds, 1e-11).unwrap();
    for (a, b) in all.iter().zip(&seeded) {
        assert!((a.energy - b.energy).abs() < 1e-9);
    }
    let mut last = 0;
    for k in 0..50 {
        let c = sturm_count(&grid, -10.0 + 0.2 * k as f64);
        assert!(c >= last);
        last = c;
    }
}

#[test]
fn eigenfunction_is_normalized() {
    let grid = Grid1D::from_fn(-10.0, 10.0, 4096, |x| x * x).unwrap();
    let psi = numerov_eigenfunction(&grid, 3.0).unwrap();
    let norm: f64 = psi.iter().map(|p| p * p).sum::<f64>() * grid.spacing();
    assert!((norm - 1.0).abs() < 1e-12);
    assert_eq!(count_sign_changes(&psi).unwrap(), 1);
}

#[test]
fn grid_validation() {
    assert!(Grid1D::new(0.0, 1.0, vec![0.0; 10]).is_err());
    assert!(Grid1D::from_fn(0.0, 1.0, 512, |_| f64::NAN).is_err());
    let slow = Grid1D::from_fn(-5.0, 5.0, 512, |x| -1.0 / (1.0 + x.abs())).unwrap();
    assert!(matches!(numerov_bound_states(&slow, 1e-8), Err(Error::InsufficientDecay { .. })));
}
