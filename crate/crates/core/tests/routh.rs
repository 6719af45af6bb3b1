use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use routh_core::routh::*;
use routh_core::spectral::stevenson_identity_check;
use routh_core::{Complex64, Error, RealPolynomial};

type Q = BigRational;

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn qpoly(c: &[(i64, i64)]) -> RealPolynomial<Q> {
    RealPolynomial::new(c.iter().map(|&(n, d)| q(n, d)).collect())
}

fn poch(x: Complex64, k: usize) -> Complex64 {
    (0..k).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (x + j as f64))
}

fn fact(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

/// Classical Jacobi `P_m^(a,b)(y)` by its binomial sum.
fn classical_jacobi(m: usize, a: Complex64, b: Complex64, y: Complex64) -> Complex64 {
    (0..=m)
        .map(|s| {
            poch(a + s as f64 + 1.0, m - s) * poch(b + (m - s) as f64 + 1.0, s) / (fact(s) * fact(m - s))
                * ((y - 1.0) * 0.5).powu(s as u32)
                * ((y + 1.0) * 0.5).powu((m - s) as u32)
        })
        .sum()
}

/// Defining sum `2^-m sum (a)_k (b)_{m-k} / (k! (m-k)!) (y-1)^k (y+1)^{m-k}`.
fn defining_sum(m: usize, a: Complex64, b: Complex64, y: Complex64) -> Complex64 {
    (0..=m)
        .map(|k| poch(a, k) * poch(b, m - k) / (fact(k) * fact(m - k)) * (y - 1.0).powu(k as u32) * (y + 1.0).powu((m - k) as u32))
        .sum::<Complex64>()
        / 2f64.powi(m as i32)
}

#[test]
fn hand_computed_members() {
    let r = routh_polynomial(2, Complex::new(q(-3, 1), q(0, 1))).unwrap();
    assert_eq!(r.poly(), &qpoly(&[(3, 4), (0, 1), (15, 4)]));
    let r = routh_polynomial(2, Complex::new(q(1, 1), q(0, 1))).unwrap();
    assert_eq!(r.poly(), &qpoly(&[(-1, 4), (0, 1), (3, 4)]));
    // order one: alpha_R eta - alpha_I
    let r = routh_polynomial(1, Complex::new(q(2, 3), q(-5, 7))).unwrap();
    assert_eq!(r.poly(), &qpoly(&[(5, 7), (2, 3)]));
    assert_eq!(discriminant_order2(Complex::new(q(-3, 1), q(0, 1))).unwrap(), q(-45, 4));
}

#[test]
fn matches_defining_sum_and_classical_jacobi() {
    for &(m, alpha) in &[
        (3usize, Complex64::new(0.7, -1.2)),
        (4, Complex64::new(-2.3, 0.4)),
        (5, Complex64::new(1.5, 2.5)),
    ] {
        let r = routh_polynomial(m, alpha).unwrap();
        let minus_i = (0..m).fold(Complex64::new(1.0, 0.0), |acc, _| acc * Complex64::new(0.0, -1.0));
        for eta in [-2.5, -0.4, 0.0, 0.9, 3.1] {
            let want = minus_i * defining_sum(m, alpha, alpha.conj(), Complex64::new(0.0, eta));
            assert!(want.im.abs() < 1e-9 * want.norm().max(1.0));
            let got = r.eval(eta);
            assert!((got - want.re).abs() < 1e-10 * want.re.abs().max(1.0), "m={m} eta={eta}: {got} vs {want}");
            // classical Jacobi with index -alpha - m at -i eta
            let ap = -alpha - m as f64;
            let classical = minus_i * classical_jacobi(m, ap, ap.conj(), Complex64::new(0.0, -eta));
            assert!((classical.re - got).abs() < 1e-10 * got.abs().max(1.0), "m={m} eta={eta}: {classical}");
            let hyp = routh_hypergeometric_eval(m, alpha, eta).unwrap();
            assert!((hyp - got).abs() < 1e-10 * got.abs().max(1.0));
        }
    }
}

#[test]
fn rodrigues_first_order_by_hand() {
    // D[w (1 + eta^2)] / w with w = (1+eta^2)^alpha_R exp(2 alpha_I atan eta)
    let r = routh_rodrigues(1, Complex::new(q(1, 3), q(2, 1)));
    assert_eq!(r.poly(), &qpoly(&[(4, 1), (8, 3)]));
    assert_eq!(r.convention(), Convention::Rodrigues);
}

#[test]
fn rodrigues_constant_values() {
    let c: Vec<Q> = (0..5).map(rodrigues_constant::<Q>).collect();
    assert_eq!(c, vec![q(1, 1), q(-2, 1), q(8, 1), q(-48, 1), q(384, 1)]);
}

#[test]
fn printed_discriminant_differs_from_canonical() {
    let alpha = Complex64::new(-3.0, 0.0);
    assert!((discriminant_order2_closed(&alpha) + 11.25).abs() < 1e-12);
    let printed = printed_discriminant_order2(alpha);
    assert!(printed.is_finite());
}

#[test]
fn orthogonality_selects_conjugate_negated_weight() {
    let gamma = Complex64::new(5.4, -0.8);
    let family = RomanovskiFamily::new(gamma);
    assert_eq!(family.max_order(), Some(4));
    let polys: Vec<_> = (0..=4).map(|n| family.member(n).unwrap().into_poly()).collect();
    let worst = |w: WeightParams| -> f64 {
        let mut worst = 0.0f64;
        for i in 0..polys.len() {
            for j in 0..i {
                let pq = inner_product(&polys[i], &polys[j], &w).unwrap();
                let n = (inner_product(&polys[i], &polys[i], &w).unwrap() * inner_product(&polys[j], &polys[j], &w).unwrap()).sqrt();
                worst = worst.max(pq.abs() / n);
            }
        }
        worst
    };
    assert!(worst(family.weight()) < 1e-10);
    assert_eq!(family.weight().index, -gamma.conj());
    assert!(worst(WeightParams::new(-gamma)) > 1e-3);
    assert!(matches!(
        inner_product(&polys[4], &polys[4], &WeightParams::new(gamma)),
        Err(Error::NonIntegrable { .. })
    ));
}

#[test]
fn inadmissible_orders_are_rejected() {
    let family = RomanovskiFamily::new(Complex64::new(2.2, 0.3));
    assert_eq!(family.max_order(), Some(1));
    assert!(family.inner_product(1, 0).is_ok());
    assert!(matches!(family.inner_product(2, 2), Err(Error::NonIntegrable { .. })));
}

#[test]
fn stevenson_needs_inverse_power() {
    let samples: Vec<f64> = (0..=20).map(|k| -2.0 + 0.2 * k as f64).collect();
    let r = stevenson_identity_check(Complex64::new(4.3, 0.6), 3, &samples).unwrap();
    assert!(r.deviation < 1e-11);
    assert!(r.deviation_printed > 1e-2);
}

fn rational() -> impl Strategy<Value = Q> {
    (-40i64..=40, 1i64..=9).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_and_rodrigues_solve_their_equations(m in 0usize..=6, re in rational(), im in rational()) {
        let alpha = Complex::new(re, im);
        let canon = routh_polynomial(m, alpha.clone()).unwrap();
        prop_assert!(ode_residual(&canon).is_zero());
        let rod = routh_rodrigues(m, alpha.clone());
        prop_assert!(ode_residual(&rod).is_zero());
        let partner = routh_polynomial(m, rodrigues_partner_index(m, &alpha)).unwrap();
        prop_assert_eq!(rod.poly(), &partner.poly().scale(&rodrigues_constant::<Q>(m)));
    }

    #[test]
    fn discriminant_closed_form(re in rational(), im in rational()) {
        let alpha = Complex::new(re, im);
        let r = routh_polynomial(2, alpha.clone()).unwrap();
        if r.poly().degree() == Some(2) {
            prop_assert_eq!(discriminant_order2(alpha.clone()).unwrap(), discriminant_order2_closed(&alpha));
        }
    }

    #[test]
    fn leading_coefficient_is_pochhammer(m in 1usize..=5, re in rational(), im in rational()) {
        // Vandermonde: sum_k (a*)_k (a)_{m-k} / (k! (m-k)!) = (2 a_R)_m / m!
        let alpha = Complex::new(re.clone(), im);
        let r = routh_polynomial(m, alpha).unwrap();
        let two_ar = re * q(2, 1);
        let mut lead = Q::one();
        for j in 0..m {
            lead = lead * (two_ar.clone() + q(j as i64, 1)) / q(2 * (j as i64 + 1), 1);
        }
        prop_assert_eq!(r.poly().coeff(m), lead);
    }
}
