use routh_core::geometry::*;
use routh_core::spectral::{aeh_solution, gendenshtein_params, AehKind};
use routh_core::{Complex64, Error};

/// `x(eta)` for `T = a (eta^2 + kappa)`, from `dx/deta = sqrt(T) / (1 + eta^2)`.
fn x_closed(a: f64, kappa: f64, eta: f64) -> f64 {
    let s = (eta * eta + kappa).sqrt();
    let base = (eta / kappa.sqrt()).asinh();
    let extra = if kappa > 1.0 {
        let k = (kappa - 1.0).sqrt();
        k * (eta * k / s).atan()
    } else if kappa < 1.0 {
        let k = (1.0 - kappa).sqrt();
        -k * (eta * k / s).atanh()
    } else {
        0.0
    };
    a.sqrt() * (base + extra)
}

#[test]
fn map_matches_closed_form() {
    for (a, kappa) in [(1.0, 1.0), (1.0, 2.0), (1.7, 0.4), (0.6, 3.5)] {
        let tp = TangentPoly::symmetric(a, kappa).unwrap();
        let map = build_variable_map(&tp, 12.0, 4001).unwrap();
        for eta in [-30.0, -4.0, -0.3, 0.0, 0.05, 1.0, 7.5, 120.0] {
            let want = x_closed(a, kappa, eta);
            let got = map.x_of_eta(eta).unwrap();
            assert!((got - want).abs() < 1e-9, "a={a} kappa={kappa} eta={eta}: {got} vs {want}");
            let direct = eta_of_x_direct(&tp, want).unwrap();
            assert!((direct - eta).abs() < 1e-9 * eta.abs().max(1.0));
        }
    }
}

#[test]
fn map_round_trip_and_oddness() {
    let tp = TangentPoly::symmetric(1.3, 2.2).unwrap();
    let map = build_variable_map(&tp, 10.0, 2001).unwrap();
    let n = map.len();
    for i in 0..n {
        assert!((map.eta(i) + map.eta(n - 1 - i)).abs() <= 1e-12 * map.eta(i).abs().max(1.0));
        assert!((map.x(i) + map.x(n - 1 - i)).abs() < 1e-12);
    }
    for x in [-9.9, -3.3, -0.01, 0.0, 0.4, 2.25, 8.0] {
        let eta = map.eta_of_x(x).unwrap();
        let back = map.x_of_eta(eta).unwrap();
        assert!((back - x).abs() < 1e-10, "{x} -> {eta} -> {back}");
    }
    assert!(matches!(map.eta_of_x(10.5), Err(Error::OutOfGrid { .. })));
}

#[test]
fn map_derivative_is_eta_prime() {
    let tp = TangentPoly::symmetric(1.0, 0.5).unwrap();
    let map = build_variable_map(&tp, 8.0, 2001).unwrap();
    let h = 1e-4;
    for x in [-2.0, 0.0, 0.7, 3.0] {
        let fd = (map.eta_of_x(x + h).unwrap() - map.eta_of_x(x - h).unwrap()) / (2.0 * h);
        let eta = map.eta_of_x(x).unwrap();
        assert!((fd - eta_prime(&tp, eta)).abs() < 1e-6 * fd.abs().max(1.0));
    }
}

/// `{eta, x} = f f'' - f'^2 / 2` with `f(eta) = deta/dx`, derivatives by differences.
fn schwarzian_fd(tp: &TangentPoly, eta: f64) -> f64 {
    let h = 1e-3 * eta.abs().max(1.0);
    let f = |e: f64| (1.0 + e * e) / tp.eval(e).sqrt();
    let f1 = (f(eta + h) - f(eta - h)) / (2.0 * h);
    let f2 = (f(eta + h) - 2.0 * f(eta) + f(eta - h)) / (h * h);
    f(eta) * f2 - 0.5 * f1 * f1
}

#[test]
fn schwarzian_against_differences() {
    let tps = [
        TangentPoly::symmetric(1.0, 2.0).unwrap(),
        TangentPoly::symmetric(2.5, 0.3).unwrap(),
        TangentPoly::general(Complex64::new(0.2, -0.4), 3.0).unwrap(),
    ];
    for tp in tps {
        for eta in [-5.0, -1.0, 0.0, 0.3, 2.0, 11.0] {
            let got = schwarzian_eval(&tp, eta);
            let fd = schwarzian_fd(&tp, eta);
            assert!((got - fd).abs() < 1e-5 * fd.abs().max(1.0), "{tp:?} eta={eta}: {got} vs {fd}");
        }
    }
}

#[test]
fn scarf_potential_in_eta() {
    for (a, b) in [(2.5, 0.5), (3.3, 0.7), (1.0, -1.5)] {
        let g = gendenshtein_params(a, b).unwrap();
        for x in [-4.0f64, -1.1, 0.0, 0.6, 2.9] {
            let c2 = x.cosh().powi(2);
            let want = (b * b - a * (a + 1.0)) / c2 + (2.0 * a + 1.0) * b * x.sinh() / c2;
            let got = potential_at_eta(&g.spec, x.sinh());
            assert!((got - want).abs() < 1e-12 * want.abs().max(1.0), "{a},{b} x={x}: {got} vs {want}");
        }
    }
}

#[test]
fn bose_invariant_matches_potential() {
    // I = density * (eps - V - S/2)
    let specs = [
        PotentialSpec::milson(Complex64::new(7.75, 3.0), 1.0, 2.0).unwrap(),
        PotentialSpec::new(Complex64::new(4.0, -1.0), TangentPoly::general(Complex64::new(-0.3, 0.5), 2.8).unwrap())
            .unwrap(),
    ];
    for spec in specs {
        for eps in [-2.0, 0.0, 0.7] {
            for eta in [-6.0, -0.5, 0.0, 1.5, 9.0] {
                let v = potential_at_eta(&spec, eta);
                let s = schwarzian_eval(spec.tp(), eta);
                let want = density(spec.tp(), eta) * (eps - v - 0.5 * s);
                let got = bose_invariant_eval(&spec, eps, eta);
                assert!((got - want).abs() < 1e-12 * want.abs().max(1.0), "eps={eps} eta={eta}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn bose_invariant_at_origin() {
    let spec = PotentialSpec::milson(Complex64::new(3.2, -0.9), 1.4, 0.7).unwrap();
    let h = spec.h0();
    let want = 0.25 * (2.0 * h.re + spec.o00());
    assert!((bose_invariant_eval(&spec, 0.0, 0.0) - want).abs() < 1e-14);
}

/// `psi = Phi / sqrt(eta')` of an exact solution satisfies `-psi'' + V psi = eps psi` in `x`.
#[test]
fn liouville_transform_of_exact_solutions() {
    let specs = [
        gendenshtein_params(2.5, 0.5).unwrap().spec,
        PotentialSpec::milson(Complex64::new(7.75, 3.0), 1.0, 2.0).unwrap(),
        PotentialSpec::milson(Complex64::new(6.0, 0.0), 1.5, 0.5).unwrap(),
    ];
    for spec in specs {
        let tp = *spec.tp();
        for (kind, m) in [(AehKind::C, 0), (AehKind::D, 1), (AehKind::D, 2)] {
            let Ok(sol) = aeh_solution(&spec, kind, m) else { continue };
            let psi = |x: f64| {
                let eta = eta_of_x_direct(&tp, x).unwrap();
                sol.phi.value(eta) / eta_prime(&tp, eta).sqrt()
            };
            let h = 1e-2;
            for x in [-1.7, -0.2, 0.45, 2.3] {
                let d2 = (-psi(x + 2.0 * h) + 16.0 * psi(x + h) - 30.0 * psi(x) + 16.0 * psi(x - h) - psi(x - 2.0 * h))
                    / (12.0 * h * h);
                let v = potential_at_eta(&spec, eta_of_x_direct(&tp, x).unwrap());
                let p = psi(x);
                let res = -d2 + (v - sol.energy) * p;
                let scale = d2.abs() + (v * p).abs() + (sol.energy * p).abs();
                assert!(res.abs() < 1e-6 * scale, "{kind:?}{m} x={x}: residual {res} scale {scale}");
            }
        }
    }
}

#[test]
fn constructor_checks() {
    let tp = TangentPoly::symmetric(1.0, 2.0).unwrap();
    assert!(matches!(
        PotentialSpec::with_o00(Complex64::new(2.0, 0.0), 4.0, tp),
        Err(Error::ConstraintViolated { .. })
    ));
    assert_eq!(PotentialSpec::new(Complex64::new(2.0, 1.0), tp).unwrap().o00(), 5.0);
    assert!(TangentPoly::symmetric(-1.0, 2.0).is_err());
    assert!(TangentPoly::symmetric(1.0, 0.0).is_err());
    let deep = PotentialSpec::new(Complex64::new(-3.0, 0.0), tp).unwrap();
    assert!(matches!(deep.lambda0(), Err(Error::BranchUndefined { .. })));
}

#[test]
fn decay_radius_bounds_potential() {
    let g = gendenshtein_params(3.3, 0.7).unwrap();
    let x = decay_x_max(&g.spec, 1e-8).unwrap();
    for s in [x, x + 0.5, x + 1.5] {
        assert!(g.potential(s).abs() < 1e-8 && g.potential(-s).abs() < 1e-8);
    }
    assert!(g.potential(x - 2.0).abs().max(g.potential(2.0 - x).abs()) > 1e-8);
}
