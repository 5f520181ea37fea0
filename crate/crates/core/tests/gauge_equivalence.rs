//! Solving the original equation directly agrees with solving the gauged
//! equation from the gauged datum and undoing the gauge.

use dnls_lab::gauge::{gauge_forward, ungauge_trajectory};
use dnls_lab::nonlinear::NonlinearityConfig;
use dnls_lab::solver::{solve, SolverConfig};
use dnls_lab::spaces::sobolev_norm;
use dnls_lab::{Complex64, Domain, DomainKind, GridFunction};

fn discrepancy(u0: &GridFunction, lambda: f64, k: u32, dt: f64, t: f64) -> f64 {
    let d = u0.domain;
    let direct = SolverConfig::new(d, NonlinearityConfig::original(d.kind, lambda, k), dt, t);
    let gauged = SolverConfig::new(d, NonlinearityConfig::gauged(d.kind, lambda, k), dt, t);
    let u = solve(u0, &direct).unwrap();
    let v = solve(&gauge_forward(u0), &gauged).unwrap();
    assert!(u.mass_drift() < 1e-9 && v.mass_drift() < 1e-9);
    ungauge_trajectory(&v).unwrap().sup_l2_distance(&u).unwrap()
}

fn scaled_to_h1(f: GridFunction, h1: f64) -> GridFunction {
    let s = h1 / sobolev_norm(&f.to_spectral(), 1.0);
    f.scaled(Complex64::new(s, 0.0))
}

#[test]
fn torus_gauge_equivalence() {
    let d = Domain::torus(128).unwrap();
    let u0 = scaled_to_h1(
        GridFunction::from_fn(d, |x| {
            Complex64::new(1.0 + 0.5 * x.cos(), 0.3 * (2.0 * x).sin()) + Complex64::from_polar(0.4, 3.0 * x)
        }),
        0.3,
    );
    for (lambda, k) in [(0.0, 1), (0.7, 2)] {
        let e = discrepancy(&u0, lambda, k, 2.5e-4, 0.05);
        assert!(e < 1e-6, "λ = {lambda}: {e:e}");
    }
}

#[test]
fn line_gauge_equivalence() {
    let d = Domain::line(512, 8).unwrap();
    let u0 = scaled_to_h1(
        GridFunction::from_fn(d, |x| (-x * x / 2.0).exp() * Complex64::from_polar(1.0, 0.5 * x) * (1.0 + 0.3 * x)),
        0.3,
    );
    assert_eq!(d.kind, DomainKind::LineApprox);
    for (lambda, k) in [(0.0, 1), (-0.5, 1)] {
        let e = discrepancy(&u0, lambda, k, 2.5e-4, 0.05);
        assert!(e < 1e-6, "λ = {lambda}: {e:e}");
    }
}
