//! Plane waves are exact solutions; compare the integrators against
//! `A·e^{i(mx − ωt)}` and watch fourth-order convergence.

use dnls_lab::nonlinear::NonlinearityConfig;
use dnls_lab::solver::{solve, Integrator, SolverConfig};
use dnls_lab::{Complex64, Domain, GridFunction, Result};

fn main() -> Result<()> {
    let d = Domain::torus(64)?;
    let (a, lambda) = (0.5, 0.3);
    // ω = m² − A²m + λA² for m = 1, k = 1
    let omega = 1.0 - a * a + lambda * a * a;
    let u0 = GridFunction::from_fn(d, |x| Complex64::from_polar(a, x));
    for integrator in [Integrator::EtdRk4, Integrator::IfRk4] {
        let mut last: Option<f64> = None;
        for dt in [0.04, 0.02, 0.01, 0.005] {
            let mut cfg = SolverConfig::new(d, NonlinearityConfig::original(d.kind, lambda, 1), dt, 0.4);
            cfg.integrator = integrator;
            let traj = solve(&u0, &cfg)?;
            let t = traj.t_end();
            let exact = GridFunction::from_fn(d, |x| Complex64::from_polar(a, x - omega * t));
            let err = traj.slices.last().unwrap().sub(&exact).l2_norm() / exact.l2_norm();
            let gain = last.map_or(String::new(), |l| format!("  gain {:.1}", l / err));
            println!("{integrator:?} dt = {dt:<6} error {err:.3e}{gain}");
            last = Some(err);
        }
    }
    Ok(())
}
