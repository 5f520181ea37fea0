//! Gauge a field, check the round trip, then solve the original and the
//! gauged equation and compare after undoing the gauge.

use dnls_lab::estimates::fields::random_spectral;
use dnls_lab::gauge::{gauge_forward, gauge_inverse, ungauge_trajectory, GaugeReport};
use dnls_lab::nonlinear::NonlinearityConfig;
use dnls_lab::solver::{solve, SolverConfig};
use dnls_lab::{Complex64, Domain, GridFunction, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let torus = Domain::torus(128)?;
    let line = Domain::line(512, 8)?;
    let data = [
        random_spectral(torus, 6, 1.0, &mut rng).to_grid().scaled(Complex64::new(0.2, 0.0)),
        GridFunction::from_fn(line, |x| Complex64::from_polar(0.3 * (-x * x / 4.0).exp(), 0.5 * x)),
    ];
    for f in data {
        let d = f.domain;
        let g = gauge_forward(&f);
        println!("{:?}: round-trip error {:.2e}", d.kind, gauge_inverse(&g).max_abs_diff(&f));
        println!("    {:?}", GaugeReport::for_field(&f));
        let direct = SolverConfig::new(d, NonlinearityConfig::original(d.kind, 0.0, 1), 5e-4, 0.05);
        let gauged = SolverConfig::new(d, NonlinearityConfig::gauged(d.kind, 0.0, 1), 5e-4, 0.05);
        let u = solve(&f, &direct)?;
        let v = ungauge_trajectory(&solve(&g, &gauged)?)?;
        println!("    sup-in-time discrepancy {:.2e}", v.sup_l2_distance(&u)?);
    }
    Ok(())
}
