//! Picard iteration of the Duhamel map against the time stepper.

use dnls_lab::nonlinear::NonlinearityConfig;
use dnls_lab::solver::{picard_iterate, solve, SolverConfig};
use dnls_lab::spaces::sobolev_norm;
use dnls_lab::{Complex64, Domain, GridFunction, Result};

fn main() -> Result<()> {
    let d = Domain::torus(64)?;
    let f = GridFunction::from_fn(d, |x| Complex64::new(x.cos(), 0.5 * (2.0 * x).sin()));
    let u0 = f.scaled(Complex64::new(0.1 / sobolev_norm(&f.to_spectral(), 1.0), 0.0));
    let cfg = SolverConfig::new(d, NonlinearityConfig::original(d.kind, 0.0, 1), 2.5e-4, 0.05);
    let rep = picard_iterate(&u0, &cfg, 20)?;
    println!("successive differences: {:?}", rep.differences);
    println!("ratios: {:?}", rep.ratios);
    println!("distance to ETDRK4 solution: {:.2e}", rep.trajectory.sup_l2_distance(&solve(&u0, &cfg)?)?);
    Ok(())
}
