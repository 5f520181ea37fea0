//! Evolve a moving Gaussian on the approximate line and print the mass and
//! amplitude along the way.

use dnls_lab::nonlinear::NonlinearityConfig;
use dnls_lab::solver::{solve, SolverConfig};
use dnls_lab::{Complex64, Domain, GridFunction, Result};

fn main() -> Result<()> {
    let d = Domain::line(512, 8)?;
    let u0 = GridFunction::from_fn(d, |x| Complex64::from_polar(0.4 * (-x * x / 2.0).exp(), x));
    let cfg = SolverConfig::new(d, NonlinearityConfig::original(d.kind, -0.5, 1), 1e-3, 0.5);
    let traj = solve(&u0, &cfg)?;
    for m in (0..traj.len()).step_by(100) {
        println!("t = {:.3}  |u|_L2 = {:.15}  |u|_inf = {:.6}", traj.time(m), traj.l2_norms[m], traj.slices[m].linf_norm());
    }
    println!("relative mass drift {:.2e}", traj.mass_drift());
    Ok(())
}
