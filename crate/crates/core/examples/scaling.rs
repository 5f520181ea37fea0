//! The scaling symmetry `u_σ(x, t) = σ^{−1/2} u(x/σ, t/σ²)`: L² norms at matched
//! times agree.

use dnls_lab::nonlinear::NonlinearityConfig;
use dnls_lab::solver::{rescale_initial, solve, ScalingParams, SolverConfig};
use dnls_lab::{Complex64, Domain, GridFunction, Result};

fn main() -> Result<()> {
    let d = Domain::line(512, 4)?;
    let u0 = GridFunction::from_fn(d, |x| Complex64::from_polar(0.5 * (-x * x).exp(), x));
    let base = solve(&u0, &SolverConfig::new(d, NonlinearityConfig::original(d.kind, 0.0, 1), 1e-3, 0.05))?;
    for s in [2u32, 4] {
        let sigma = ScalingParams::new(s)?;
        let f = sigma.as_f64();
        let ds = Domain::line(512, 4 * s)?;
        let cfg = SolverConfig::new(ds, NonlinearityConfig::original(ds.kind, 0.0, 1), 1e-3 * f * f, 0.05 * f * f);
        let scaled = solve(&rescale_initial(&u0, sigma)?, &cfg)?;
        let worst = base.l2_norms.iter().zip(&scaled.l2_norms).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        println!("sigma = {s}: max | |u(t)| - |u_sigma(sigma² t)| | = {worst:.2e}");
    }
    Ok(())
}
