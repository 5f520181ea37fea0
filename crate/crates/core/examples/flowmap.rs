//! Empirical Lipschitz constant of the solution map in `B^{1/2}_{2,∞}` for
//! a few perturbation sizes.

use dnls_lab::cli::flowmap_experiment;
use dnls_lab::cli::spec::FlowmapParams;
use dnls_lab::Result;

fn main() -> Result<()> {
    let p = FlowmapParams {
        n_points: 64,
        r: 0.5,
        t_final: 0.1,
        dt: 1e-3,
        epsilons: vec![1e-2, 1e-3, 1e-4],
        ensemble: 4,
        band: 8,
        lambda: 1.0,
        k: 1,
        compare_gauged: true,
        spread_limit: 2.0,
        gauge_factor: 4.0,
    };
    let rep = flowmap_experiment(&p, 11)?;
    for (i, eps) in rep.epsilons.iter().enumerate() {
        let gauged = rep.lipschitz_gauged.as_ref().map_or(f64::NAN, |g| g[i]);
        println!("eps = {eps:.0e}: L = {:.5}, gauged L = {gauged:.5}", rep.lipschitz[i]);
    }
    println!("max / median = {:.5}", rep.max / rep.median);
    Ok(())
}
