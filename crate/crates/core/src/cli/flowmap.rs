//! Empirical Lipschitz constant of the solution map in `B^{1/2}_{2,∞}`.
//!
//! For data `u₀` in the ball of radius `r` and a unit direction `φ`, the
//! pair `(u₀, u₀ + εφ)` is evolved and
//! `L = sup_t ‖u(t) − v(t)‖ / ‖u₀ − v₀‖` is recorded. `L(ε)` is the largest
//! value over the ensemble.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::spec::FlowmapParams;
use crate::error::Result;
use crate::estimates::chunk_rng;
use crate::estimates::fields::random_spectral;
use crate::frequency::{Domain, GridFunction};
use crate::gauge::gauge_forward;
use crate::nonlinear::NonlinearityConfig;
use crate::solver::{solve, SolverConfig, Trajectory};
use crate::spaces::{besov_norm, BesovParams};

#[derive(Debug, Clone, Serialize)]
pub struct FlowmapReport {
    pub epsilons: Vec<f64>,
    /// `L(ε)` for the original equation.
    pub lipschitz: Vec<f64>,
    /// `L(ε)` for the gauged equation, measured between gauged data.
    pub lipschitz_gauged: Option<Vec<f64>>,
    /// Per member, per `ε`.
    pub per_member: Vec<Vec<f64>>,
    pub median: f64,
    pub max: f64,
}

fn half_besov(f: &GridFunction) -> f64 {
    besov_norm(&f.to_spectral(), BesovParams::sup(0.5))
}

fn with_norm(f: GridFunction, target: f64) -> GridFunction {
    let n = half_besov(&f);
    f.scaled(Complex64::new(target / n, 0.0))
}

fn sup_ratio(a: &Trajectory, b: &Trajectory, initial_gap: f64) -> f64 {
    a.slices.iter().zip(&b.slices).map(|(x, y)| half_besov(&x.sub(y))).fold(0.0, f64::max) / initial_gap
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len() / 2;
    if s.len() % 2 == 1 {
        s[m]
    } else {
        0.5 * (s[m - 1] + s[m])
    }
}

/// Run the flow-map continuity experiment.
pub fn flowmap_experiment(p: &FlowmapParams, seed: u64) -> Result<FlowmapReport> {
    let d = Domain::torus(p.n_points)?;
    let original = SolverConfig::new(d, NonlinearityConfig::original(d.kind, p.lambda, p.k), p.dt, p.t_final);
    let gauged = SolverConfig::new(d, NonlinearityConfig::gauged(d.kind, p.lambda, p.k), p.dt, p.t_final);

    let members = (0..p.ensemble as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = chunk_rng(seed, i);
            let radius = p.r * rng.gen_range(0.3..0.95);
            let u0 = with_norm(random_spectral(d, p.band, 1.0, &mut rng).to_grid(), radius);
            let phi = with_norm(random_spectral(d, p.band, 1.0, &mut rng).to_grid(), 1.0);
            let u = solve(&u0, &original)?;
            let w = if p.compare_gauged { Some((gauge_forward(&u0), solve(&gauge_forward(&u0), &gauged)?)) } else { None };
            let mut plain = Vec::with_capacity(p.epsilons.len());
            let mut gauge = Vec::with_capacity(p.epsilons.len());
            for &eps in &p.epsilons {
                let v0 = u0.add(&phi.scaled(Complex64::new(eps, 0.0)));
                let v = solve(&v0, &original)?;
                plain.push(sup_ratio(&u, &v, half_besov(&v0.sub(&u0))));
                if let Some((w0, w)) = &w {
                    let z0 = gauge_forward(&v0);
                    let z = solve(&z0, &gauged)?;
                    gauge.push(sup_ratio(w, &z, half_besov(&z0.sub(w0))));
                }
            }
            Ok((plain, gauge))
        })
        .collect::<Result<Vec<(Vec<f64>, Vec<f64>)>>>()?;

    let sup_over = |gauged: bool| -> Vec<f64> {
        let pick = |m: &(Vec<f64>, Vec<f64>), j: usize| if gauged { m.1[j] } else { m.0[j] };
        (0..p.epsilons.len()).map(|j| members.iter().map(|m| pick(m, j)).fold(0.0, f64::max)).collect()
    };
    let lipschitz = sup_over(false);
    let lipschitz_gauged = p.compare_gauged.then(|| sup_over(true));
    Ok(FlowmapReport {
        epsilons: p.epsilons.clone(),
        median: median(&lipschitz),
        max: lipschitz.iter().cloned().fold(0.0, f64::max),
        lipschitz,
        lipschitz_gauged,
        per_member: members.into_iter().map(|m| m.0).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn linear_flow_is_an_isometry() {
        let p = FlowmapParams {
            n_points: 32,
            r: 0.5,
            t_final: 0.05,
            dt: 5e-3,
            epsilons: vec![1e-2, 1e-3],
            ensemble: 2,
            band: 4,
            lambda: 0.0,
            k: 1,
            compare_gauged: false,
            spread_limit: 2.0,
            gauge_factor: 4.0,
        };
        // small data: the flow is close to the unitary linear one
        let rep = flowmap_experiment(&FlowmapParams { r: 1e-4, ..p }, 1).unwrap();
        for l in rep.lipschitz {
            assert!((l - 1.0).abs() < 1e-3, "{l}");
        }
    }
}
