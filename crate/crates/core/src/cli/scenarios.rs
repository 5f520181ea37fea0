//! Scenario bodies. Each turns validated parameters into an [`Outcome`].

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::dump::FieldDump;
use super::flowmap::flowmap_experiment;
use super::output::{Cmp, Outcome};
use super::spec::*;
use crate::error::{Error, Result};
use crate::estimates::fields::{random_spacetime, random_spectral};
use crate::estimates::{
    besov_sobolev_check, chunk_rng, domination_scan, dyadic_sum_check, multilinear_probe, resonance_scan,
    sobolev_mult_probe, strichartz_probe, trilinear_probe, within_factor_two, Family, Multilinear, ProbeReport, Region,
    xy_embedding_check,
};
use crate::frequency::{Domain, DomainKind, GridFunction, Sign};
use crate::gauge::{gauge_forward, mu_drift, ungauge_trajectory, GaugeReport};
use crate::nonlinear::NonlinearityConfig;
use crate::solver::{rescale, rescale_initial, solve, solve_backward, solve_two_sided, Direction, ScalingParams, SolverConfig};
use crate::spaces::sobolev_norm;

fn domain(spec: &DomainSpec) -> Result<Domain> {
    spec.build().map_err(|e| Error::Parameter(e.0))
}

fn scale_h1(f: GridFunction, h1: f64) -> GridFunction {
    let norm = sobolev_norm(&f.to_spectral(), 1.0);
    if norm == 0.0 {
        return f;
    }
    f.scaled(Complex64::new(h1 / norm, 0.0))
}

/// Random band-limited field; on the line it is multiplied by a Gaussian
/// envelope so it decays well inside the box.
fn random_field(d: Domain, band: i64, decay: f64, rng: &mut ChaCha8Rng) -> GridFunction {
    let g = random_spectral(d, band, decay, rng).to_grid();
    match d.kind {
        DomainKind::Torus => g,
        DomainKind::LineApprox => {
            let values = g.values.iter().enumerate().map(|(j, v)| v * (-d.x(j).powi(2) / 8.0).exp()).collect();
            GridFunction::new(d, values).expect("same length")
        }
    }
}

/// Build the initial datum described by `spec`.
pub fn initial_field(d: Domain, spec: &InitialSpec, rng: &mut ChaCha8Rng) -> GridFunction {
    match *spec {
        InitialSpec::PlaneWave { amplitude, mode } => {
            let xi = mode as f64 * d.dxi();
            GridFunction::from_fn(d, |x| Complex64::from_polar(amplitude, xi * x))
        }
        InitialSpec::Gaussian { amplitude, width, velocity, center } => {
            let c = center.unwrap_or(d.x0() + 0.5 * d.period);
            GridFunction::from_fn(d, |x| {
                Complex64::from_polar(amplitude * (-(x - c).powi(2) / (2.0 * width * width)).exp(), velocity * x)
            })
        }
        InitialSpec::Random { band, decay, h1_norm } => scale_h1(random_field(d, band, decay, rng), h1_norm),
    }
}

pub(super) fn solve_scenario(p: &SolveParams, seed: u64) -> Result<Outcome> {
    let d = domain(&p.domain)?;
    let u0 = initial_field(d, &p.initial, &mut chunk_rng(seed, 0));
    let mut cfg = SolverConfig::new(d, p.nonlinearity.build(d.kind), p.dt, p.t_final);
    cfg.integrator = p.integrator;
    cfg.save_every = p.save_every;
    let traj = match p.direction {
        Direction::Forward => solve(&u0, &cfg)?,
        Direction::Backward => solve_backward(&u0, &cfg)?,
        Direction::TwoSided => solve_two_sided(&u0, &cfg)?,
    };
    let mut out = Outcome::default();
    out.metric("steps", cfg.steps() as f64);
    out.metric("effective_dt", cfg.effective_dt());
    out.metric("initial_l2", u0.l2_norm());
    out.metric("initial_h1", sobolev_norm(&u0.to_spectral(), 1.0));
    out.metric("final_l2", traj.l2_norms.last().copied().unwrap_or(0.0));
    out.metric("max_linf", traj.slices.iter().map(|s| s.linf_norm()).fold(0.0, f64::max));
    out.series("l2_norm", traj.times().into_iter().zip(&traj.l2_norms).map(|(t, &n)| [t, n]).collect());
    out.check("mass_drift", traj.mass_drift(), Cmp::Lt, p.mass_tolerance);
    if p.dump {
        let first = traj.slices.first().expect("non-empty trajectory");
        let last = traj.slices.last().expect("non-empty trajectory");
        out.dump("initial", FieldDump::from_spectral(&u0.to_spectral(), 0.0));
        out.dump("first", FieldDump::from_spectral(&first.to_spectral(), traj.t_start));
        out.dump("final", FieldDump::from_spectral(&last.to_spectral(), traj.t_end()));
    }
    Ok(out)
}

pub(super) fn gauge_roundtrip(p: &GaugeRoundtripParams, seed: u64) -> Result<Outcome> {
    let d = domain(&p.domain)?;
    let reports: Vec<GaugeReport> = (0..p.samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = chunk_rng(seed, i);
            let f = random_field(d, p.band, rng.gen_range(0.0..2.0), &mut rng);
            let scale = p.amplitude / f.linf_norm().max(f64::MIN_POSITIVE);
            GaugeReport::for_field(&f.scaled(Complex64::new(scale, 0.0)))
        })
        .collect();
    let round = reports.iter().map(|r| r.roundtrip_error).fold(0.0, f64::max);
    let modulus = reports.iter().map(|r| r.modulus_error).fold(0.0, f64::max);
    let mut out = Outcome::default();
    out.metric("samples", p.samples as f64);
    out.check("max_roundtrip_error", round, Cmp::Lt, p.tolerance);
    out.check("max_modulus_error", modulus, Cmp::Lt, p.tolerance);
    Ok(out)
}

pub(super) fn gauge_equivalence(p: &GaugeEquivalenceParams, seed: u64) -> Result<Outcome> {
    let d = domain(&p.domain)?;
    let init = p.initial.unwrap_or(InitialSpec::Random { band: 4, decay: 1.0, h1_norm: 0.3 });
    let u0 = initial_field(d, &init, &mut chunk_rng(seed, 0));
    let direct = SolverConfig::new(d, NonlinearityConfig::original(d.kind, p.lambda, p.k), p.dt, p.t_final);
    let gauged = SolverConfig::new(d, NonlinearityConfig::gauged(d.kind, p.lambda, p.k), p.dt, p.t_final);
    let (u, v) = rayon::join(|| solve(&u0, &direct), || solve(&gauge_forward(&u0), &gauged));
    let (u, v) = (u?, v?);
    let back = ungauge_trajectory(&v)?;
    let mut out = Outcome::default();
    out.metric("initial_h1", sobolev_norm(&u0.to_spectral(), 1.0));
    if d.is_torus() {
        let (mu, drift) = mu_drift(&v)?;
        out.metric("mu", mu);
        out.metric("mu_drift", drift);
    }
    let gap: Vec<[f64; 2]> =
        u.times().into_iter().zip(u.slices.iter().zip(&back.slices)).map(|(t, (a, b))| [t, a.sub(b).l2_norm()]).collect();
    out.series("discrepancy", gap);
    out.check("sup_l2_discrepancy", back.sup_l2_distance(&u)?, Cmp::Lt, p.tolerance);
    out.check("mass_drift_original", u.mass_drift(), Cmp::Lt, p.mass_tolerance);
    out.check("mass_drift_gauged", v.mass_drift(), Cmp::Lt, p.mass_tolerance);
    Ok(out)
}

/// Frequency of the plane wave `A·e^{i(mx − ωt)}`.
pub fn plane_wave_frequency(amplitude: f64, mode: i64, lambda: f64, k: u32) -> f64 {
    let rho = amplitude * amplitude;
    let m = mode as f64;
    m * m - rho * m + lambda * rho.powi(k as i32)
}

fn plane_wave_error(p: &PlaneWaveParams, dt: f64) -> Result<(f64, f64)> {
    let d = Domain::torus(p.n_points)?;
    let mut cfg = SolverConfig::new(d, NonlinearityConfig::original(d.kind, p.lambda, p.k), dt, p.t_final);
    cfg.integrator = p.integrator;
    let m = p.mode as f64;
    let u0 = GridFunction::from_fn(d, |x| Complex64::from_polar(p.amplitude, m * x));
    let traj = solve(&u0, &cfg)?;
    let omega = plane_wave_frequency(p.amplitude, p.mode, p.lambda, p.k);
    let err = traj
        .times()
        .into_iter()
        .zip(&traj.slices)
        .map(|(t, s)| {
            let exact = GridFunction::from_fn(d, |x| Complex64::from_polar(p.amplitude, m * x - omega * t));
            s.sub(&exact).l2_norm() / exact.l2_norm()
        })
        .fold(0.0, f64::max);
    Ok((err, traj.mass_drift()))
}

pub(super) fn plane_wave(p: &PlaneWaveParams) -> Result<Outcome> {
    let mut out = Outcome::default();
    out.metric("omega", plane_wave_frequency(p.amplitude, p.mode, p.lambda, p.k));
    let (err, drift) = plane_wave_error(p, p.dt)?;
    out.check("relative_l2_error", err, Cmp::Lt, p.tolerance);
    out.check("mass_drift", drift, Cmp::Lt, p.mass_tolerance);
    let errors = p.order_dts.par_iter().map(|&dt| plane_wave_error(p, dt).map(|e| e.0)).collect::<Result<Vec<_>>>()?;
    for (&dt, &e) in p.order_dts.iter().zip(&errors) {
        out.point("error_vs_dt", dt, e);
    }
    for (i, w) in errors.windows(2).enumerate() {
        let gain = w[0] / w[1];
        out.metric(format!("halving_gain_{i}"), gain);
        out.require(format!("halving_{i}_gain_or_floor"), w[1] < p.error_floor || gain >= p.min_order_gain);
    }
    Ok(out)
}

pub(super) fn scaling(p: &ScalingScenarioParams, seed: u64) -> Result<Outcome> {
    let d = Domain::line(p.n_points, p.scale)?;
    let u0 = scale_h1(random_field(d, 4, 1.0, &mut chunk_rng(seed, 0)), p.h1_norm);
    let nl = NonlinearityConfig::original(d.kind, p.lambda, p.k);
    let base = solve(&u0, &SolverConfig::new(d, nl, p.dt, p.t_final))?;
    let mut out = Outcome::default();
    for &s in &p.sigmas {
        let sigma = ScalingParams::new(s)?;
        let sf = sigma.as_f64();
        let ds = Domain::line(p.n_points, p.scale * s)?;
        let us = rescale_initial(&u0, sigma)?;
        let cfg = SolverConfig::new(ds, NonlinearityConfig::original(ds.kind, p.lambda, p.k), p.dt * sf * sf, p.t_final * sf * sf);
        let traj = solve(&us, &cfg)?;
        let norm_err = base
            .l2_norms
            .iter()
            .zip(&traj.l2_norms)
            .map(|(a, b)| (a - b).abs() / a.max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        let field_err = rescale(&base, sigma)?.sup_l2_distance(&traj)? / u0.l2_norm();
        out.metric(format!("sigma{s}_relative_field_error"), field_err);
        out.check(format!("sigma{s}_norm_mismatch"), norm_err, Cmp::Lt, p.tolerance);
        out.series(
            format!("sigma{s}_l2"),
            traj.times().into_iter().zip(&traj.l2_norms).map(|(t, &n)| [t / (sf * sf), n]).collect(),
        );
    }
    out.series("base_l2", base.times().into_iter().zip(&base.l2_norms).map(|(t, &n)| [t, n]).collect());
    Ok(out)
}

pub(super) fn flowmap(p: &FlowmapParams, seed: u64) -> Result<Outcome> {
    let rep = flowmap_experiment(p, seed)?;
    let mut out = Outcome::default();
    for (&e, &l) in rep.epsilons.iter().zip(&rep.lipschitz) {
        out.point("lipschitz_vs_eps", e, l);
    }
    out.metric("median_lipschitz", rep.median);
    out.metric("max_lipschitz", rep.max);
    out.check("lipschitz_finite", rep.max, Cmp::Lt, f64::INFINITY);
    out.check("max_over_median", rep.max / rep.median, Cmp::Le, p.spread_limit);
    if let Some(g) = &rep.lipschitz_gauged {
        for (&e, &l) in rep.epsilons.iter().zip(g) {
            out.point("lipschitz_gauged_vs_eps", e, l);
        }
        let worst = rep
            .lipschitz
            .iter()
            .zip(g)
            .map(|(a, b)| f64::max(a / b, b / a))
            .fold(0.0, f64::max);
        out.check("gauged_vs_original_factor", worst, Cmp::Le, p.gauge_factor);
    }
    Ok(out)
}

pub(super) fn verify_resonance(p: &ResonanceParams, seed: u64) -> Result<Outcome> {
    let mut out = Outcome::default();
    for &setting in &p.settings {
        let rep = resonance_scan(setting, p.bound, p.n, seed);
        let tag = format!("{setting:?}").to_lowercase();
        out.check(format!("{tag}_max_relative_residual"), rep.constant, Cmp::Le, p.tolerance);
        out.check(format!("{tag}_bound_violations"), rep.details["bound_violations"], Cmp::Le, 0.0);
        out.probes.push(rep);
    }
    Ok(out)
}

pub(super) fn verify_domination(p: &DominationParams, seed: u64) -> Result<Outcome> {
    let mut out = Outcome::default();
    for &family in &p.families {
        for &setting in &p.settings {
            let tag = format!("{family:?}_{setting:?}").to_lowercase();
            let reps: Vec<ProbeReport> = p
                .bounds
                .iter()
                .map(|&bound| domination_scan(family, setting, Region::Box { bound }, p.n, seed))
                .collect();
            let constants: Vec<f64> = reps.iter().map(|r| r.constant).collect();
            for (&b, &c) in p.bounds.iter().zip(&constants) {
                out.point(&format!("{tag}_constant_vs_box"), b, c);
                out.check(format!("{tag}_box{b}_finite"), c, Cmp::Lt, f64::INFINITY);
            }
            if family == Family::Plain {
                for (&b, r) in p.bounds.iter().zip(&reps) {
                    if let Some(&v) = r.details.get("sup_case_II_over_M4") {
                        out.check(format!("{tag}_box{b}_case_II_over_M4_finite"), v, Cmp::Lt, f64::INFINITY);
                    }
                }
            }
            out.require(format!("{tag}_stable_within_2"), within_factor_two(&constants));
            out.probes.extend(reps);
        }
    }
    Ok(out)
}

pub(super) fn probe_strichartz(p: &StrichartzParams, seed: u64) -> Result<Outcome> {
    let rep = strichartz_probe(p.b, p.ensemble, &p.grids, seed)?;
    let mut out = Outcome::default();
    out.check("sup_ratio_finite", rep.constant, Cmp::Lt, f64::INFINITY);
    out.require("stable_within_2", rep.stable == Some(true));
    out.check("single_mode_spread", rep.details["single_mode_spread"], Cmp::Lt, p.mode_spread_tolerance);
    out.probes.push(rep);
    Ok(out)
}

fn time_checks(out: &mut Outcome, rep: &ProbeReport, labels: [&str; 2]) {
    let tag = rep.probe.clone();
    out.check(format!("{tag}_sup_finite"), rep.constant, Cmp::Lt, f64::INFINITY);
    for l in labels {
        out.require(format!("{tag}_{l}_non_increasing_in_T"), rep.details[&format!("monotone_{l}")] == 1.0);
        out.metric(format!("{tag}_{l}_decay"), rep.details[&format!("decay_{l}")]);
        out.metric(format!("{tag}_{l}_window_monotone"), rep.details[&format!("monotone_{l}_window")]);
    }
}

pub(super) fn probe_trilinear(p: &TrilinearParams, seed: u64) -> Result<Outcome> {
    let rep = trilinear_probe(p.s, &p.ts, p.ensemble, p.grid, seed)?;
    let mut out = Outcome::default();
    time_checks(&mut out, &rep, ["TX", "TY"]);
    out.probes.push(rep);
    Ok(out)
}

pub(super) fn probe_multilinear(p: &MultilinearParams, seed: u64) -> Result<Outcome> {
    let mut out = Outcome::default();
    for &kind in &p.kinds {
        let rep = multilinear_probe(kind, p.s, p.delta, &p.ts, p.ensemble, p.grid, seed)?;
        time_checks(&mut out, &rep, ["X", "Y"]);
        if kind == (Multilinear::Product { k: 0 }) {
            let worst = rep.values("X_window").into_iter().fold(0.0, f64::max);
            out.check("product-k0_X_embedding_ratio", worst, Cmp::Le, 1.0);
        }
        out.probes.push(rep);
    }
    Ok(out)
}

pub(super) fn probe_smult(p: &SmultParams, seed: u64) -> Result<Outcome> {
    let rep = sobolev_mult_probe(p.s, p.s1, p.s2, p.ensemble, &p.sizes, seed)?;
    let mut out = Outcome::default();
    out.check("sup_ratio_finite", rep.constant, Cmp::Lt, f64::INFINITY);
    out.require("stable_within_2", rep.stable == Some(true));
    out.probes.push(rep);
    Ok(out)
}

pub(super) fn dyadic_checks(p: &DyadicParams, seed: u64) -> Result<Outcome> {
    let mut out = Outcome::default();
    let g = p.grid;
    let params = crate::spaces::XsbParams::plus(p.s, p.b);
    for &delta in &p.deltas {
        let worst = (0..p.samples as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = chunk_rng(seed, i);
                let band = rng.gen_range(1..=(g.n / 2 - 1) as i64);
                let modulation = rng.gen_range(1.0..0.5 * g.lattice().tau_max());
                let u = random_spacetime(g.domain(), g.lattice(), g.t_start(), band, modulation, Sign::Plus, &mut rng);
                dyadic_sum_check(&u, delta, params, p.c_sim, p.k).map(|r| r.constant)
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        out.check(format!("delta{delta}_max_normalized_sum"), worst, Cmp::Le, 1.0 + 1e-12);
    }
    out.metric("blocks_in_(1,k]", crate::estimates::probes::blocks_up_to(p.k) as f64);
    let besov = besov_sobolev_check(p.besov_n, p.besov_samples, p.s, seed)?;
    out.check("besov_over_sobolev", besov.constant, Cmp::Le, 2.0);
    out.probes.push(besov);
    let xy = xy_embedding_check(g, p.samples, p.s, p.xy_b1, p.xy_b2, seed)?;
    out.check("xy_over_cauchy_schwarz", xy.constant, Cmp::Le, 1.0 + 1e-12);
    out.probes.push(xy);
    Ok(out)
}
