//! Time evolution on the Fourier side.
//!
//! Both equations are written as `∂ₜû = Lû + N(û)` with `L = −iξ²` and
//! `N = −i·F̂`, where `F` is the right-hand side from [`crate::nonlinear`].
//! The linear part is integrated exactly; the nonlinear part by a fourth
//! order exponential Runge–Kutta scheme (Cox–Matthews ETDRK4 or the
//! integrating-factor RK4).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frequency::{Domain, DomainKind, GridFunction, SpectralField};
use crate::nonlinear::{Dealiaser, NonlinearityConfig};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Below this `|z|` the φ-functions are summed as power series.
const PHI_SERIES_RADIUS: f64 = 1.0;
const BLOW_UP_FACTOR: f64 = 1e6;
const EDGE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Integrator {
    #[default]
    EtdRk4,
    IfRk4,
}

fn default_pad() -> usize {
    4
}

fn default_stride() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub domain: Domain,
    pub nonlinearity: NonlinearityConfig,
    pub dt: f64,
    pub t_final: f64,
    #[serde(default)]
    pub integrator: Integrator,
    #[serde(default = "default_pad")]
    pub pad_factor: usize,
    /// Keep every `save_every`-th step in the trajectory.
    #[serde(default = "default_stride")]
    pub save_every: usize,
}

impl SolverConfig {
    pub fn new(domain: Domain, nonlinearity: NonlinearityConfig, dt: f64, t_final: f64) -> Self {
        Self {
            domain,
            nonlinearity,
            dt,
            t_final,
            integrator: Integrator::EtdRk4,
            pad_factor: default_pad(),
            save_every: default_stride(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !(self.t_final > 0.0) || !self.dt.is_finite() || !self.t_final.is_finite() {
            return Err(Error::Parameter(format!("need dt > 0 and t_final > 0, got {} and {}", self.dt, self.t_final)));
        }
        if self.dt > self.t_final * (1.0 + 1e-12) {
            return Err(Error::Parameter(format!("dt = {} exceeds t_final = {}", self.dt, self.t_final)));
        }
        if !matches!(self.pad_factor, 2 | 4) {
            return Err(Error::Parameter(format!("pad_factor must be 2 or 4, got {}", self.pad_factor)));
        }
        if self.save_every == 0 {
            return Err(Error::Parameter("save_every must be positive".into()));
        }
        if self.nonlinearity.kind != self.domain.kind {
            return Err(Error::DomainMismatch);
        }
        Ok(())
    }

    /// Number of steps; the step is shrunk so that they tile `[0, t_final]`.
    pub fn steps(&self) -> usize {
        ((self.t_final / self.dt) - 1e-9).ceil().max(1.0) as usize
    }

    pub fn effective_dt(&self) -> f64 {
        self.t_final / self.steps() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Forward,
    Backward,
    TwoSided,
}

/// Uniformly sampled solution `t_start, t_start + dt, …`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub domain: Domain,
    pub t_start: f64,
    pub dt: f64,
    pub slices: Vec<GridFunction>,
    /// `‖u(t)‖_{L²}` per slice.
    pub l2_norms: Vec<f64>,
    pub config: Option<SolverConfig>,
    pub direction: Direction,
}

impl Trajectory {
    pub fn from_fn(domain: Domain, t_start: f64, dt: f64, count: usize, f: impl Fn(f64) -> GridFunction) -> Self {
        let slices: Vec<GridFunction> = (0..count).map(|m| f(t_start + m as f64 * dt)).collect();
        Self::from_slices(domain, t_start, dt, slices)
    }

    pub fn from_slices(domain: Domain, t_start: f64, dt: f64, slices: Vec<GridFunction>) -> Self {
        let l2_norms = slices.iter().map(GridFunction::l2_norm).collect();
        Self { domain, t_start, dt, slices, l2_norms, config: None, direction: Direction::Forward }
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn time(&self, m: usize) -> f64 {
        self.t_start + m as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|m| self.time(m)).collect()
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.len().saturating_sub(1))
    }

    /// Slice index whose time is `t`, if `t` is on the sampling grid.
    pub fn index_of(&self, t: f64) -> Result<usize> {
        let (lo, hi) = (self.t_start, self.t_end());
        let tol = 1e-9 * self.dt;
        if t < lo - tol || t > hi + tol {
            return Err(Error::Range { t, lo, hi });
        }
        let m = ((t - lo) / self.dt).round();
        if (lo + m * self.dt - t).abs() > tol.max(1e-12 * t.abs()) {
            return Err(Error::Parameter(format!("t = {t} is not a sample time (step {})", self.dt)));
        }
        Ok(m as usize)
    }

    pub fn at(&self, t: f64) -> Result<&GridFunction> {
        Ok(&self.slices[self.index_of(t)?])
    }

    /// `max_t |‖u(t)‖ − ‖u(t₀)‖| / ‖u(t₀)‖`, with `t₀` the slice nearest 0.
    pub fn mass_drift(&self) -> f64 {
        let m0 = self.index_of(0.0).unwrap_or(0);
        let n0 = self.l2_norms[m0];
        if n0 == 0.0 {
            return self.l2_norms.iter().cloned().fold(0.0, f64::max);
        }
        self.l2_norms.iter().map(|n| (n - n0).abs() / n0).fold(0.0, f64::max)
    }

    /// `sup_t ‖u(t) − v(t)‖_{L²}` over common sample times.
    pub fn sup_l2_distance(&self, other: &Trajectory) -> Result<f64> {
        if self.domain != other.domain || self.len() != other.len() {
            return Err(Error::DomainMismatch);
        }
        Ok(self.slices.iter().zip(&other.slices).map(|(a, b)| a.sub(b).l2_norm()).fold(0.0, f64::max))
    }

    pub fn map_slices(&self, f: impl Fn(f64, &GridFunction) -> GridFunction + Sync) -> Trajectory {
        let slices: Vec<GridFunction> =
            self.slices.par_iter().enumerate().map(|(m, g)| f(self.time(m), g)).collect();
        let mut out = Trajectory::from_slices(self.domain, self.t_start, self.dt, slices);
        out.config = self.config;
        out.direction = self.direction;
        out
    }
}

/// `(U_t f)^(ξ) = e^{−itξ²} f̂(ξ)`.
pub fn linear_propagate(f: &SpectralField, t: f64) -> SpectralField {
    let d = f.domain;
    let coeffs = f
        .coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let xi = d.xi(j);
            c * Complex64::from_polar(1.0, -t * xi * xi)
        })
        .collect();
    SpectralField { domain: d, coeffs }
}

/// `φ₁, φ₂, φ₃` at `z`.
fn phi123(z: Complex64) -> [Complex64; 3] {
    if z.norm() < PHI_SERIES_RADIUS {
        // φ_k(z) = Σ_j z^j/(j+k)!
        let mut out = [ZERO; 3];
        for (k, o) in out.iter_mut().enumerate() {
            let mut term = Complex64::new(1.0 / factorial(k + 1), 0.0);
            let mut sum = term;
            for j in 1..24 {
                term *= z / (j + k + 1) as f64;
                sum += term;
            }
            *o = sum;
        }
        out
    } else {
        let e = z.exp();
        let p1 = (e - 1.0) / z;
        let p2 = (e - 1.0 - z) / (z * z);
        let p3 = (e - 1.0 - z - 0.5 * z * z) / (z * z * z);
        [p1, p2, p3]
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// Per-mode constants of one exponential RK4 step of size `h`.
struct StepCoefficients {
    e: Vec<Complex64>,
    e2: Vec<Complex64>,
    q: Vec<Complex64>,
    f1: Vec<Complex64>,
    f2: Vec<Complex64>,
    f3: Vec<Complex64>,
}

impl StepCoefficients {
    fn new(domain: &Domain, h: f64, integrator: Integrator) -> Self {
        let n = domain.n_points;
        let mut s = Self {
            e: Vec::with_capacity(n),
            e2: Vec::with_capacity(n),
            q: Vec::with_capacity(n),
            f1: Vec::with_capacity(n),
            f2: Vec::with_capacity(n),
            f3: Vec::with_capacity(n),
        };
        for j in 0..n {
            let xi = domain.xi(j);
            let z = Complex64::new(0.0, -xi * xi * h);
            s.e.push(z.exp());
            s.e2.push((0.5 * z).exp());
            if integrator == Integrator::EtdRk4 {
                let [half1, _, _] = phi123(0.5 * z);
                let [p1, p2, p3] = phi123(z);
                s.q.push(0.5 * h * half1);
                s.f1.push(h * (p1 - 3.0 * p2 + 4.0 * p3));
                s.f2.push(h * (p2 - 2.0 * p3));
                s.f3.push(h * (-p2 + 4.0 * p3));
            }
        }
        s
    }
}

/// Fourier-side stepper for a fixed configuration and signed step.
struct Stepper {
    dealiaser: Dealiaser,
    cfg: NonlinearityConfig,
    integrator: Integrator,
    h: f64,
    k: StepCoefficients,
}

impl Stepper {
    fn new(cfg: &SolverConfig, h: f64) -> Result<Self> {
        let nl = cfg.nonlinearity;
        Ok(Self {
            dealiaser: Dealiaser::new(cfg.domain, cfg.pad_factor)?,
            cfg: nl,
            integrator: cfg.integrator,
            h,
            k: StepCoefficients::new(&cfg.domain, h, cfg.integrator),
        })
    }

    /// `N(c) = −i·F̂(c)`.
    fn n(&self, c: &[Complex64]) -> Vec<Complex64> {
        self.dealiaser.rhs_coeffs(c, &self.cfg).into_iter().map(|f| -I * f).collect()
    }

    fn step(&self, u: &[Complex64]) -> Vec<Complex64> {
        let k = &self.k;
        let len = u.len();
        match self.integrator {
            Integrator::EtdRk4 => {
                let nu = self.n(u);
                let a: Vec<Complex64> = (0..len).map(|j| k.e2[j] * u[j] + k.q[j] * nu[j]).collect();
                let na = self.n(&a);
                let b: Vec<Complex64> = (0..len).map(|j| k.e2[j] * u[j] + k.q[j] * na[j]).collect();
                let nb = self.n(&b);
                let c: Vec<Complex64> =
                    (0..len).map(|j| k.e2[j] * a[j] + k.q[j] * (2.0 * nb[j] - nu[j])).collect();
                let nc = self.n(&c);
                (0..len)
                    .map(|j| k.e[j] * u[j] + k.f1[j] * nu[j] + 2.0 * k.f2[j] * (na[j] + nb[j]) + k.f3[j] * nc[j])
                    .collect()
            }
            Integrator::IfRk4 => {
                let h = self.h;
                let k1: Vec<Complex64> = self.n(u).into_iter().map(|v| h * v).collect();
                let a: Vec<Complex64> = (0..len).map(|j| k.e2[j] * (u[j] + 0.5 * k1[j])).collect();
                let k2: Vec<Complex64> = self.n(&a).into_iter().map(|v| h * v).collect();
                let b: Vec<Complex64> = (0..len).map(|j| k.e2[j] * u[j] + 0.5 * k2[j]).collect();
                let k3: Vec<Complex64> = self.n(&b).into_iter().map(|v| h * v).collect();
                let c: Vec<Complex64> = (0..len).map(|j| k.e[j] * u[j] + k.e2[j] * k3[j]).collect();
                let k4: Vec<Complex64> = self.n(&c).into_iter().map(|v| h * v).collect();
                (0..len)
                    .map(|j| {
                        k.e[j] * u[j] + (k.e[j] * k1[j] + 2.0 * k.e2[j] * (k2[j] + k3[j]) + k4[j]) / 6.0
                    })
                    .collect()
            }
        }
    }
}

fn coeff_l2(domain: &Domain, c: &[Complex64]) -> f64 {
    (domain.period * c.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
}

fn check_edges(u0: &GridFunction) -> Result<()> {
    if u0.domain.kind == DomainKind::LineApprox {
        let n = u0.len();
        let edge = u0.values[0].norm().max(u0.values[n - 1].norm());
        if !(edge < EDGE_TOLERANCE) {
            return Err(Error::EdgeDecay { edge });
        }
    }
    Ok(())
}

/// March from `t = 0` with signed step; slices are returned in marching order.
fn march(u0: &GridFunction, cfg: &SolverConfig, sign: f64) -> Result<(Vec<GridFunction>, Vec<f64>, f64)> {
    cfg.validate()?;
    if u0.domain != cfg.domain {
        return Err(Error::DomainMismatch);
    }
    check_edges(u0)?;
    let steps = cfg.steps();
    let h = sign * cfg.effective_dt();
    let stepper = Stepper::new(cfg, h)?;
    let dl = &stepper.dealiaser;
    let limit = BLOW_UP_FACTOR * u0.linf_norm();
    let mut c = dl.coeffs(u0);
    let mut slices = vec![u0.clone()];
    let mut norms = vec![coeff_l2(&cfg.domain, &c)];
    for step in 1..=steps {
        c = stepper.step(&c);
        let time = step as f64 * h;
        if c.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::BlowUp { time });
        }
        let g = dl.grid(&c);
        if g.linf_norm() > limit {
            return Err(Error::BlowUp { time });
        }
        if step % cfg.save_every == 0 || step == steps {
            slices.push(g);
            norms.push(coeff_l2(&cfg.domain, &c));
        }
    }
    Ok((slices, norms, h * cfg.save_every as f64))
}

fn check_stride(cfg: &SolverConfig) -> Result<()> {
    if !cfg.steps().is_multiple_of(cfg.save_every) {
        return Err(Error::Parameter(format!(
            "save_every = {} does not divide the {} steps",
            cfg.save_every,
            cfg.steps()
        )));
    }
    Ok(())
}

/// Forward march on `[0, t_final]`.
pub fn solve(u0: &GridFunction, cfg: &SolverConfig) -> Result<Trajectory> {
    cfg.validate()?;
    check_stride(cfg)?;
    let (slices, l2_norms, dt) = march(u0, cfg, 1.0)?;
    Ok(Trajectory {
        domain: cfg.domain,
        t_start: 0.0,
        dt,
        slices,
        l2_norms,
        config: Some(*cfg),
        direction: Direction::Forward,
    })
}

/// Backward march on `[−t_final, 0]`, returned in increasing time.
pub fn solve_backward(u0: &GridFunction, cfg: &SolverConfig) -> Result<Trajectory> {
    cfg.validate()?;
    check_stride(cfg)?;
    let (mut slices, mut l2_norms, dt) = march(u0, cfg, -1.0)?;
    slices.reverse();
    l2_norms.reverse();
    let dt = -dt;
    Ok(Trajectory {
        domain: cfg.domain,
        t_start: -dt * (slices.len() - 1) as f64,
        dt,
        slices,
        l2_norms,
        config: Some(*cfg),
        direction: Direction::Backward,
    })
}

/// Two separate marches from `t = 0`, joined on `[−t_final, t_final]`.
pub fn solve_two_sided(u0: &GridFunction, cfg: &SolverConfig) -> Result<Trajectory> {
    let back = solve_backward(u0, cfg)?;
    let fwd = solve(u0, cfg)?;
    let mut slices = back.slices;
    let mut l2_norms = back.l2_norms;
    slices.extend(fwd.slices.into_iter().skip(1));
    l2_norms.extend(fwd.l2_norms.into_iter().skip(1));
    Ok(Trajectory {
        domain: cfg.domain,
        t_start: back.t_start,
        dt: fwd.dt,
        slices,
        l2_norms,
        config: Some(*cfg),
        direction: Direction::TwoSided,
    })
}

/// `∫₀ᵗ U_{t−t′} w(t′) dt′` by the composite trapezoid rule over the slices
/// of `w`. Both `0` and `t` must be sample times of `w`.
pub fn duhamel_apply(w: &Trajectory, t: f64) -> Result<GridFunction> {
    let i0 = w.index_of(0.0)?;
    let i1 = w.index_of(t)?;
    let (lo, hi, sign) = if i1 >= i0 { (i0, i1, 1.0) } else { (i1, i0, -1.0) };
    let mut acc = SpectralField::zeros(w.domain);
    if lo == hi {
        return Ok(acc.to_grid());
    }
    for m in lo..=hi {
        let weight = if m == lo || m == hi { 0.5 * w.dt } else { w.dt };
        let term = linear_propagate(&w.slices[m].to_spectral(), t - w.time(m));
        for (a, b) in acc.coeffs.iter_mut().zip(&term.coeffs) {
            *a += sign * weight * b;
        }
    }
    Ok(acc.to_grid())
}

/// Outcome of [`picard_iterate`].
#[derive(Debug, Clone)]
pub struct PicardReport {
    /// Last iterate on `[0, t_final]`.
    pub trajectory: Trajectory,
    /// `‖v^{(m+1)} − v^{(m)}‖` in the norm named by `norm`.
    pub differences: Vec<f64>,
    /// Successive ratios of `differences`, above the roundoff floor only.
    pub ratios: Vec<f64>,
    pub diverged: bool,
    pub norm: &'static str,
}

impl PicardReport {
    pub fn max_ratio(&self) -> f64 {
        self.ratios.iter().cloned().fold(0.0, f64::max)
    }
}

/// Fixed-point iteration of `v ↦ U_t u₀ − i∫₀ᵗ U_{t−t′} F(v(t′)) dt′` on the
/// time grid of `cfg`, with the Duhamel integral accumulated by the
/// trapezoid rule.
pub fn picard_iterate(u0: &GridFunction, cfg: &SolverConfig, n_iter: usize) -> Result<PicardReport> {
    cfg.validate()?;
    if u0.domain != cfg.domain {
        return Err(Error::DomainMismatch);
    }
    let steps = cfg.steps();
    let h = cfg.effective_dt();
    let dl = Dealiaser::new(cfg.domain, cfg.pad_factor)?;
    let d = cfg.domain;
    let c0 = dl.coeffs(u0);
    let prop = |t: f64| -> Vec<Complex64> {
        (0..d.n_points).map(|j| Complex64::from_polar(1.0, -t * d.xi(j) * d.xi(j))).collect()
    };
    let u_h = prop(h);
    let free: Vec<Vec<Complex64>> = (0..=steps)
        .map(|m| prop(m as f64 * h).iter().zip(&c0).map(|(p, c)| p * c).collect())
        .collect();
    let mut v = free.clone();
    let mut differences = Vec::new();
    let mut ratios = Vec::new();
    let mut diverged = false;
    let scale = free.iter().map(|c| coeff_l2(&d, c)).fold(0.0, f64::max);
    let floor = 1e-13 * scale.max(f64::MIN_POSITIVE);
    let mut rising = 0;
    for _ in 0..n_iter {
        let w: Vec<Vec<Complex64>> = v
            .par_iter()
            .map(|c| dl.rhs_coeffs(c, &cfg.nonlinearity).into_iter().map(|f| -I * f).collect())
            .collect();
        let mut next = Vec::with_capacity(steps + 1);
        let mut acc = vec![ZERO; d.n_points];
        next.push(free[0].clone());
        for m in 0..steps {
            for j in 0..d.n_points {
                acc[j] = u_h[j] * acc[j] + 0.5 * h * (u_h[j] * w[m][j] + w[m + 1][j]);
            }
            next.push(free[m + 1].iter().zip(&acc).map(|(a, b)| a + b).collect());
        }
        let diff = next
            .iter()
            .zip(&v)
            .map(|(a, b)| {
                let e: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
                coeff_l2(&d, &e)
            })
            .fold(0.0, f64::max);
        if let Some(&prev) = differences.last() {
            if prev > floor && diff > floor {
                let r = diff / prev;
                ratios.push(r);
                rising = if r >= 1.0 { rising + 1 } else { 0 };
            }
        }
        differences.push(diff);
        v = next;
        if rising >= 3 || !diff.is_finite() {
            diverged = true;
            break;
        }
        if diff <= floor {
            break;
        }
    }
    let slices: Vec<GridFunction> = v.iter().map(|c| dl.grid(c)).collect();
    let l2_norms = v.iter().map(|c| coeff_l2(&d, c)).collect();
    let trajectory = Trajectory {
        domain: d,
        t_start: 0.0,
        dt: h,
        slices,
        l2_norms,
        config: Some(*cfg),
        direction: Direction::Forward,
    };
    Ok(PicardReport { trajectory, differences, ratios, diverged, norm: "C_T L2" })
}

/// Scaling parameter `σ ∈ {1, 2, 4, …}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalingParams {
    pub sigma: u32,
}

impl ScalingParams {
    pub fn new(sigma: u32) -> Result<Self> {
        if sigma == 0 || !sigma.is_power_of_two() {
            return Err(Error::Parameter(format!("scaling factor {sigma} must be a power of two")));
        }
        Ok(Self { sigma })
    }

    pub fn as_f64(self) -> f64 {
        self.sigma as f64
    }
}

/// `u_σ(x, t) = σ^{−1/2} u(x/σ, t/σ²)` on the box enlarged by `σ`.
///
/// Samples are relabelled rather than interpolated: grid point `x_j` maps
/// to `σx_j` and time `t` to `σ²t`, with the point count unchanged.
pub fn rescale(traj: &Trajectory, sigma: ScalingParams) -> Result<Trajectory> {
    let d = traj.domain;
    if d.kind != DomainKind::LineApprox {
        return Err(Error::WrongDomain { expected: "line" });
    }
    let s = sigma.as_f64();
    let domain = Domain { period: d.period * s, ..d };
    let amp = Complex64::new(s.powf(-0.5), 0.0);
    let slices: Vec<GridFunction> =
        traj.slices.iter().map(|g| GridFunction { domain, values: g.scaled(amp).values }).collect();
    let l2_norms = slices.iter().map(GridFunction::l2_norm).collect();
    let config = traj.config.map(|c| SolverConfig { domain, dt: c.dt * s * s, t_final: c.t_final * s * s, ..c });
    Ok(Trajectory {
        domain,
        t_start: traj.t_start * s * s,
        dt: traj.dt * s * s,
        slices,
        l2_norms,
        config,
        direction: traj.direction,
    })
}

/// Rescaled initial datum on the enlarged box.
pub fn rescale_initial(u0: &GridFunction, sigma: ScalingParams) -> Result<GridFunction> {
    let t = Trajectory::from_slices(u0.domain, 0.0, 1.0, vec![u0.clone()]);
    Ok(rescale(&t, sigma)?.slices.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::sobolev_norm;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn torus_cfg(n: usize, lambda: f64, gauged: bool, dt: f64, t: f64) -> SolverConfig {
        let d = Domain::torus(n).unwrap();
        let nl = NonlinearityConfig { lambda, k_power: 1, gauged, kind: DomainKind::Torus };
        SolverConfig::new(d, nl, dt, t)
    }

    fn smooth_torus(d: Domain, band: i64, h1: f64, rng: &mut ChaCha8Rng) -> GridFunction {
        let mut f = SpectralField::zeros(d);
        for k in -band..=band {
            let j = d.slot(k).unwrap();
            f.coeffs[j] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) / (1.0 + (k * k) as f64);
        }
        let s = h1 / sobolev_norm(&f, 1.0);
        f.coeffs.iter_mut().for_each(|c| *c *= s);
        f.to_grid()
    }

    fn plane_wave_error(dt: f64, integrator: Integrator) -> f64 {
        let a = Complex64::new(0.5, 0.0);
        let mut cfg = torus_cfg(256, 0.0, false, dt, 0.1);
        cfg.integrator = integrator;
        let u0 = GridFunction::from_fn(cfg.domain, |x| a * Complex64::from_polar(1.0, x));
        let traj = solve(&u0, &cfg).unwrap();
        let omega = 1.0 - a.norm_sqr();
        let t = traj.t_end();
        let exact = GridFunction::from_fn(cfg.domain, |x| a * Complex64::from_polar(1.0, x - omega * t));
        traj.slices.last().unwrap().sub(&exact).l2_norm() / exact.l2_norm()
    }

    #[test]
    fn propagator_examples() {
        let d = Domain::torus(16).unwrap();
        let f = SpectralField::unit_mass(d, 2).unwrap();
        let g = linear_propagate(&f, PI / 4.0);
        assert!((g.at_mode(2) - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        assert_eq!(linear_propagate(&f, 0.0), f);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = smooth_torus(d, 6, 1.0, &mut rng).to_spectral();
        let back = linear_propagate(&linear_propagate(&r, 0.37), -0.37);
        assert!(back.max_abs_diff(&r) < 1e-13);
        assert!((linear_propagate(&r, 1.3).l2_norm() - r.l2_norm()).abs() < 1e-14);
        let st = linear_propagate(&linear_propagate(&r, 0.2), 0.5);
        assert!(st.max_abs_diff(&linear_propagate(&r, 0.7)) < 1e-13);
    }

    #[test]
    fn phi_series_matches_closed_form_at_switch() {
        for z in [Complex64::new(0.0, 0.999), Complex64::new(0.0, -1.001), Complex64::new(0.3, 0.95)] {
            let s = phi123(z * (0.999 / z.norm()));
            let c = phi123(z * (1.001 / z.norm()));
            for k in 0..3 {
                assert!((s[k] - c[k]).norm() < 1e-2);
            }
        }
        let p = phi123(Complex64::new(0.0, 0.0));
        assert!((p[0] - 1.0).norm() < 1e-15 && (p[1] - 0.5).norm() < 1e-15 && (p[2] - 1.0 / 6.0).norm() < 1e-15);
        // φ₁ at z = 2i in closed form
        let z = Complex64::new(0.0, 2.0);
        assert!((phi123(z)[0] - (z.exp() - 1.0) / z).norm() < 1e-15);
    }

    #[test]
    fn zero_data_stays_zero() {
        let cfg = torus_cfg(32, 1.0, false, 0.01, 0.1);
        let traj = solve(&GridFunction::zeros(cfg.domain), &cfg).unwrap();
        assert_eq!(traj.len(), 11);
        assert!(traj.slices.iter().all(|g| g.linf_norm() == 0.0));
    }

    #[test]
    fn plane_wave_accuracy_and_order() {
        let e1 = plane_wave_error(1e-4, Integrator::EtdRk4);
        assert!(e1 < 1e-8, "error {e1}");
        let coarse = plane_wave_error(5e-2, Integrator::EtdRk4);
        let fine = plane_wave_error(2.5e-2, Integrator::EtdRk4);
        assert!(coarse / fine >= 8.0, "ratio {}", coarse / fine);
        let coarse = plane_wave_error(5e-2, Integrator::IfRk4);
        let fine = plane_wave_error(2.5e-2, Integrator::IfRk4);
        assert!(coarse / fine >= 8.0, "ratio {}", coarse / fine);
    }

    #[test]
    fn mass_is_conserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for gauged in [false, true] {
            let cfg = torus_cfg(64, 0.5, gauged, 1e-3, 0.05);
            let u0 = smooth_torus(cfg.domain, 4, 0.3, &mut rng);
            let traj = solve(&u0, &cfg).unwrap();
            assert!(traj.mass_drift() < 1e-9, "drift {}", traj.mass_drift());
        }
    }

    #[test]
    fn cubic_small_amplitude_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let cfg = torus_cfg(64, 0.0, false, 1e-3, 0.1);
        let base = smooth_torus(cfg.domain, 4, 1.0, &mut rng);
        let defect = |eps: f64| {
            let u0 = base.scaled(Complex64::new(eps, 0.0));
            let traj = solve(&u0, &cfg).unwrap();
            let free = linear_propagate(&u0.to_spectral(), traj.t_end()).to_grid();
            traj.slices.last().unwrap().sub(&free).l2_norm()
        };
        let r = defect(0.02) / defect(0.01);
        assert!((r - 8.0).abs() < 0.5, "ratio {r}");
    }

    #[test]
    fn deterministic_and_reversible() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cfg = torus_cfg(64, 0.3, false, 1e-3, 0.05);
        let u0 = smooth_torus(cfg.domain, 4, 0.3, &mut rng);
        let a = solve(&u0, &cfg).unwrap();
        let b = solve(&u0, &cfg).unwrap();
        assert_eq!(a, b);
        let back = solve_backward(a.slices.last().unwrap(), &cfg).unwrap();
        assert!(back.slices[0].max_abs_diff(&u0) < 1e-10);
        let two = solve_two_sided(&u0, &cfg).unwrap();
        assert_eq!(two.len(), 2 * a.len() - 1);
        assert!((two.t_start + 0.05).abs() < 1e-12 && (two.t_end() - 0.05).abs() < 1e-12);
        assert!(two.at(0.0).unwrap().max_abs_diff(&u0) == 0.0);
    }

    #[test]
    fn solver_errors() {
        let d = Domain::line(64, 2).unwrap();
        let nl = NonlinearityConfig::original(DomainKind::LineApprox, 0.0, 1);
        let cfg = SolverConfig::new(d, nl, 1e-3, 0.01);
        let bump = GridFunction::from_fn(d, |_| Complex64::new(1.0, 0.0));
        assert!(matches!(solve(&bump, &cfg), Err(Error::EdgeDecay { .. })));
        let mut bad = cfg;
        bad.pad_factor = 3;
        assert!(bad.validate().is_err());
        bad = cfg;
        bad.dt = 1.0;
        assert!(bad.validate().is_err());
        // focusing quintic with a huge step blows up
        let t = torus_cfg(32, -50.0, false, 0.05, 1.0);
        let mut t = t;
        t.nonlinearity.k_power = 3;
        let u0 = GridFunction::from_fn(t.domain, |x| Complex64::new(2.0 + x.cos(), 0.0));
        assert!(matches!(solve(&u0, &t), Err(Error::BlowUp { .. })));
    }

    #[test]
    fn duhamel_closed_form_and_order() {
        let d = Domain::torus(32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let g = smooth_torus(d, 5, 1.0, &mut rng).to_spectral();
        let t = 0.4;
        let w = Trajectory::from_fn(d, 0.0, 0.01, 41, |s| linear_propagate(&g, s).to_grid());
        let exact = linear_propagate(&g, t).to_grid().scaled(Complex64::new(t, 0.0));
        assert!(duhamel_apply(&w, t).unwrap().max_abs_diff(&exact) < 1e-10);
        assert_eq!(duhamel_apply(&w, 0.0).unwrap().linf_norm(), 0.0);
        assert!(matches!(duhamel_apply(&w, 0.5), Err(Error::Range { .. })));
        // non-trivial integrand w(t′) = e^{t′}g, exact ∫₀ᵗ e^{−iξ²(t−s)}e^s ds = e^{−iξ²t}(e^{(1+iξ²)t} − 1)/(1+iξ²)
        let err = |dt: f64| {
            let count = (t / dt).round() as usize + 1;
            let w = Trajectory::from_fn(d, 0.0, dt, count, |s| g.to_grid().scaled(Complex64::new(s.exp(), 0.0)));
            let exact = SpectralField {
                domain: d,
                coeffs: g
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, c)| {
                        let z = Complex64::new(1.0, d.xi(j).powi(2));
                        c * Complex64::from_polar(1.0, -d.xi(j).powi(2) * t) * ((z * t).exp() - 1.0) / z
                    })
                    .collect(),
            };
            duhamel_apply(&w, t).unwrap().to_spectral().sub(&exact).l2_norm()
        };
        let r = err(0.01) / err(0.005);
        assert!((r - 4.0).abs() < 0.2, "ratio {r}");
    }

    #[test]
    fn picard_contracts_and_matches_solver() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cfg = torus_cfg(64, 0.0, false, 2.5e-4, 0.05);
        let u0 = smooth_torus(cfg.domain, 4, 0.1, &mut rng);
        let rep = picard_iterate(&u0, &cfg, 20).unwrap();
        assert!(!rep.diverged);
        assert!(rep.max_ratio() < 0.5, "ratios {:?}", rep.ratios);
        let traj = solve(&u0, &cfg).unwrap();
        assert!(rep.trajectory.sup_l2_distance(&traj).unwrap() < 1e-6);
        let zero = picard_iterate(&GridFunction::zeros(cfg.domain), &cfg, 3).unwrap();
        assert!(zero.trajectory.slices.iter().all(|g| g.linf_norm() == 0.0));
    }

    #[test]
    fn scaling_preserves_norms() {
        let d = Domain::line(256, 4).unwrap();
        let nl = NonlinearityConfig::original(DomainKind::LineApprox, 0.0, 1);
        let cfg = SolverConfig::new(d, nl, 1e-3, 0.02);
        let u0 = GridFunction::from_fn(d, |x| Complex64::new(0.4 * (-x * x).exp(), 0.0) * Complex64::from_polar(1.0, x));
        let traj = solve(&u0, &cfg).unwrap();
        let one = rescale(&traj, ScalingParams::new(1).unwrap()).unwrap();
        assert_eq!(one.slices, traj.slices);
        for sigma in [2, 4] {
            let r = rescale(&traj, ScalingParams::new(sigma).unwrap()).unwrap();
            for m in 0..traj.len() {
                assert!((r.time(m) - (sigma * sigma) as f64 * traj.time(m)).abs() < 1e-12);
                assert!((r.slices[m].l2_norm() - traj.slices[m].l2_norm()).abs() < 1e-12);
            }
            // the rescaled datum evolves into the rescaled solution
            let mut cfg_s = r.config.unwrap();
            cfg_s.nonlinearity = nl;
            let direct = solve(&r.slices[0], &cfg_s).unwrap();
            assert!(direct.sup_l2_distance(&r).unwrap() < 1e-8);
        }
        assert!(rescale(&Trajectory::from_slices(Domain::torus(8).unwrap(), 0.0, 1.0, vec![]), ScalingParams::new(2).unwrap()).is_err());
        assert!(ScalingParams::new(3).is_err());
    }
}
