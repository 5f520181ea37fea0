//! Gauge transformations `G` (line) and `𝒢` (torus).
//!
//! `G(f) = e^{−iJ(f)}f` with `J(f)(x) = ∫_{−∞}^x |f|²`, and
//! `𝒢(f) = e^{−i𝒥(f)}f` with `𝒥(f)` the zero-mean antiderivative of
//! `|f|² − μ(f)`. Both phases depend on `|f|` only, so the inverse uses the
//! conjugate phase computed from the image. The phase is built from the grid
//! samples of `|f|²`, which makes the round trip exact to rounding.
//!
//! On trajectories the torus gauge also translates by `2μt`, removing the
//! transport term `2iμ∂ₓv` that the mean-corrected phase leaves behind.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fft;
use crate::frequency::{Domain, DomainKind, GridFunction, SpectralField};
use crate::nonlinear::{Dealiaser, DEFAULT_PAD};
use crate::solver::Trajectory;
use crate::spaces::{besov_norm, BesovParams};

pub const MU_DRIFT_TOLERANCE: f64 = 1e-8;

/// `μ(f) = (1/2π)‖f‖²_{L²(𝕋)}`.
pub fn mass_density_mean(f: &GridFunction) -> Result<f64> {
    if !f.domain.is_torus() {
        return Err(Error::WrongDomain { expected: "torus" });
    }
    Ok(sample_mean(f))
}

fn sample_mean(f: &GridFunction) -> f64 {
    f.values.iter().map(|v| v.norm_sqr()).sum::<f64>() / f.len() as f64
}

/// Real phase `J(f)` or `𝒥(f)` on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugePhase {
    pub domain: Domain,
    pub phase: Vec<f64>,
    /// `μ(f)` on the torus.
    pub mu: Option<f64>,
}

impl GaugePhase {
    pub fn of(f: &GridFunction) -> Self {
        let d = f.domain;
        let n = f.len();
        let mean = sample_mean(f);
        let mut c: Vec<Complex64> = f.values.iter().map(|v| Complex64::new(v.norm_sqr() - mean, 0.0)).collect();
        fft::forward(&mut c);
        for (j, v) in c.iter_mut().enumerate() {
            let xi = d.xi(j);
            *v = if j == 0 || fft::signed_index(j, n) == -(n as i64) / 2 {
                // zero mode and the unpaired Nyquist mode carry no antiderivative
                Complex64::new(0.0, 0.0)
            } else {
                *v / Complex64::new(0.0, xi * n as f64)
            };
        }
        fft::inverse(&mut c);
        let zero_mean: Vec<f64> = c.iter().map(|v| v.re).collect();
        match d.kind {
            DomainKind::Torus => Self { domain: d, phase: zero_mean, mu: Some(mean) },
            DomainKind::LineApprox => {
                let start = zero_mean[0];
                let phase = (0..n).map(|j| mean * (d.x(j) - d.x0()) + zero_mean[j] - start).collect();
                Self { domain: d, phase, mu: None }
            }
        }
    }

    fn apply(&self, f: &GridFunction, sign: f64) -> GridFunction {
        let values = f.values.iter().zip(&self.phase).map(|(v, p)| v * Complex64::from_polar(1.0, sign * p)).collect();
        GridFunction { domain: f.domain, values }
    }
}

/// `G(f)` or `𝒢(f)` by domain.
pub fn gauge_forward(f: &GridFunction) -> GridFunction {
    GaugePhase::of(f).apply(f, -1.0)
}

/// Inverse gauge, `e^{+iJ(|g|)}g`.
pub fn gauge_inverse(g: &GridFunction) -> GridFunction {
    GaugePhase::of(g).apply(g, 1.0)
}

fn translate(f: &GridFunction, shift: f64) -> GridFunction {
    // f(x − shift)
    let s = f.to_spectral();
    let d = f.domain;
    let coeffs = s.coeffs.iter().enumerate().map(|(j, c)| c * Complex64::from_polar(1.0, -shift * d.xi(j))).collect();
    SpectralField { domain: d, coeffs }.to_grid()
}

fn reference_index(traj: &Trajectory) -> usize {
    traj.index_of(0.0).unwrap_or(0)
}

/// `μ` at `t = 0` (or the first slice) and the largest deviation from it.
pub fn mu_drift(traj: &Trajectory) -> Result<(f64, f64)> {
    if !traj.domain.is_torus() {
        return Err(Error::WrongDomain { expected: "torus" });
    }
    let mu0 = sample_mean(&traj.slices[reference_index(traj)]);
    let drift = traj.slices.iter().map(|g| (sample_mean(g) - mu0).abs()).fold(0.0, f64::max);
    Ok((mu0, drift))
}

/// Gauge applied slice by slice, with the torus translation by `2μt`.
pub fn gauge_trajectory(traj: &Trajectory) -> Result<Trajectory> {
    match traj.domain.kind {
        DomainKind::LineApprox => Ok(traj.map_slices(|_, g| gauge_forward(g))),
        DomainKind::Torus => {
            let (mu, drift) = mu_drift(traj)?;
            let tolerance = MU_DRIFT_TOLERANCE * mu.max(1.0);
            if drift > tolerance {
                return Err(Error::ConservationViolation { drift, tolerance });
            }
            Ok(traj.map_slices(|t, g| translate(&gauge_forward(g), 2.0 * mu * t)))
        }
    }
}

/// Inverse of [`gauge_trajectory`].
pub fn ungauge_trajectory(traj: &Trajectory) -> Result<Trajectory> {
    match traj.domain.kind {
        DomainKind::LineApprox => Ok(traj.map_slices(|_, g| gauge_inverse(g))),
        DomainKind::Torus => {
            let (mu, drift) = mu_drift(traj)?;
            let tolerance = MU_DRIFT_TOLERANCE * mu.max(1.0);
            if drift > tolerance {
                return Err(Error::ConservationViolation { drift, tolerance });
            }
            Ok(traj.map_slices(|t, g| gauge_inverse(&translate(g, -2.0 * mu * t))))
        }
    }
}

/// `ψ(v) = (1/2π)∫(2Im(v∂ₓv̄) − ½|v|⁴) + μ(v)²`.
pub fn psi_functional(v: &GridFunction) -> Result<f64> {
    let mu = mass_density_mean(v)?;
    let dl = Dealiaser::new(v.domain, DEFAULT_PAD)?;
    let c = dl.coeffs(v);
    let u = dl.fine(&c);
    let ux = dl.fine(&dl.derivative(&c));
    let m = u.len() as f64;
    let mean: f64 =
        u.iter().zip(&ux).map(|(a, b)| 2.0 * (a * b.conj()).im - 0.5 * a.norm_sqr().powi(2)).sum::<f64>() / m;
    Ok(mean + mu * mu)
}

/// Error diagnostics for a gauge computation. All entries are nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct GaugeReport {
    pub roundtrip_error: f64,
    pub modulus_error: f64,
    pub mu_drift: f64,
}

impl GaugeReport {
    pub fn for_field(f: &GridFunction) -> Self {
        let g = gauge_forward(f);
        let back = gauge_inverse(&g);
        let modulus_error = f.values.iter().zip(&g.values).map(|(a, b)| (a.norm() - b.norm()).abs()).fold(0.0, f64::max);
        Self { roundtrip_error: back.max_abs_diff(f), modulus_error, mu_drift: 0.0 }
    }

    pub fn for_trajectory(traj: &Trajectory) -> Result<Self> {
        let g = gauge_trajectory(traj)?;
        let back = ungauge_trajectory(&g)?;
        let mut r = Self::default();
        for (m, (a, b)) in traj.slices.iter().zip(&back.slices).enumerate() {
            r.roundtrip_error = r.roundtrip_error.max(a.max_abs_diff(b));
            // translation moves the modulus, so compare norms instead
            r.modulus_error = r.modulus_error.max((a.l2_norm() - g.slices[m].l2_norm()).abs());
        }
        if traj.domain.is_torus() {
            r.mu_drift = mu_drift(traj)?.1;
        }
        Ok(r)
    }
}

/// `‖G(f) − G(g)‖_{B^{1/2}_{2,∞}} / ‖f − g‖_{B^{1/2}_{2,∞}}`.
pub fn bilipschitz_ratio(f: &GridFunction, g: &GridFunction) -> Result<f64> {
    if f.domain != g.domain {
        return Err(Error::DomainMismatch);
    }
    let p = BesovParams::sup(0.5);
    let den = besov_norm(&f.sub(g).to_spectral(), p);
    if den == 0.0 {
        return Err(Error::Parameter("bilipschitz ratio needs f ≠ g".into()));
    }
    Ok(besov_norm(&gauge_forward(f).sub(&gauge_forward(g)).to_spectral(), p) / den)
}

/// Largest [`bilipschitz_ratio`] over the given pairs, evaluated in parallel.
pub fn bilipschitz_constant(pairs: &[(GridFunction, GridFunction)]) -> Result<f64> {
    let ratios: Result<Vec<f64>> = pairs.par_iter().map(|(f, g)| bilipschitz_ratio(f, g)).collect();
    Ok(ratios?.into_iter().fold(0.0, f64::max))
}

/// Increment of the torus phase over one period, `∫_𝕋(|f|² − μ)`, which
/// vanishes when the phase is periodic.
pub fn period_increment(f: &GridFunction) -> f64 {
    let mean = sample_mean(f);
    (f.values.iter().map(|v| v.norm_sqr() - mean).sum::<f64>() * f.domain.dx()).abs()
}
