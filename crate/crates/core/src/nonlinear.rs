//! Right-hand sides of the original and gauged equations.
//!
//! Writing the equations as `i∂ₜu + ∂ₓ²u = F(u)`, this module evaluates
//!
//! * original: `F = i∂ₓ(|u|²u) + λ|u|^{2k}u`
//! * gauged:   `F = −i𝒯(v) − ½𝒬(v) + λ|v|^{2k}v`
//!
//! Products are formed on a zero-padded grid (`pad_factor × n` points) and
//! truncated back, so polynomial terms up to degree 5 are alias-free at
//! `pad_factor = 4`. The `*_fourier` functions evaluate the trilinear and
//! quintic forms as constrained lattice convolutions and serve as oracles.
//!
//! Convolution normalisation: with `f̂ = (2π)^{-1/2}∫e^{-ixξ}f`, a product of
//! `p` factors has transform `(2π)^{-(p-1)/2}` times the `p`-fold convolution
//! (counting measure on ℤ, `Δξ`-weighted sums on the line lattice).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fft;
use crate::frequency::{Domain, DomainKind, GridFunction, SpectralField};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub const DEFAULT_PAD: usize = 4;
pub const TRILINEAR_ORACLE_LIMIT: usize = 64;
pub const QUINTIC_ORACLE_LIMIT: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonlinearityConfig {
    pub lambda: f64,
    /// `k` in `λ|u|^{2k}u`.
    pub k_power: u32,
    pub gauged: bool,
    pub kind: DomainKind,
}

impl NonlinearityConfig {
    pub fn original(kind: DomainKind, lambda: f64, k_power: u32) -> Self {
        Self { lambda, k_power, gauged: false, kind }
    }

    pub fn gauged(kind: DomainKind, lambda: f64, k_power: u32) -> Self {
        Self { lambda, k_power, gauged: true, kind }
    }
}

/// Hyperplanes removed from the torus convolution sums. Inactive on the line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvolutionConstraint {
    pub active: bool,
}

impl ConvolutionConstraint {
    pub fn for_domain(kind: DomainKind) -> Self {
        Self { active: kind == DomainKind::Torus }
    }

    /// 𝒯: `ξ₁ ≠ ξ` and `ξ₂ ≠ ξ`.
    pub fn trilinear_admits(&self, k: i64, k1: i64, k2: i64) -> bool {
        !self.active || (k1 != k && k2 != k)
    }

    /// 𝒬: `ξ₁+ξ₂+ξ₃+ξ₄ ≠ 0`, `ξ₁+ξ₂ ≠ 0`, `ξ₃+ξ₄ ≠ 0`.
    pub fn quintic_admits(&self, k1: i64, k2: i64, k3: i64, k4: i64) -> bool {
        !self.active || (k1 + k2 + k3 + k4 != 0 && k1 + k2 != 0 && k3 + k4 != 0)
    }
}

/// Zero-padded pseudospectral workspace for one lattice.
///
/// Coefficients here are Fourier-series amplitudes `c_k` with
/// `u(x_j) = Σ_k c_k e^{2πi jk/n}`.
#[derive(Debug, Clone)]
pub struct Dealiaser {
    pub domain: Domain,
    pub pad: usize,
    fine_len: usize,
}

impl Dealiaser {
    pub fn new(domain: Domain, pad: usize) -> Result<Self> {
        if pad == 0 {
            return Err(Error::Parameter("pad factor must be positive".into()));
        }
        Ok(Self { domain, pad, fine_len: pad * domain.n_points })
    }

    pub fn n(&self) -> usize {
        self.domain.n_points
    }

    pub fn coeffs(&self, g: &GridFunction) -> Vec<Complex64> {
        let mut c = g.values.clone();
        fft::forward(&mut c);
        let inv = 1.0 / self.n() as f64;
        c.iter_mut().for_each(|v| *v *= inv);
        c
    }

    pub fn grid(&self, c: &[Complex64]) -> GridFunction {
        let mut v = c.to_vec();
        fft::inverse(&mut v);
        GridFunction { domain: self.domain, values: v }
    }

    pub fn derivative(&self, c: &[Complex64]) -> Vec<Complex64> {
        c.iter().enumerate().map(|(j, v)| v * Complex64::new(0.0, self.domain.xi(j))).collect()
    }

    /// Values of the trigonometric polynomial on the padded grid.
    pub fn fine(&self, c: &[Complex64]) -> Vec<Complex64> {
        let n = self.n();
        let m = self.fine_len;
        let mut f = vec![ZERO; m];
        for (j, v) in c.iter().enumerate() {
            let k = fft::signed_index(j, n);
            let slot = if k >= 0 { k as usize } else { (m as i64 + k) as usize };
            f[slot] = *v;
        }
        fft::inverse(&mut f);
        f
    }

    /// Coefficients of padded-grid values, truncated to the base lattice.
    pub fn coarse(&self, mut f: Vec<Complex64>) -> Vec<Complex64> {
        let n = self.n();
        let m = self.fine_len;
        fft::forward(&mut f);
        let inv = 1.0 / m as f64;
        (0..n)
            .map(|j| {
                let k = fft::signed_index(j, n);
                let slot = if k >= 0 { k as usize } else { (m as i64 + k) as usize };
                f[slot] * inv
            })
            .collect()
    }

    /// Coefficients of `F(u)` for the configured equation.
    pub fn rhs_coeffs(&self, c: &[Complex64], cfg: &NonlinearityConfig) -> Vec<Complex64> {
        let u = self.fine(c);
        let ux = self.fine(&self.derivative(c));
        let torus = self.domain.is_torus();
        let m = u.len() as f64;
        let out: Vec<Complex64> = if !cfg.gauged {
            u.iter()
                .zip(&ux)
                .map(|(&u, &ux)| {
                    let rho = u.norm_sqr();
                    let rho_x = 2.0 * (u.conj() * ux).re;
                    I * (rho_x * u + rho * ux) + power_term(u, rho, cfg.lambda, cfg.k_power)
                })
                .collect()
        } else {
            let (mean_im, mean_rho, mean_rho2) = if torus {
                let mut a = 0.0;
                let mut b = 0.0;
                let mut c2 = 0.0;
                for (v, vx) in u.iter().zip(&ux) {
                    a += 2.0 * (v * vx.conj()).im;
                    let r = v.norm_sqr();
                    b += r;
                    c2 += r * r;
                }
                (a / m, b / m, c2 / m)
            } else {
                (0.0, 0.0, 0.0)
            };
            u.iter()
                .zip(&ux)
                .map(|(&v, &vx)| {
                    let rho = v.norm_sqr();
                    let mut t = v * v * vx.conj();
                    let q = if torus {
                        t -= I * mean_im * v;
                        (rho * rho - mean_rho2) * v - 2.0 * mean_rho * (rho - mean_rho) * v
                    } else {
                        rho * rho * v
                    };
                    -I * t - 0.5 * q + power_term(v, rho, cfg.lambda, cfg.k_power)
                })
                .collect()
        };
        self.coarse(out)
    }
}

#[inline]
fn power_term(u: Complex64, rho: f64, lambda: f64, k: u32) -> Complex64 {
    if lambda == 0.0 {
        ZERO
    } else {
        lambda * rho.powi(k as i32) * u
    }
}

fn same_domain(fields: &[&GridFunction]) -> Result<Domain> {
    let d = fields[0].domain;
    if fields.iter().any(|f| f.domain != d) {
        return Err(Error::DomainMismatch);
    }
    Ok(d)
}

fn check_kind(d: &Domain, cfg: &NonlinearityConfig) -> Result<()> {
    if d.kind != cfg.kind {
        return Err(Error::DomainMismatch);
    }
    Ok(())
}

/// `i∂ₓ(|u|²u) + λ|u|^{2k}u`.
pub fn rhs_original(u: &GridFunction, cfg: &NonlinearityConfig) -> Result<GridFunction> {
    if cfg.gauged {
        return Err(Error::Parameter("rhs_original called with a gauged configuration".into()));
    }
    check_kind(&u.domain, cfg)?;
    let dl = Dealiaser::new(u.domain, DEFAULT_PAD)?;
    Ok(dl.grid(&dl.rhs_coeffs(&dl.coeffs(u), cfg)))
}

/// `−i𝒯(v) − ½𝒬(v) + λ|v|^{2k}v` with the domain's 𝒯 and 𝒬.
pub fn rhs_gauged(v: &GridFunction, cfg: &NonlinearityConfig) -> Result<GridFunction> {
    if !cfg.gauged {
        return Err(Error::Parameter("rhs_gauged called with an ungauged configuration".into()));
    }
    check_kind(&v.domain, cfg)?;
    let dl = Dealiaser::new(v.domain, DEFAULT_PAD)?;
    Ok(dl.grid(&dl.rhs_coeffs(&dl.coeffs(v), cfg)))
}

/// Pointwise `λ|v|^{2k}v`, formed on the padded grid.
pub fn power_nonlinearity(v: &GridFunction, lambda: f64, k: u32) -> Result<GridFunction> {
    let dl = Dealiaser::new(v.domain, DEFAULT_PAD)?;
    let f: Vec<Complex64> =
        dl.fine(&dl.coeffs(v)).into_iter().map(|u| lambda * u.norm_sqr().powi(k as i32) * u).collect();
    Ok(dl.grid(&dl.coarse(f)))
}

/// Trilinear form `𝒯(v₁, v₂, v₃)`.
///
/// Line: `v₁v₂∂ₓv₃`. Torus: `v₁v₂∂ₓv₃ − ⟨v₂∂ₓv₃⟩v₁ − ⟨v₁∂ₓv₃⟩v₂`, with `⟨·⟩`
/// the spatial mean; at `(v, v, v̄)` this is `v²∂ₓv̄ − (i/2π)v∫2Im(v∂ₓv̄)`.
pub fn trilinear_t_physical(v1: &GridFunction, v2: &GridFunction, v3: &GridFunction) -> Result<GridFunction> {
    let d = same_domain(&[v1, v2, v3])?;
    let dl = Dealiaser::new(d, DEFAULT_PAD)?;
    let a = dl.fine(&dl.coeffs(v1));
    let b = dl.fine(&dl.coeffs(v2));
    let cx = dl.fine(&dl.derivative(&dl.coeffs(v3)));
    let mut out: Vec<Complex64> = a.iter().zip(&b).zip(&cx).map(|((a, b), c)| a * b * c).collect();
    if d.is_torus() {
        let m = a.len() as f64;
        let m23: Complex64 = b.iter().zip(&cx).map(|(b, c)| b * c).sum::<Complex64>() / m;
        let m13: Complex64 = a.iter().zip(&cx).map(|(a, c)| a * c).sum::<Complex64>() / m;
        for ((o, a), b) in out.iter_mut().zip(&a).zip(&b) {
            *o -= m23 * a + m13 * b;
        }
    }
    Ok(dl.grid(&dl.coarse(out)))
}

/// `𝒯(v) = 𝒯(v, v, v̄)`.
pub fn trilinear_t(v: &GridFunction) -> Result<GridFunction> {
    trilinear_t_physical(v, v, &v.conj())
}

/// Quintic form `𝒬(v₁, …, v₅)`.
///
/// With `p = v₁v₂`, `q = v₃v₄`: line `pqv₅`; torus
/// `(pq − ⟨pq⟩ − ⟨p⟩q − ⟨q⟩p + 2⟨p⟩⟨q⟩)v₅`, which at `(v, v̄, v, v̄, v)` is
/// `(|v|⁴ − ⟨|v|⁴⟩)v − 2μ(|v|² − μ)v`.
pub fn quintic_q_form(vs: [&GridFunction; 5]) -> Result<GridFunction> {
    let d = same_domain(&vs)?;
    let dl = Dealiaser::new(d, DEFAULT_PAD)?;
    let f: Vec<Vec<Complex64>> = vs.iter().map(|v| dl.fine(&dl.coeffs(v))).collect();
    let m = f[0].len();
    let p: Vec<Complex64> = (0..m).map(|i| f[0][i] * f[1][i]).collect();
    let q: Vec<Complex64> = (0..m).map(|i| f[2][i] * f[3][i]).collect();
    let out: Vec<Complex64> = if d.is_torus() {
        let mf = m as f64;
        let mp = p.iter().sum::<Complex64>() / mf;
        let mq = q.iter().sum::<Complex64>() / mf;
        let mpq = p.iter().zip(&q).map(|(a, b)| a * b).sum::<Complex64>() / mf;
        (0..m).map(|i| (p[i] * q[i] - mpq - mp * q[i] - mq * p[i] + 2.0 * mp * mq) * f[4][i]).collect()
    } else {
        (0..m).map(|i| p[i] * q[i] * f[4][i]).collect()
    };
    Ok(dl.grid(&dl.coarse(out)))
}

/// `𝒬(v) = 𝒬(v, v̄, v, v̄, v)`.
pub fn quintic_q_physical(v: &GridFunction) -> Result<GridFunction> {
    let c = v.conj();
    quintic_q_form([v, &c, v, &c, v])
}

/// Fourier-side 𝒯 by direct constrained convolution (oracle, `n ≤ 64`).
pub fn trilinear_t_fourier(v1: &SpectralField, v2: &SpectralField, v3: &SpectralField) -> Result<SpectralField> {
    let d = v1.domain;
    if v2.domain != d || v3.domain != d {
        return Err(Error::DomainMismatch);
    }
    let n = d.n_points;
    if n > TRILINEAR_ORACLE_LIMIT {
        return Err(Error::SizeLimit { n, limit: TRILINEAR_ORACLE_LIMIT });
    }
    let con = ConvolutionConstraint::for_domain(d.kind);
    let (lo, hi) = (-(n as i64) / 2, n as i64 / 2);
    let dxi = d.dxi();
    let norm = match d.kind {
        DomainKind::Torus => 1.0 / (2.0 * PI),
        DomainKind::LineApprox => dxi * dxi / (2.0 * PI),
    };
    let coeffs = (0..n)
        .into_par_iter()
        .map(|j| {
            let k = d.mode(j);
            let mut acc = ZERO;
            for k1 in lo..hi {
                let a = v1.at_mode(k1);
                if a == ZERO {
                    continue;
                }
                for k2 in lo..hi {
                    let k3 = k - k1 - k2;
                    if k3 < lo || k3 >= hi || !con.trilinear_admits(k, k1, k2) {
                        continue;
                    }
                    acc += a * v2.at_mode(k2) * Complex64::new(0.0, k3 as f64 * dxi) * v3.at_mode(k3);
                }
            }
            if con.active {
                acc += v1.at_mode(k) * v2.at_mode(k) * Complex64::new(0.0, k as f64 * dxi) * v3.at_mode(-k);
            }
            acc * norm
        })
        .collect();
    Ok(SpectralField { domain: d, coeffs })
}

/// Fourier-side 𝒬 by constrained 4-fold convolution (oracle, `n ≤ 32`).
pub fn quintic_q_fourier(vs: [&SpectralField; 5]) -> Result<SpectralField> {
    let d = vs[0].domain;
    if vs.iter().any(|v| v.domain != d) {
        return Err(Error::DomainMismatch);
    }
    let n = d.n_points;
    if n > QUINTIC_ORACLE_LIMIT {
        return Err(Error::SizeLimit { n, limit: QUINTIC_ORACLE_LIMIT });
    }
    let con = ConvolutionConstraint::for_domain(d.kind);
    let (lo, hi) = (-(n as i64) / 2, n as i64 / 2);
    let norm = match d.kind {
        DomainKind::Torus => 1.0 / (4.0 * PI * PI),
        DomainKind::LineApprox => d.dxi().powi(4) / (4.0 * PI * PI),
    };
    let coeffs = (0..n)
        .into_par_iter()
        .map(|j| {
            let k = d.mode(j);
            let mut acc = ZERO;
            for k1 in lo..hi {
                let a = vs[0].at_mode(k1);
                for k2 in lo..hi {
                    let ab = a * vs[1].at_mode(k2);
                    if ab == ZERO {
                        continue;
                    }
                    for k3 in lo..hi {
                        let abc = ab * vs[2].at_mode(k3);
                        for k4 in lo..hi {
                            let k5 = k - k1 - k2 - k3 - k4;
                            if k5 < lo || k5 >= hi || !con.quintic_admits(k1, k2, k3, k4) {
                                continue;
                            }
                            acc += abc * vs[3].at_mode(k4) * vs[4].at_mode(k5);
                        }
                    }
                }
            }
            acc * norm
        })
        .collect();
    Ok(SpectralField { domain: d, coeffs })
}
