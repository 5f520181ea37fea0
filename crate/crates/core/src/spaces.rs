//! Norms of the Besov, Sobolev and Bourgain-type spaces on discrete fields.
//!
//! Space–time norms use Riemann weights `Δξ·Δτ`; mixed `L²_ξ L¹_τ` norms take
//! the τ-sum with weight Δτ first. The dyadic-sup norms (𝔛, 𝒴, 𝒵) take a
//! maximum over the finitely many blocks present on the lattice.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frequency::{bracket, Domain, DyadicIndex, ModulationLattice, Sign, SpaceTimeField, SpectralField, Window};
use crate::solver::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BesovQ {
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "inf")]
    Inf,
}

/// `B^s_{2,q}` with `q ∈ {2, ∞}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesovParams {
    pub s: f64,
    pub q: BesovQ,
}

impl BesovParams {
    pub fn sup(s: f64) -> Self {
        Self { s, q: BesovQ::Inf }
    }

    pub fn l2(s: f64) -> Self {
        Self { s, q: BesovQ::Two }
    }
}

fn block_l2(f: &SpectralField, n: DyadicIndex) -> f64 {
    let d = f.domain;
    let sum: f64 = f
        .coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let w = n.weight(d.xi(j));
            w * w * c.norm_sqr()
        })
        .sum();
    (sum * d.dxi()).sqrt()
}

/// `‖P₁f‖ + sup_{N>1} N^s‖P_N f‖` (q = ∞) or the ℓ² sum over blocks (q = 2).
pub fn besov_norm(f: &SpectralField, p: BesovParams) -> f64 {
    let blocks = DyadicIndex::blocks(&f.domain);
    let low = block_l2(f, DyadicIndex::ONE);
    let high = blocks[1..].iter().map(|&n| n.as_f64().powf(p.s) * block_l2(f, n));
    low + match p.q {
        BesovQ::Inf => high.fold(0.0, f64::max),
        BesovQ::Two => high.map(|v| v * v).sum::<f64>().sqrt(),
    }
}

/// `‖J^s f‖_{L²}`.
pub fn sobolev_norm(f: &SpectralField, s: f64) -> f64 {
    let d = f.domain;
    let sum: f64 = f
        .coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| bracket(d.xi(j)).powf(2.0 * s) * c.norm_sqr())
        .sum();
    (sum * d.dxi()).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XsbParams {
    pub s: f64,
    pub b: f64,
    pub sign: Sign,
}

impl XsbParams {
    pub fn plus(s: f64, b: f64) -> Self {
        Self { s, b, sign: Sign::Plus }
    }

    pub fn minus(s: f64, b: f64) -> Self {
        Self { s, b, sign: Sign::Minus }
    }
}

#[inline]
fn weight(xi: f64, tau: f64, s: f64, b: f64, sign: f64) -> f64 {
    let ws = if s == 0.0 { 1.0 } else { bracket(xi).powf(s) };
    let wb = if b == 0.0 { 1.0 } else { bracket(tau + sign * xi * xi).powf(b) };
    ws * wb
}

/// `‖w(ξ,τ)·û‖_{L²_ξ L²_τ}` for a block weight `w`.
fn weighted_l2(u: &SpaceTimeField, block: impl Fn(f64) -> f64, s: f64, b: f64, sign: f64) -> f64 {
    let d = &u.domain;
    let lat = &u.lattice;
    let m = lat.n_tau;
    let mut sum = 0.0;
    for k in 0..d.n_points {
        let xi = d.xi(k);
        let bw = block(xi);
        if bw == 0.0 {
            continue;
        }
        let row = &u.coeffs[k * m..(k + 1) * m];
        let mut acc = 0.0;
        for (l, c) in row.iter().enumerate() {
            let w = weight(xi, lat.tau(l), s, b, sign);
            acc += w * w * c.norm_sqr();
        }
        sum += bw * bw * acc;
    }
    (sum * d.dxi() * lat.dtau).sqrt()
}

/// `‖w(ξ,τ)·û‖_{L²_ξ L¹_τ}`.
fn weighted_l2l1(u: &SpaceTimeField, block: impl Fn(f64) -> f64, s: f64, b: f64) -> f64 {
    let d = &u.domain;
    let lat = &u.lattice;
    let m = lat.n_tau;
    let mut sum = 0.0;
    for k in 0..d.n_points {
        let xi = d.xi(k);
        let bw = block(xi);
        if bw == 0.0 {
            continue;
        }
        let row = &u.coeffs[k * m..(k + 1) * m];
        let inner: f64 = row.iter().enumerate().map(|(l, c)| weight(xi, lat.tau(l), s, b, 1.0) * c.norm()).sum();
        let inner = bw * inner * lat.dtau;
        sum += inner * inner;
    }
    (sum * d.dxi()).sqrt()
}

/// `‖⟨ξ⟩^s⟨τ±ξ²⟩^b û‖_{L²_ξ L²_τ}`.
pub fn xsb_norm(u: &SpaceTimeField, p: XsbParams) -> f64 {
    weighted_l2(u, |_| 1.0, p.s, p.b, p.sign.value())
}

/// `‖⟨ξ⟩^s⟨τ+ξ²⟩^b û‖_{L²_ξ L¹_τ}`.
pub fn ysb_norm(u: &SpaceTimeField, s: f64, b: f64) -> f64 {
    weighted_l2l1(u, |_| 1.0, s, b)
}

/// `‖u‖_{X^{s,½}} + ‖u‖_{Y^{s,0}}`.
pub fn zs_norm(u: &SpaceTimeField, s: f64) -> f64 {
    xsb_norm(u, XsbParams::plus(s, 0.5)) + ysb_norm(u, s, 0.0)
}

/// Space–time L² norm, identical to the `X^{0,0}` norm.
pub fn spacetime_l2(u: &SpaceTimeField) -> f64 {
    xsb_norm(u, XsbParams::plus(0.0, 0.0))
}

/// Low block plus the largest high block of a per-block norm.
fn block_sup(domain: &Domain, norm_of: impl Fn(DyadicIndex) -> f64) -> f64 {
    let blocks = DyadicIndex::blocks(domain);
    norm_of(DyadicIndex::ONE) + blocks[1..].iter().map(|&n| norm_of(n)).fold(0.0, f64::max)
}

/// `‖P_N u‖_{X^{s,b,±}}` for every block on the lattice, low block first.
pub fn xsb_block_norms(u: &SpaceTimeField, p: XsbParams) -> Vec<(DyadicIndex, f64)> {
    DyadicIndex::blocks(&u.domain)
        .into_iter()
        .map(|n| (n, weighted_l2(u, |xi| n.weight(xi), p.s, p.b, p.sign.value())))
        .collect()
}

/// `‖P₁u‖_{X^{s,b,±}} + sup_{N>1}‖P_N u‖_{X^{s,b,±}}`.
pub fn frak_norm(u: &SpaceTimeField, p: XsbParams) -> f64 {
    block_sup(&u.domain, |n| weighted_l2(u, |xi| n.weight(xi), p.s, p.b, p.sign.value()))
}

/// Dyadic-sup version of the `Y^{s,b}` norm.
pub fn cal_y_norm(u: &SpaceTimeField, s: f64, b: f64) -> f64 {
    block_sup(&u.domain, |n| weighted_l2l1(u, |xi| n.weight(xi), s, b))
}

/// Dyadic-sup version of the `Z^s` norm.
pub fn cal_z_norm(u: &SpaceTimeField, s: f64) -> f64 {
    block_sup(&u.domain, |n| {
        weighted_l2(u, |xi| n.weight(xi), s, 0.5, 1.0) + weighted_l2l1(u, |xi| n.weight(xi), s, 0.0)
    })
}

/// Riemann-sum `L^p_{t,x}` norm of the physical samples of `u`.
pub fn lp_spacetime_norm(u: &SpaceTimeField, p: f64) -> f64 {
    let rows = u.to_samples();
    let cell = u.domain.dx() * u.dt();
    let sum: f64 = rows.iter().flat_map(|r| r.iter()).map(|v| v.norm().powf(p)).sum();
    (sum * cell).powf(1.0 / p)
}

/// Cauchy–Schwarz constant of `‖u‖_{Y^{s,b₁}} ≤ C‖u‖_{X^{s,b₂}}` on a lattice:
/// `C = max_ξ (Σ_τ ⟨τ+ξ²⟩^{2(b₁−b₂)} Δτ)^{1/2}`.
pub fn xy_embedding_constant(domain: &Domain, lattice: &ModulationLattice, b1: f64, b2: f64) -> f64 {
    (0..domain.n_points)
        .map(|k| {
            let xi = domain.xi(k);
            let s: f64 =
                (0..lattice.n_tau).map(|l| bracket(lattice.tau(l) + xi * xi).powf(2.0 * (b1 - b2))).sum();
            (s * lattice.dtau).sqrt()
        })
        .fold(0.0, f64::max)
}

/// One admissible extension of a trajectory restricted to the window's plateau.
/// Its `Z^s` norm bounds the restriction norm from above.
#[derive(Debug, Clone)]
pub struct WindowedExtension {
    pub window: Window,
    pub field: SpaceTimeField,
}

impl WindowedExtension {
    /// `‖v‖_{Z^s}` of this extension: an upper bound for the restriction norm
    /// on the window's plateau.
    pub fn restriction_upper_bound(&self, s: f64) -> f64 {
        zs_norm(&self.field, s)
    }
}

/// Multiply the trajectory by the time window and transform to (ξ, τ).
pub fn window_trajectory(traj: &Trajectory, window: Window) -> Result<WindowedExtension> {
    let r = window.support_radius();
    let (start, end) = (traj.t_start, traj.t_end());
    let tol = 1e-9 * traj.dt.max(1.0);
    if -r < start - tol || r > end + tol {
        return Err(Error::Extension { lo: -r, hi: r, start, end });
    }
    let rows: Vec<Vec<Complex64>> = traj
        .slices
        .iter()
        .enumerate()
        .map(|(m, g)| {
            let w = window.eval(traj.time(m));
            g.values.iter().map(|v| v * w).collect()
        })
        .collect();
    let mut field = SpaceTimeField::from_samples(traj.domain, traj.t_start, traj.dt, &rows)?;
    field.window = Some(window);
    Ok(WindowedExtension { window, field })
}
