//! Ensemble ratio probes for the linear, bilinear and multilinear estimates.
//!
//! Each probe evaluates `LHS / RHS` of one inequality on random test fields
//! and reports the sup. Per-sample ratio functions are public so single
//! configurations can be inspected directly.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fields::{random_spacetime, random_spectral};
use super::{chunk_rng, non_increasing, within_factor_two, ProbeReport};
use crate::error::{Error, Result};
use crate::frequency::{
    Domain, DyadicIndex, GridFunction, ModulationLattice, Sign, SpaceTimeField, SpectralField, Window,
};
use crate::nonlinear::{quintic_q_form, trilinear_t_physical, Dealiaser, DEFAULT_PAD};
use crate::spaces::{besov_norm, cal_y_norm, frak_norm, lp_spacetime_norm, xsb_block_norms, xsb_norm, BesovParams, XsbParams};

/// Torus space–time sampling grid on `[−span/2, span/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceTimeGrid {
    pub n: usize,
    pub n_tau: usize,
    pub span: f64,
}

impl SpaceTimeGrid {
    pub fn new(n: usize, n_tau: usize, span: f64) -> Result<Self> {
        if !(span > 0.0) || n_tau < 2 {
            return Err(Error::Parameter(format!("bad space–time grid: M = {n_tau}, span = {span}")));
        }
        Domain::torus(n)?;
        Ok(Self { n, n_tau, span })
    }

    /// Grid used by the trilinear and multilinear probes.
    pub fn multilinear_default() -> Self {
        Self { n: 64, n_tau: 512, span: 4.0 }
    }

    /// Pair of grids with identical `Δτ = 1` used by the Strichartz probe.
    pub fn strichartz_defaults() -> [Self; 2] {
        [Self { n: 32, n_tau: 128, span: 2.0 * PI }, Self { n: 64, n_tau: 256, span: 2.0 * PI }]
    }

    pub fn domain(&self) -> Domain {
        Domain::torus(self.n).expect("validated")
    }

    pub fn dt(&self) -> f64 {
        self.span / self.n_tau as f64
    }

    pub fn t_start(&self) -> f64 {
        -0.5 * self.span
    }

    pub fn lattice(&self) -> ModulationLattice {
        ModulationLattice::dual_to(self.dt(), self.n_tau).expect("validated")
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n_tau).map(|m| self.t_start() + m as f64 * self.dt()).collect()
    }

    fn field(&self, rows: &[Vec<Complex64>]) -> Result<SpaceTimeField> {
        SpaceTimeField::from_samples(self.domain(), self.t_start(), self.dt(), rows)
    }

    /// Samples of `w` multiplied by `window(t)`, transformed back.
    fn windowed(&self, rows: &[Vec<Complex64>], window: Window) -> Result<SpaceTimeField> {
        let out: Vec<Vec<Complex64>> = rows
            .iter()
            .zip(self.times())
            .map(|(r, t)| {
                let c = window.eval(t);
                r.iter().map(|v| v * c).collect()
            })
            .collect();
        self.field(&out)
    }
}

/// Apply a spatial form slice by slice.
fn slicewise(
    fields: &[&SpaceTimeField],
    form: impl Fn(&[GridFunction]) -> Result<GridFunction> + Sync,
) -> Result<SpaceTimeField> {
    let first = fields.first().ok_or_else(|| Error::Parameter("no factors".into()))?;
    if fields.iter().any(|f| f.domain != first.domain || f.lattice != first.lattice) {
        return Err(Error::DomainMismatch);
    }
    let samples: Vec<Vec<Vec<Complex64>>> = fields.iter().map(|f| f.to_samples()).collect();
    let rows = (0..first.lattice.n_tau)
        .into_par_iter()
        .map(|m| {
            let gs: Vec<GridFunction> =
                samples.iter().map(|s| GridFunction::new(first.domain, s[m].clone())).collect::<Result<_>>()?;
            Ok(form(&gs)?.values)
        })
        .collect::<Result<Vec<_>>>()?;
    SpaceTimeField::from_samples(first.domain, first.t_start, first.dt(), &rows)
}

fn ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else {
        lhs / rhs
    }
}

// ---------------------------------------------------------------- Strichartz

/// `‖u‖_{L⁴_{t,x}} / ‖u‖_{X^{0,b,+}}`.
pub fn strichartz_ratio(u: &SpaceTimeField, b: f64) -> f64 {
    ratio(lp_spacetime_norm(u, 4.0), xsb_norm(u, XsbParams::plus(0.0, b)))
}

/// `χ(t)e^{i(ξ₀x − ξ₀²t)}` on the grid.
fn windowed_mode(grid: &SpaceTimeGrid, xi0: i64) -> Result<SpaceTimeField> {
    let d = grid.domain();
    let rows: Vec<Vec<Complex64>> = grid
        .times()
        .into_iter()
        .map(|t| {
            let c = Window::Unit.eval(t);
            (0..d.n_points).map(|j| Complex64::from_polar(c, xi0 as f64 * d.x(j) - (xi0 * xi0) as f64 * t)).collect()
        })
        .collect();
    grid.field(&rows)
}

/// Modulation band used for random fields near the characteristic.
const MODULATION_BAND: f64 = 4.0;

fn strichartz_sample(grid: &SpaceTimeGrid, b: f64, seed: u64, member: u64) -> Result<f64> {
    let mut rng = chunk_rng(seed, member);
    let d = grid.domain();
    let band = (grid.n / 8) as i64;
    let u = if member.is_multiple_of(2) {
        random_spacetime(d, grid.lattice(), grid.t_start(), band, MODULATION_BAND, Sign::Plus, &mut rng)
    } else {
        // windowed free evolution of random data
        let f = random_spectral(d, band, rng.gen_range(0.0..1.5), &mut rng);
        let rows: Vec<Vec<Complex64>> = grid
            .times()
            .into_iter()
            .map(|t| {
                let c = Window::Unit.eval(t);
                crate::solver::linear_propagate(&f, t).to_grid().values.into_iter().map(|v| v * c).collect()
            })
            .collect();
        grid.field(&rows)?
    };
    Ok(strichartz_ratio(&u, b))
}

/// Sup of `‖u‖_{L⁴}/‖u‖_{X^{0,b,+}}` over random fields on each grid, plus
/// the single-mode spread across `ξ₀ ∈ {0, 1, 2, 4, 8}`.
pub fn strichartz_probe(b: f64, ensemble: usize, grids: &[SpaceTimeGrid], seed: u64) -> Result<ProbeReport> {
    if !(b > 0.375) {
        return Err(Error::Parameter(format!("Strichartz probe needs b > 3/8, got {b}")));
    }
    if grids.is_empty() || ensemble == 0 {
        return Err(Error::Parameter("Strichartz probe needs a grid and a non-empty ensemble".into()));
    }
    let mut sups = Vec::with_capacity(grids.len());
    let mut report = ProbeReport::new("strichartz", ensemble * grids.len(), 0.0);
    for g in grids {
        let ratios =
            (0..ensemble as u64).into_par_iter().map(|i| strichartz_sample(g, b, seed, i)).collect::<Result<Vec<_>>>()?;
        let sup = ratios.into_iter().fold(0.0, f64::max);
        report.push("sup_vs_n", g.n as f64, sup);
        sups.push(sup);
    }
    let finest = grids.iter().max_by_key(|g| g.n).expect("non-empty");
    let modes: Vec<i64> = [0, 1, 2, 4, 8].into_iter().filter(|&k| 2 * k < finest.n as i64).collect();
    let mode_ratios = modes
        .iter()
        .map(|&k| Ok(strichartz_ratio(&windowed_mode(finest, k)?, b)))
        .collect::<Result<Vec<f64>>>()?;
    for (&k, &r) in modes.iter().zip(&mode_ratios) {
        report.push("single_mode", k as f64, r);
    }
    let hi = mode_ratios.iter().cloned().fold(f64::MIN, f64::max);
    let lo = mode_ratios.iter().cloned().fold(f64::MAX, f64::min);
    report.detail("single_mode_spread", hi / lo - 1.0);
    report.constant = sups.iter().cloned().chain(mode_ratios).fold(0.0, f64::max);
    report.stable = Some(within_factor_two(&sups));
    report.param("b", b);
    report.param("ensemble", ensemble as f64);
    Ok(report)
}

// ----------------------------------------------------------------- trilinear

/// `(TX, TY)` ratios for one triple; `u3` is the already conjugated factor,
/// measured in the minus-sign space.
pub fn trilinear_ratios(u1: &SpaceTimeField, u2: &SpaceTimeField, u3: &SpaceTimeField, s: f64) -> Result<(f64, f64)> {
    let t = slicewise(&[u1, u2, u3], |g| trilinear_t_physical(&g[0], &g[1], &g[2]))?;
    let rhs = frak_norm(u1, XsbParams::plus(s, 0.5))
        * frak_norm(u2, XsbParams::plus(s, 0.5))
        * frak_norm(u3, XsbParams::minus(s, 0.5));
    Ok((ratio(frak_norm(&t, XsbParams::plus(s, -0.5)), rhs), ratio(cal_y_norm(&t, s, -1.0), rhs)))
}

fn validate_times(ts: &[f64], grid: &SpaceTimeGrid) -> Result<()> {
    if ts.is_empty() {
        return Err(Error::Parameter("empty list of time scales".into()));
    }
    for &t in ts {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::Parameter(format!("time scale T = {t} outside (0, 1]")));
        }
        if t >= 0.5 * grid.span {
            return Err(Error::Parameter(format!("window of T = {t} does not fit the time span {}", grid.span)));
        }
    }
    Ok(())
}

/// Window supported in `[−T, T]`.
fn window_for(t: f64) -> Window {
    Window::Scaled(0.5 * t)
}

/// Base factor samples: signs give the characteristic each factor lives near.
fn base_rows(grid: &SpaceTimeGrid, conj: &[bool], seed: u64, member: u64) -> Vec<Vec<Vec<Complex64>>> {
    let mut rng = chunk_rng(seed, member);
    let band = (grid.n / 10).max(1) as i64;
    conj.iter()
        .map(|&c| {
            let w = random_spacetime(grid.domain(), grid.lattice(), grid.t_start(), band, 2.0, Sign::Plus, &mut rng);
            let rows = w.to_samples();
            if c {
                rows.into_iter().map(|r| r.into_iter().map(|v| v.conj()).collect()).collect()
            } else {
                rows
            }
        })
        .collect()
}

struct Sweep {
    /// per T: (sup X ratio, sup Y ratio)
    sups: Vec<(f64, f64)>,
}

fn sweep(
    grid: &SpaceTimeGrid,
    ts: &[f64],
    ensemble: usize,
    seed: u64,
    conj: &[bool],
    eval: impl Fn(&[SpaceTimeField]) -> Result<(f64, f64)> + Sync,
) -> Result<Sweep> {
    let per_member = (0..ensemble as u64)
        .into_par_iter()
        .map(|i| {
            let rows = base_rows(grid, conj, seed, i);
            ts.iter()
                .map(|&t| {
                    let us = rows.iter().map(|r| grid.windowed(r, window_for(t))).collect::<Result<Vec<_>>>()?;
                    eval(&us)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let sups = (0..ts.len())
        .map(|j| per_member.iter().fold((0.0, 0.0), |(a, b), r| (f64::max(a, r[j].0), f64::max(b, r[j].1))))
        .collect();
    Ok(Sweep { sups })
}

/// Sup over every sample whose window fits in `[−T, T]`, i.e. over all
/// listed `T' ≤ T`. This is the empirical constant of the estimate restricted
/// to fields supported in `[−T, T]`.
fn class_sups(ts: &[f64], raw: &[f64]) -> Vec<f64> {
    ts.iter()
        .map(|&t| ts.iter().zip(raw).filter(|(&u, _)| u <= t).map(|(_, &r)| r).fold(0.0, f64::max))
        .collect()
}

fn flag(b: bool) -> f64 {
    f64::from(u8::from(b))
}

fn sweep_report(name: &str, labels: (&str, &str), ts: &[f64], ensemble: usize, s: f64, sw: &Sweep) -> ProbeReport {
    let mut report = ProbeReport::new(name, ensemble * ts.len(), 0.0);
    let mut all_monotone = true;
    let (i_max, i_min) = {
        let mut idx: Vec<usize> = (0..ts.len()).collect();
        idx.sort_by(|&a, &b| ts[a].total_cmp(&ts[b]));
        (idx[ts.len() - 1], idx[0])
    };
    for (label, raw) in [
        (labels.0, sw.sups.iter().map(|p| p.0).collect::<Vec<f64>>()),
        (labels.1, sw.sups.iter().map(|p| p.1).collect::<Vec<f64>>()),
    ] {
        let class = class_sups(ts, &raw);
        for ((&t, &r), &c) in ts.iter().zip(&raw).zip(&class) {
            report.push(&format!("{label}_window"), t, r);
            report.push(label, t, c);
        }
        // in the order of `ts`, sorted by decreasing T
        let mut by_t: Vec<(f64, f64, f64)> = ts.iter().zip(&raw).zip(&class).map(|((&t, &r), &c)| (t, r, c)).collect();
        by_t.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mono = non_increasing(&by_t.iter().map(|p| p.2).collect::<Vec<_>>());
        all_monotone &= mono;
        report.detail(&format!("monotone_{label}"), flag(mono));
        report.detail(&format!("monotone_{label}_window"), flag(non_increasing(&by_t.iter().map(|p| p.1).collect::<Vec<_>>())));
        report.detail(&format!("decay_{label}"), class[i_min] / class[i_max]);
        report.constant = class.iter().cloned().fold(report.constant, f64::max);
    }
    report.stable = Some(all_monotone && report.constant.is_finite());
    report.param("s", s);
    report.param("ensemble", ensemble as f64);
    report.note("time_scales", format!("{ts:?}"));
    report.note("window", "chi(2t/T), supported in [-T, T]");
    report
}

/// Sup of the `(TX)` and `(TY)` ratios for each `T` in `ts`, listed in
/// decreasing order. The monotone flags require the sups not to increase
/// along the list.
pub fn trilinear_probe(s: f64, ts: &[f64], ensemble: usize, grid: SpaceTimeGrid, seed: u64) -> Result<ProbeReport> {
    if !(s >= 0.5) {
        return Err(Error::Parameter(format!("trilinear probe needs s ≥ 1/2, got {s}")));
    }
    validate_times(ts, &grid)?;
    let sw = sweep(&grid, ts, ensemble, seed, &[false, false, true], |u| trilinear_ratios(&u[0], &u[1], &u[2], s))?;
    Ok(sweep_report("trilinear", ("TX", "TY"), ts, ensemble, s, &sw))
}

// -------------------------------------------------------------- multilinear

/// Nonlinearity probed by [`multilinear_probe`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Multilinear {
    /// `u₁ū₂u₃…` with `k + 1` factors.
    Product { k: u32 },
    /// `𝒬(u₁, ū₂, u₃, ū₄, u₅)`.
    Quintic,
}

impl Multilinear {
    pub fn factors(&self) -> usize {
        match *self {
            Multilinear::Product { k } => k as usize + 1,
            Multilinear::Quintic => 5,
        }
    }

    /// Factor `j` enters conjugated when `j` is odd.
    pub fn conjugated(&self) -> Vec<bool> {
        (0..self.factors()).map(|j| j % 2 == 1).collect()
    }

    fn name(&self) -> String {
        match *self {
            Multilinear::Product { k } => format!("product-k{k}"),
            Multilinear::Quintic => "quintic".into(),
        }
    }
}

fn product_form(g: &[GridFunction]) -> Result<GridFunction> {
    let dl = Dealiaser::new(g[0].domain, DEFAULT_PAD)?;
    let mut acc = dl.fine(&dl.coeffs(&g[0]));
    for f in &g[1..] {
        for (a, b) in acc.iter_mut().zip(dl.fine(&dl.coeffs(f))) {
            *a *= b;
        }
    }
    Ok(dl.grid(&dl.coarse(acc)))
}

/// `(X, Y)` ratios for one tuple of factors. Conjugated factors are passed
/// already conjugated and measured in the minus-sign space.
pub fn multilinear_ratios(kind: Multilinear, factors: &[SpaceTimeField], s: f64, delta: f64) -> Result<(f64, f64)> {
    let conj = kind.conjugated();
    if factors.len() != conj.len() {
        return Err(Error::Parameter(format!("{} needs {} factors, got {}", kind.name(), conj.len(), factors.len())));
    }
    let refs: Vec<&SpaceTimeField> = factors.iter().collect();
    let out = match kind {
        Multilinear::Product { .. } => slicewise(&refs, product_form)?,
        Multilinear::Quintic => slicewise(&refs, |g| quintic_q_form([&g[0], &g[1], &g[2], &g[3], &g[4]]))?,
    };
    let norm = |u: &SpaceTimeField, c: bool, s: f64| {
        frak_norm(u, if c { XsbParams::minus(s, 0.5) } else { XsbParams::plus(s, 0.5) })
    };
    let low: Vec<f64> = factors.iter().zip(&conj).map(|(u, &c)| norm(u, c, 0.5)).collect();
    let rhs: f64 = (0..factors.len())
        .map(|l| {
            let others: f64 = (0..factors.len()).filter(|&j| j != l).map(|j| low[j]).product();
            norm(&factors[l], conj[l], s) * others
        })
        .sum();
    let x = frak_norm(&out, XsbParams::plus(s, -0.375 - delta));
    let y = cal_y_norm(&out, s, -1.0);
    Ok((ratio(x, rhs), ratio(y, rhs)))
}

/// Default `δ` for the multilinear probe.
pub const MULTILINEAR_DELTA: f64 = 1.0 / 16.0;

/// Same protocol as [`trilinear_probe`] for products and the quintic form.
/// The `𝔛^{s,−3/8−δ}` and `𝒴^{s,−1}` parts of the left side are reported as
/// separate series `X` and `Y`.
pub fn multilinear_probe(
    kind: Multilinear,
    s: f64,
    delta: f64,
    ts: &[f64],
    ensemble: usize,
    grid: SpaceTimeGrid,
    seed: u64,
) -> Result<ProbeReport> {
    if let Multilinear::Product { k } = kind {
        if k > 2 {
            return Err(Error::Parameter(format!("product degree k = {k} outside {{0, 1, 2}}")));
        }
    }
    if !(delta > 0.0 && delta < 0.125) {
        return Err(Error::Parameter(format!("δ = {delta} outside (0, 1/8)")));
    }
    if !(s >= 0.5) {
        return Err(Error::Parameter(format!("multilinear probe needs s ≥ 1/2, got {s}")));
    }
    validate_times(ts, &grid)?;
    let sw = sweep(&grid, ts, ensemble, seed, &kind.conjugated(), |u| multilinear_ratios(kind, u, s, delta))?;
    let mut report = sweep_report(&format!("multilinear-{}", kind.name()), ("X", "Y"), ts, ensemble, s, &sw);
    report.param("delta", delta);
    Ok(report)
}

// ------------------------------------------------------------ dyadic sums

fn floor_log2(x: f64) -> f64 {
    x.log2().floor()
}

/// Checks the four dyadic summation inequalities on `u` with explicit
/// constants. `c_sim` is the constant of `N₁ ∼ N` (`N/c ≤ N₁ ≤ cN`) and `k`
/// the cutoff of the last inequality. `constant` is the largest
/// `LHS / (C·RHS)`, so every inequality holds iff it is at most one.
pub fn dyadic_sum_check(u: &SpaceTimeField, delta: f64, params: XsbParams, c_sim: f64, k: u64) -> Result<ProbeReport> {
    if !(delta > 0.0) {
        return Err(Error::Parameter(format!("δ must be positive, got {delta}")));
    }
    if !(c_sim > 1.0) || k == 0 {
        return Err(Error::Parameter(format!("need C∼ > 1 and k ≥ 1, got {c_sim}, {k}")));
    }
    let blocks = xsb_block_norms(u, params);
    let rhs = frak_norm(u, params);
    let mut report = ProbeReport::new("dyadic-sums", 1, 0.0);
    let mut record = |name: &str, lhs: f64, c: f64, rhs: f64| {
        report.detail(&format!("{name}_lhs"), lhs);
        report.detail(&format!("{name}_rhs"), rhs);
        report.detail(&format!("{name}_C"), c);
        let r = ratio(lhs, c * rhs);
        report.push("normalized", report.series.get("normalized").map_or(0, Vec::len) as f64, r);
        report.constant = report.constant.max(r);
    };

    // (X)
    let lhs_x: f64 = blocks.iter().map(|(n, v)| n.as_f64().powf(-delta) * v).sum();
    let c_x: f64 = blocks.iter().map(|(n, _)| n.as_f64().powf(-delta)).sum();
    record("X", lhs_x, c_x, rhs);

    // (Y): ⟨ξ⟩ ≥ max(1, N/2) on the support of block N
    let unshifted = XsbParams { s: params.s - delta, ..params };
    let lhs_y: f64 = xsb_block_norms(u, unshifted).iter().map(|(_, v)| v).sum();
    let c_y: f64 = blocks.iter().map(|(n, _)| (0.5 * n.as_f64()).max(1.0).powf(-delta)).sum();
    record("Y", lhs_y, c_y, rhs);

    // (XX): worst N over the lattice
    let lhs_xx = blocks
        .iter()
        .map(|(n, _)| {
            let n = n.as_f64();
            blocks.iter().filter(|(m, _)| m.as_f64() >= n / c_sim && m.as_f64() <= c_sim * n).map(|(_, v)| v).sum()
        })
        .fold(0.0, f64::max);
    record("XX", lhs_xx, 2.0 * floor_log2(c_sim) + 1.0, rhs);

    // (XXX)
    let lhs_xxx: f64 = blocks.iter().filter(|(n, _)| n.get() <= k).map(|(_, v)| v).sum();
    record("XXX", lhs_xxx, 1.0 + floor_log2(k as f64), rhs);

    report.param("delta", delta);
    report.param("s", params.s);
    report.param("b", params.b);
    report.param("c_sim", c_sim);
    report.param("k", k as f64);
    report.stable = Some(report.constant <= 1.0 + 1e-12);
    Ok(report)
}

/// Number of dyadic blocks `N` with `1 < N ≤ k`.
pub fn blocks_up_to(k: u64) -> usize {
    (1..64).map(|j| 1u64 << j).take_while(|&n| n <= k).count()
}

// -------------------------------------------------- Sobolev multiplication

fn smult_params(s: f64, s1: f64, s2: f64) -> Result<()> {
    if s >= 0.0 && s1 >= s && s2 >= s && s1 + s2 - s > 0.5 {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "multiplication estimate needs s ≥ 0, s₁, s₂ ≥ s and s₁ + s₂ − s > 1/2; got ({s}, {s1}, {s2})"
        )))
    }
}

/// `‖f₁f₂‖_{B^s_{2,∞}} / (‖f₁‖_{B^{s₁}_{2,∞}}‖f₂‖_{B^{s₂}_{2,∞}})`.
pub fn smult_ratio(f1: &SpectralField, f2: &SpectralField, s: f64, s1: f64, s2: f64) -> Result<f64> {
    smult_params(s, s1, s2)?;
    let g = product_form(&[f1.to_grid(), f2.to_grid()])?;
    let rhs = besov_norm(f1, BesovParams::sup(s1)) * besov_norm(f2, BesovParams::sup(s2));
    Ok(ratio(besov_norm(&g.to_spectral(), BesovParams::sup(s)), rhs))
}

/// Random factor: broadband with random decay, or concentrated on one block.
fn smult_factor(d: Domain, band: i64, rng: &mut rand_chacha::ChaCha8Rng) -> SpectralField {
    let f = random_spectral(d, band, rng.gen_range(0.0..2.0), rng);
    if rng.gen_bool(0.5) {
        return f;
    }
    let blocks: Vec<DyadicIndex> = DyadicIndex::blocks(&d).into_iter().filter(|n| n.get() as i64 <= band).collect();
    let n = blocks[rng.gen_range(0..blocks.len())];
    f.apply_symbol(|xi| n.weight(xi))
}

/// Sup of [`smult_ratio`] over random pairs band-limited to `n/8`, for each
/// torus size in `sizes`.
pub fn sobolev_mult_probe(s: f64, s1: f64, s2: f64, ensemble: usize, sizes: &[usize], seed: u64) -> Result<ProbeReport> {
    smult_params(s, s1, s2)?;
    if sizes.is_empty() || ensemble == 0 {
        return Err(Error::Parameter("multiplication probe needs sizes and a non-empty ensemble".into()));
    }
    let mut report = ProbeReport::new("sobolev-mult", ensemble * sizes.len(), 0.0);
    let mut sups = Vec::new();
    for &n in sizes {
        let d = Domain::torus(n)?;
        let band = (n / 8) as i64;
        let sup = (0..ensemble as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = chunk_rng(seed, i);
                let f1 = smult_factor(d, band, &mut rng);
                let f2 = smult_factor(d, band, &mut rng);
                smult_ratio(&f1, &f2, s, s1, s2)
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        report.push("sup_vs_n", n as f64, sup);
        sups.push(sup);
    }
    report.constant = sups.iter().cloned().fold(0.0, f64::max);
    report.stable = Some(within_factor_two(&sups));
    report.param("s", s);
    report.param("s1", s1);
    report.param("s2", s2);
    report.param("ensemble", ensemble as f64);
    Ok(report)
}

// ---------------------------------------------------------------- embeddings

/// Largest `‖f‖_{B^s_{2,∞}} / ‖f‖_{H^s}` over random torus fields. Every
/// block weight is at most one, so the ratio never exceeds two.
pub fn besov_sobolev_check(n: usize, samples: usize, s: f64, seed: u64) -> Result<ProbeReport> {
    let d = Domain::torus(n)?;
    let worst = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = chunk_rng(seed, i);
            let band = rng.gen_range(1..=(n / 2 - 1) as i64);
            let f = random_spectral(d, band, rng.gen_range(-0.5..2.5), &mut rng);
            besov_norm(&f, BesovParams::sup(s)) / crate::spaces::sobolev_norm(&f, s)
        })
        .reduce(|| 0.0, f64::max);
    let mut report = ProbeReport::new("besov-sobolev", samples, worst);
    report.param("s", s);
    report.param("n", n as f64);
    report.detail("bound", 2.0);
    report.stable = Some(worst <= 2.0);
    Ok(report)
}

/// Largest `‖u‖_{Y^{s,b₁}} / (C‖u‖_{X^{s,b₂}})` over random space–time
/// fields, with `C` the Cauchy–Schwarz constant of the lattice.
pub fn xy_embedding_check(grid: SpaceTimeGrid, samples: usize, s: f64, b1: f64, b2: f64, seed: u64) -> Result<ProbeReport> {
    if !(b2 > b1 + 0.5) {
        return Err(Error::Parameter(format!("embedding needs b₂ > b₁ + 1/2, got b₁ = {b1}, b₂ = {b2}")));
    }
    let (d, lat) = (grid.domain(), grid.lattice());
    let c = crate::spaces::xy_embedding_constant(&d, &lat, b1, b2);
    let worst = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = chunk_rng(seed, i);
            let band = rng.gen_range(1..=(grid.n / 4) as i64);
            let modulation = rng.gen_range(0.5..0.25 * lat.tau_max());
            let u = random_spacetime(d, lat, grid.t_start(), band, modulation, Sign::Plus, &mut rng);
            ratio(crate::spaces::ysb_norm(&u, s, b1), c * xsb_norm(&u, XsbParams::plus(s, b2)))
        })
        .reduce(|| 0.0, f64::max);
    let mut report = ProbeReport::new("xy-embedding", samples, worst);
    report.param("s", s);
    report.param("b1", b1);
    report.param("b2", b2);
    report.detail("cauchy_schwarz_constant", c);
    report.stable = Some(worst <= 1.0 + 1e-12);
    Ok(report)
}

/// `‖χ‖_{L⁴_t}` of the unit window, the time factor of the single-mode
/// Strichartz ratio.
pub fn unit_window_l4() -> f64 {
    let m = 4096;
    let h = 4.0 / m as f64;
    let sum: f64 = (0..m).map(|j| Window::Unit.eval(-2.0 + j as f64 * h).powi(4)).sum();
    (sum * h).powf(0.25)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frequency::SpaceTimeField;
    use rand::SeedableRng;

    fn small_grid() -> SpaceTimeGrid {
        SpaceTimeGrid::new(32, 128, 4.0).unwrap()
    }

    fn random_factors(g: &SpaceTimeGrid, conj: &[bool], seed: u64, t: f64) -> Vec<SpaceTimeField> {
        base_rows(g, conj, seed, 0).iter().map(|r| g.windowed(r, window_for(t)).unwrap()).collect()
    }

    #[test]
    fn single_mode_strichartz_is_mode_independent() {
        let g = SpaceTimeGrid::strichartz_defaults()[1];
        let r: Vec<f64> = [0, 1, 2, 4, 8].iter().map(|&k| strichartz_ratio(&windowed_mode(&g, k).unwrap(), 0.5)).collect();
        for v in &r {
            assert!((v / r[0] - 1.0).abs() < 0.05, "{r:?}");
        }
    }

    #[test]
    fn strichartz_rejects_small_b() {
        assert!(matches!(strichartz_probe(0.375, 4, &SpaceTimeGrid::strichartz_defaults(), 1), Err(Error::Parameter(_))));
    }

    #[test]
    fn strichartz_probe_runs() {
        let r = strichartz_probe(0.5, 16, &SpaceTimeGrid::strichartz_defaults(), 3).unwrap();
        assert!(r.constant.is_finite() && r.constant > 0.0);
        assert_eq!(r.stable, Some(true));
        assert!(r.details["single_mode_spread"] < 0.05);
    }

    #[test]
    fn zero_factor_gives_zero() {
        let g = small_grid();
        let mut u = random_factors(&g, &[false, false, true], 5, 1.0);
        u[1] = SpaceTimeField::zeros(g.domain(), g.lattice());
        u[1].t_start = g.t_start();
        let (x, y) = trilinear_ratios(&u[0], &u[1], &u[2], 0.5).unwrap();
        assert_eq!((x, y), (0.0, 0.0));
    }

    #[test]
    fn ratios_are_scale_invariant() {
        let g = small_grid();
        let u = random_factors(&g, &[false, false, true], 6, 0.5);
        let a = Complex64::new(3.0, 0.0);
        let scaled: Vec<SpaceTimeField> = u.iter().map(|f| f.scaled(a)).collect();
        let (x0, y0) = trilinear_ratios(&u[0], &u[1], &u[2], 0.5).unwrap();
        let (x1, y1) = trilinear_ratios(&scaled[0], &scaled[1], &scaled[2], 0.5).unwrap();
        assert!((x0 / x1 - 1.0).abs() < 1e-10 && (y0 / y1 - 1.0).abs() < 1e-10);
        let s0 = strichartz_ratio(&u[0], 0.5);
        assert!((strichartz_ratio(&scaled[0], 0.5) / s0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_mode_triple_is_finite() {
        let g = small_grid();
        let d = g.domain();
        let rows: Vec<Vec<Complex64>> = g
            .times()
            .into_iter()
            .map(|t| (0..d.n_points).map(|j| Complex64::from_polar(1.0, 2.0 * d.x(j) - 4.0 * t)).collect())
            .collect();
        let u = g.windowed(&rows, window_for(1.0)).unwrap();
        let (x, y) = trilinear_ratios(&u, &u, &u.conjugate(), 0.5).unwrap();
        assert!(x.is_finite() && y.is_finite() && x > 0.0);
    }

    #[test]
    fn linear_case_is_an_embedding() {
        let g = small_grid();
        for t in [1.0, 0.25] {
            let u = random_factors(&g, &[false], 8, t);
            let (x, _) = multilinear_ratios(Multilinear::Product { k: 0 }, &u, 0.5, MULTILINEAR_DELTA).unwrap();
            assert!(x <= 1.0 + 1e-12, "{x}");
        }
    }

    #[test]
    fn multilinear_parameter_errors() {
        let g = small_grid();
        assert!(multilinear_probe(Multilinear::Product { k: 3 }, 0.5, 0.0625, &[1.0], 2, g, 0).is_err());
        assert!(multilinear_probe(Multilinear::Product { k: 1 }, 0.5, 0.2, &[1.0], 2, g, 0).is_err());
        assert!(trilinear_probe(0.5, &[1.5], 2, g, 0).is_err());
        assert!(trilinear_probe(0.4, &[1.0], 2, g, 0).is_err());
    }

    #[test]
    fn dyadic_sums_hold() {
        let g = small_grid();
        let u = random_factors(&g, &[false], 11, 1.0).remove(0);
        for delta in [0.25, 0.05] {
            let r = dyadic_sum_check(&u, delta, XsbParams::plus(0.5, 0.5), 2.0, 8).unwrap();
            assert!(r.constant <= 1.0 + 1e-12, "{r:?}");
        }
        assert!(dyadic_sum_check(&u, 0.0, XsbParams::plus(0.5, 0.5), 2.0, 8).is_err());
    }

    #[test]
    fn dyadic_single_block() {
        let g = small_grid();
        let n = DyadicIndex::new(4).unwrap();
        let u = SpaceTimeField::unit_mass(g.domain(), g.lattice(), 3, 0).unwrap();
        let p = XsbParams::plus(0.0, 0.0);
        let r = dyadic_sum_check(&u, 0.25, p, 2.0, 8).unwrap();
        let block = xsb_block_norms(&u, p).into_iter().find(|(m, _)| *m == n).unwrap().1;
        let lhs_x: f64 = xsb_block_norms(&u, p).iter().map(|(m, v)| m.as_f64().powf(-0.25) * v).sum();
        assert!(block > 0.0 && lhs_x <= r.details["X_C"] * r.details["X_rhs"]);
        assert_eq!(blocks_up_to(8), 3);
        assert_eq!(r.details["XXX_C"], 4.0);
    }

    #[test]
    fn embeddings_hold() {
        let r = besov_sobolev_check(64, 200, 0.5, 1).unwrap();
        assert!(r.constant <= 2.0 && r.constant > 0.5);
        let r = xy_embedding_check(small_grid(), 20, 0.5, 0.0, 0.6, 2).unwrap();
        assert!(r.constant <= 1.0 && r.constant > 0.0);
        assert!(xy_embedding_check(small_grid(), 2, 0.5, 0.0, 0.5, 2).is_err());
    }

    #[test]
    fn smult_parameter_region() {
        assert!(sobolev_mult_probe(0.5, 0.5, 0.5, 4, &[64], 0).is_err());
        assert!(sobolev_mult_probe(-0.1, 1.0, 1.0, 4, &[64], 0).is_err());
        assert!(sobolev_mult_probe(0.5, 0.4, 1.0, 4, &[64], 0).is_err());
        let r = sobolev_mult_probe(0.5, 0.5, 0.6, 32, &[64, 128], 2).unwrap();
        assert!(r.constant.is_finite() && r.constant > 0.0);
    }

    #[test]
    fn smult_constant_factor() {
        let d = Domain::torus(64).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let f1 = random_spectral(d, 8, 1.0, &mut rng);
        let one = SpectralField::unit_mass(d, 0).unwrap();
        let r = smult_ratio(&f1, &one, 0.5, 0.5, 0.6).unwrap();
        // product is f₁ times the constant sample value of the unit-mass mode
        let c = one.to_grid().values[0].norm();
        let expect = c * besov_norm(&f1, BesovParams::sup(0.5))
            / (besov_norm(&f1, BesovParams::sup(0.5)) * besov_norm(&one, BesovParams::sup(0.6)));
        assert!((r / expect - 1.0).abs() < 1e-10);
    }
}
