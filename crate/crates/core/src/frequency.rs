//! Lattices, transforms and frequency cutoffs.
//!
//! Spatial Fourier coefficients follow the symmetric convention
//! `f̂(ξ) = (2π)^{-1/2} ∫ e^{-ixξ} f(x) dx`, approximated by the Riemann sum on
//! the grid, so that on the torus `f̂(ξ) = √(2π)·c_ξ` where `c_ξ` are the
//! Fourier-series coefficients. Plancherel then reads
//! `‖f‖²_{L²} = Σ_ξ |f̂(ξ)|² Δξ` with `Δξ = 2π/period`.
//!
//! Space–time coefficients use `û(ξ,τ) = (2π)^{-1} ∫∫ e^{-i(xξ+tτ)} u dx dt`,
//! with the same sign in both variables. Free waves `e^{i(xξ-tξ²)}` then sit
//! on the characteristic `τ = -ξ²`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fft;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainKind {
    Torus,
    /// Periodic box of length `2π·scale` used in place of ℝ.
    LineApprox,
}

/// Uniform periodic grid. The torus has period 2π and integer frequencies;
/// the line stand-in has period `L = 2π·scale` and frequencies `2πk/L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub kind: DomainKind,
    pub period: f64,
    pub n_points: usize,
}

fn check_points(n: usize) -> Result<()> {
    if n < 8 || !n.is_power_of_two() {
        return Err(Error::InvalidDomain(format!("n_points = {n} must be a power of two >= 8")));
    }
    Ok(())
}

impl Domain {
    pub fn torus(n_points: usize) -> Result<Self> {
        check_points(n_points)?;
        Ok(Self { kind: DomainKind::Torus, period: 2.0 * PI, n_points })
    }

    /// Line stand-in with period `2π·scale`; `scale` must be a power of two.
    pub fn line(n_points: usize, scale: u32) -> Result<Self> {
        check_points(n_points)?;
        if scale == 0 || !scale.is_power_of_two() {
            return Err(Error::InvalidDomain(format!("domain scale {scale} must be a power of two")));
        }
        Ok(Self { kind: DomainKind::LineApprox, period: 2.0 * PI * scale as f64, n_points })
    }

    pub fn is_torus(&self) -> bool {
        self.kind == DomainKind::Torus
    }

    /// Ratio `period / 2π`.
    pub fn scale(&self) -> f64 {
        self.period / (2.0 * PI)
    }

    pub fn dx(&self) -> f64 {
        self.period / self.n_points as f64
    }

    /// Frequency spacing, also the Plancherel weight of a single mode.
    pub fn dxi(&self) -> f64 {
        2.0 * PI / self.period
    }

    /// Left end of the grid: 0 on the torus, `-L/2` on the line.
    pub fn x0(&self) -> f64 {
        match self.kind {
            DomainKind::Torus => 0.0,
            DomainKind::LineApprox => -0.5 * self.period,
        }
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x0() + j as f64 * self.dx()
    }

    /// Integer label of FFT slot `j`, in `{-n/2, …, n/2-1}`.
    pub fn mode(&self, j: usize) -> i64 {
        fft::signed_index(j, self.n_points)
    }

    /// Lattice frequency of FFT slot `j`.
    pub fn xi(&self, j: usize) -> f64 {
        self.mode(j) as f64 * self.dxi()
    }

    pub fn xis(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.xi(j)).collect()
    }

    pub fn slot(&self, mode: i64) -> Option<usize> {
        fft::slot(mode, self.n_points)
    }

    /// Same box with a different resolution.
    pub fn with_points(&self, n_points: usize) -> Result<Self> {
        check_points(n_points)?;
        Ok(Self { n_points, ..*self })
    }
}

/// `⟨a⟩ = (1 + a²)^{1/2}`.
#[inline]
pub fn bracket(a: f64) -> f64 {
    a.hypot(1.0)
}

#[inline]
fn flat_step(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// Smooth transition: 1 for `d <= 0`, 0 for `d >= 1`, C^∞ and monotone between.
#[inline]
fn transition(d: f64) -> f64 {
    if d <= 0.0 {
        1.0
    } else if d >= 1.0 {
        0.0
    } else {
        let a = flat_step(1.0 - d);
        a / (a + flat_step(d))
    }
}

/// The master bump χ: 1 on [-1, 1], 0 outside (-2, 2), radially non-increasing.
#[inline]
pub fn smooth_cutoff(xi: f64) -> f64 {
    transition(xi.abs() - 1.0)
}

/// `χ_T(ξ) = χ(ξ/T) − χ(2ξ/T)`, supported in `T/2 < |ξ| < 2T`.
#[inline]
pub fn chi_annulus(xi: f64, t: f64) -> f64 {
    smooth_cutoff(xi / t) - smooth_cutoff(2.0 * xi / t)
}

/// `χ_{≤T}(ξ) = χ(ξ/T)`.
#[inline]
pub fn chi_leq(xi: f64, t: f64) -> f64 {
    smooth_cutoff(xi / t)
}

/// Smoothed indicator of `[a, b]`: 1 on the interval, 0 outside
/// `(2a − b, 2b − a)`. Callers guarantee `a < b`.
#[inline]
pub fn interval_cutoff(xi: f64, a: f64, b: f64) -> f64 {
    let y = (xi - a) / (b - a);
    let dist = if y < 0.0 { -y } else if y > 1.0 { y - 1.0 } else { 0.0 };
    transition(dist)
}

/// Element of 𝒟₁ = {1, 2, 4, …}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DyadicIndex(u64);

impl DyadicIndex {
    pub const ONE: DyadicIndex = DyadicIndex(1);

    pub fn new(n: u64) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::InvalidIndex(n));
        }
        Ok(Self(n))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }

    /// Littlewood–Paley symbol: `χ_{≤1}` for N = 1, `χ_N` otherwise.
    #[inline]
    pub fn weight(self, xi: f64) -> f64 {
        if self.0 == 1 {
            chi_leq(xi, 1.0)
        } else {
            chi_annulus(xi, self.0 as f64)
        }
    }

    /// All blocks `1 ≤ N ≤ 2·n_points`; higher blocks vanish on the lattice.
    pub fn blocks(domain: &Domain) -> Vec<DyadicIndex> {
        let top = 2 * domain.n_points as u64;
        std::iter::successors(Some(1u64), |n| Some(n * 2))
            .take_while(|&n| n <= top)
            .map(DyadicIndex)
            .collect()
    }
}

impl std::fmt::Display for DyadicIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Samples of a field on the spatial grid at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub domain: Domain,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(domain: Domain, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != domain.n_points {
            return Err(Error::InvalidDomain(format!(
                "{} samples for a grid of {} points",
                values.len(),
                domain.n_points
            )));
        }
        Ok(Self { domain, values })
    }

    pub fn zeros(domain: Domain) -> Self {
        Self { domain, values: vec![ZERO; domain.n_points] }
    }

    pub fn from_fn(domain: Domain, f: impl Fn(f64) -> Complex64) -> Self {
        let values = (0..domain.n_points).map(|j| f(domain.x(j))).collect();
        Self { domain, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Riemann-sum L² norm.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.domain.dx()).sqrt()
    }

    pub fn linf_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &GridFunction) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn conj(&self) -> GridFunction {
        GridFunction { domain: self.domain, values: self.values.iter().map(|v| v.conj()).collect() }
    }

    pub fn scaled(&self, a: Complex64) -> GridFunction {
        GridFunction { domain: self.domain, values: self.values.iter().map(|v| v * a).collect() }
    }

    pub fn sub(&self, other: &GridFunction) -> GridFunction {
        GridFunction {
            domain: self.domain,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &GridFunction) -> GridFunction {
        GridFunction {
            domain: self.domain,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn to_spectral(&self) -> SpectralField {
        SpectralField::from_grid(self)
    }
}

/// Fourier coefficients `f̂(ξ)` on the lattice, stored in FFT slot order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub domain: Domain,
    pub coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(domain: Domain) -> Self {
        Self { domain, coeffs: vec![ZERO; domain.n_points] }
    }

    pub fn new(domain: Domain, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != domain.n_points {
            return Err(Error::InvalidDomain(format!(
                "{} coefficients for a lattice of {} modes",
                coeffs.len(),
                domain.n_points
            )));
        }
        Ok(Self { domain, coeffs })
    }

    /// `f̂ = δ_{ξ, mode}` with unit amplitude.
    pub fn unit_mass(domain: Domain, mode: i64) -> Result<Self> {
        let slot = domain
            .slot(mode)
            .ok_or_else(|| Error::Parameter(format!("mode {mode} is not on the lattice")))?;
        let mut f = Self::zeros(domain);
        f.coeffs[slot] = Complex64::new(1.0, 0.0);
        Ok(f)
    }

    /// Normalisation `f̂ = (Δx/√2π)·e^{-iξx₀}·DFT(f)`.
    pub fn from_grid(g: &GridFunction) -> Self {
        let d = g.domain;
        let mut c = g.values.clone();
        fft::forward(&mut c);
        let s = d.dx() / (2.0 * PI).sqrt();
        let x0 = d.x0();
        for (j, v) in c.iter_mut().enumerate() {
            *v *= Complex64::from_polar(s, -d.xi(j) * x0);
        }
        Self { domain: d, coeffs: c }
    }

    pub fn to_grid(&self) -> GridFunction {
        let d = self.domain;
        let s = (2.0 * PI).sqrt() / (d.dx() * d.n_points as f64);
        let x0 = d.x0();
        let mut c: Vec<Complex64> =
            self.coeffs.iter().enumerate().map(|(j, v)| v * Complex64::from_polar(s, d.xi(j) * x0)).collect();
        fft::inverse(&mut c);
        GridFunction { domain: d, values: c }
    }

    /// Coefficient at integer mode label `k`, zero off the lattice.
    pub fn at_mode(&self, k: i64) -> Complex64 {
        self.domain.slot(k).map_or(ZERO, |j| self.coeffs[j])
    }

    /// Plancherel L² norm.
    pub fn l2_norm(&self) -> f64 {
        (self.coeffs.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.domain.dxi()).sqrt()
    }

    /// Coefficient-wise multiplication by a real symbol `m(ξ)`.
    pub fn apply_symbol(&self, m: impl Fn(f64) -> f64) -> SpectralField {
        let d = self.domain;
        let coeffs = self.coeffs.iter().enumerate().map(|(j, v)| v * m(d.xi(j))).collect();
        SpectralField { domain: d, coeffs }
    }

    /// Transform of the complex conjugate: `ξ ↦ conj f̂(−ξ)` (zero where −ξ leaves the lattice).
    pub fn conj_flip(&self) -> SpectralField {
        let d = self.domain;
        let coeffs = (0..d.n_points).map(|j| self.at_mode(-d.mode(j)).conj()).collect();
        SpectralField { domain: d, coeffs }
    }

    pub fn sub(&self, other: &SpectralField) -> SpectralField {
        SpectralField {
            domain: self.domain,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &SpectralField) -> SpectralField {
        SpectralField {
            domain: self.domain,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &SpectralField) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// Littlewood–Paley block `P_N f`.
pub fn dyadic_projection(f: &SpectralField, n: DyadicIndex) -> SpectralField {
    f.apply_symbol(|xi| n.weight(xi))
}

/// Checked variant taking a raw integer block label.
pub fn dyadic_projection_raw(f: &SpectralField, n: u64) -> Result<SpectralField> {
    Ok(dyadic_projection(f, DyadicIndex::new(n)?))
}

/// Bessel potential `J^s`: multiplication by `⟨ξ⟩^s`.
pub fn bessel_potential(f: &SpectralField, s: f64) -> SpectralField {
    if s == 0.0 {
        return f.clone();
    }
    f.apply_symbol(|xi| bracket(xi).powf(s))
}

/// `P_{[a,b]}`: multiplication by the smoothed indicator of `[a, b]`.
pub fn interval_projection(f: &SpectralField, a: f64, b: f64) -> Result<SpectralField> {
    if !(a < b) {
        return Err(Error::InvalidInterval { a, b });
    }
    Ok(f.apply_symbol(|xi| interval_cutoff(xi, a, b)))
}

/// Smooth time window applied before transforming a trajectory in `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "t")]
pub enum Window {
    /// χ(t)
    Unit,
    /// χ(t/T), equal to 1 on [−T, T]
    Scaled(f64),
    /// χ_T(t) = χ(t/T) − χ(2t/T)
    Annular(f64),
}

impl Window {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Window::Unit => smooth_cutoff(t),
            Window::Scaled(s) => chi_leq(t, s),
            Window::Annular(s) => chi_annulus(t, s),
        }
    }

    /// The window vanishes for `|t| >= support_radius()`.
    pub fn support_radius(&self) -> f64 {
        match *self {
            Window::Unit => 2.0,
            Window::Scaled(s) | Window::Annular(s) => 2.0 * s,
        }
    }
}

/// τ-lattice `{l·Δτ : −M/2 ≤ l < M/2}` dual to `M` time samples of step Δt.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulationLattice {
    pub dtau: f64,
    pub n_tau: usize,
}

impl ModulationLattice {
    pub fn new(dtau: f64, n_tau: usize) -> Result<Self> {
        if !(dtau > 0.0) || n_tau == 0 {
            return Err(Error::Parameter(format!("bad modulation lattice Δτ = {dtau}, M = {n_tau}")));
        }
        Ok(Self { dtau, n_tau })
    }

    /// Lattice dual to `n_tau` samples spaced `dt`: Δτ = 2π/(M·Δt).
    pub fn dual_to(dt: f64, n_tau: usize) -> Result<Self> {
        Self::new(2.0 * PI / (dt * n_tau as f64), n_tau)
    }

    pub fn tau(&self, l: usize) -> f64 {
        fft::signed_index(l, self.n_tau) as f64 * self.dtau
    }

    pub fn tau_max(&self) -> f64 {
        0.5 * self.n_tau as f64 * self.dtau
    }

    pub fn slot(&self, l: i64) -> Option<usize> {
        fft::slot(l, self.n_tau)
    }
}

/// Space–time coefficients `û(ξ, τ)`, row-major with ξ slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    pub domain: Domain,
    pub lattice: ModulationLattice,
    /// Time of the first sample the field was built from.
    pub t_start: f64,
    pub coeffs: Vec<Complex64>,
    pub window: Option<Window>,
}

impl SpaceTimeField {
    pub fn zeros(domain: Domain, lattice: ModulationLattice) -> Self {
        Self {
            domain,
            lattice,
            t_start: -0.5 * lattice.n_tau as f64 * Self::dt_of(&lattice),
            coeffs: vec![ZERO; domain.n_points * lattice.n_tau],
            window: None,
        }
    }

    fn dt_of(lattice: &ModulationLattice) -> f64 {
        2.0 * PI / (lattice.dtau * lattice.n_tau as f64)
    }

    pub fn dt(&self) -> f64 {
        Self::dt_of(&self.lattice)
    }

    /// Unit amplitude at lattice point (mode, τ-index).
    pub fn unit_mass(domain: Domain, lattice: ModulationLattice, mode: i64, tau_index: i64) -> Result<Self> {
        let k = domain.slot(mode).ok_or_else(|| Error::Parameter(format!("mode {mode} off lattice")))?;
        let l = lattice.slot(tau_index).ok_or_else(|| Error::Parameter(format!("τ index {tau_index} off lattice")))?;
        let mut u = Self::zeros(domain, lattice);
        u.coeffs[k * lattice.n_tau + l] = Complex64::new(1.0, 0.0);
        Ok(u)
    }

    #[inline]
    pub fn index(&self, k: usize, l: usize) -> usize {
        k * self.lattice.n_tau + l
    }

    /// Transform `M` equally spaced slices `u(·, t_start + mΔt)`.
    pub fn from_samples(domain: Domain, t_start: f64, dt: f64, slices: &[Vec<Complex64>]) -> Result<Self> {
        let m = slices.len();
        let n = domain.n_points;
        if m == 0 || slices.iter().any(|s| s.len() != n) {
            return Err(Error::Parameter("space–time samples must be non-empty rows of n_points".into()));
        }
        let lattice = ModulationLattice::dual_to(dt, m)?;
        // ξ-major layout: data[k*m + l]
        let mut data = vec![ZERO; n * m];
        for (t_idx, row) in slices.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                data[j * m + t_idx] = *v;
            }
        }
        fft::forward_2d(&mut data, n, m);
        let scale = domain.dx() * dt / (2.0 * PI);
        let x0 = domain.x0();
        for k in 0..n {
            let xi = domain.xi(k);
            for l in 0..m {
                let tau = lattice.tau(l);
                data[k * m + l] *= Complex64::from_polar(scale, -(xi * x0 + tau * t_start));
            }
        }
        Ok(Self { domain, lattice, t_start, coeffs: data, window: None })
    }

    /// Inverse of [`SpaceTimeField::from_samples`]: one row per time sample.
    pub fn to_samples(&self) -> Vec<Vec<Complex64>> {
        let n = self.domain.n_points;
        let m = self.lattice.n_tau;
        let dt = self.dt();
        let scale = 2.0 * PI / (self.domain.dx() * dt * (n * m) as f64);
        let x0 = self.domain.x0();
        let mut data = self.coeffs.clone();
        for k in 0..n {
            let xi = self.domain.xi(k);
            for l in 0..m {
                let tau = self.lattice.tau(l);
                data[k * m + l] *= Complex64::from_polar(scale, xi * x0 + tau * self.t_start);
            }
        }
        fft::inverse_2d(&mut data, n, m);
        (0..m).map(|t_idx| (0..n).map(|j| data[j * m + t_idx]).collect()).collect()
    }

    pub fn sample_times(&self) -> Vec<f64> {
        let dt = self.dt();
        (0..self.lattice.n_tau).map(|m| self.t_start + m as f64 * dt).collect()
    }

    /// Field of the complex conjugate `ū`.
    pub fn conjugate(&self) -> SpaceTimeField {
        let rows: Vec<Vec<Complex64>> =
            self.to_samples().into_iter().map(|r| r.into_iter().map(|v| v.conj()).collect()).collect();
        let mut out = Self::from_samples(self.domain, self.t_start, self.dt(), &rows)
            .expect("conjugation preserves the lattice");
        out.window = self.window;
        out
    }

    /// Multiply by a real symbol `w(ξ, τ)`.
    pub fn apply_symbol(&self, w: impl Fn(f64, f64) -> f64) -> SpaceTimeField {
        let mut out = self.clone();
        let m = self.lattice.n_tau;
        for k in 0..self.domain.n_points {
            let xi = self.domain.xi(k);
            for l in 0..m {
                out.coeffs[k * m + l] *= w(xi, self.lattice.tau(l));
            }
        }
        out
    }

    /// `P_N` acting in the spatial frequency.
    pub fn dyadic_projection(&self, n: DyadicIndex) -> SpaceTimeField {
        self.apply_symbol(|xi, _| n.weight(xi))
    }

    pub fn scaled(&self, a: Complex64) -> SpaceTimeField {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|v| *v *= a);
        out
    }

    pub fn add(&self, other: &SpaceTimeField) -> SpaceTimeField {
        let mut out = self.clone();
        out.coeffs.iter_mut().zip(&other.coeffs).for_each(|(a, b)| *a += b);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|v| *v == ZERO)
    }
}

/// `Γ_±^s`: multiplication by `⟨τ ± ξ²⟩^s`.
pub fn modulation_weight(u: &SpaceTimeField, s: f64, sign: Sign) -> SpaceTimeField {
    if s == 0.0 {
        return u.clone();
    }
    let sg = sign.value();
    u.apply_symbol(|xi, tau| bracket(tau + sg * xi * xi).powf(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(d: Domain, seed: u64) -> SpectralField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..d.n_points).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        GridFunction::new(d, values).unwrap().to_spectral()
    }

    #[test]
    fn bracket_values() {
        assert_eq!(bracket(0.0), 1.0);
        assert_eq!(bracket(1.0), std::f64::consts::SQRT_2);
        assert_eq!(bracket(-3.0), bracket(3.0));
        for a in [0.0, 0.3, 1.0, 7.5, 1e3] {
            assert!(bracket(a) >= 1f64.max(a));
            assert!(bracket(a) <= 1.0 + a);
        }
    }

    #[test]
    fn cutoff_values() {
        assert_eq!(smooth_cutoff(0.5), 1.0);
        assert_eq!(smooth_cutoff(2.5), 0.0);
        assert_eq!(smooth_cutoff(1.0), 1.0);
        assert_eq!(smooth_cutoff(2.0), 0.0);
        for n in [1.0, 2.0, 8.0, 1024.0] {
            assert_eq!(chi_annulus(n, n), 1.0);
        }
        let mut prev = 1.0;
        for i in 0..400 {
            let x = i as f64 * 0.01;
            let c = smooth_cutoff(x);
            assert!(c <= prev + 1e-15 && (0.0..=1.0).contains(&c));
            assert_eq!(c, smooth_cutoff(-x));
            prev = c;
        }
    }

    #[test]
    fn dyadic_index_validation() {
        assert!(DyadicIndex::new(0).is_err());
        assert!(DyadicIndex::new(3).is_err());
        assert_eq!(DyadicIndex::new(8).unwrap().get(), 8);
        let d = Domain::torus(16).unwrap();
        let b = DyadicIndex::blocks(&d);
        assert_eq!(b.first().unwrap().get(), 1);
        assert_eq!(b.last().unwrap().get(), 32);
        assert!(dyadic_projection_raw(&SpectralField::zeros(d), 6).is_err());
    }

    #[test]
    fn dyadic_projection_examples() {
        let d = Domain::torus(32).unwrap();
        let f = SpectralField::unit_mass(d, 2).unwrap();
        let p2 = dyadic_projection(&f, DyadicIndex::new(2).unwrap());
        assert_eq!(p2, f);
        let p8 = dyadic_projection(&f, DyadicIndex::new(8).unwrap());
        assert!(p8.coeffs.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn partition_of_unity_and_two_blocks() {
        for d in [Domain::torus(256).unwrap(), Domain::line(256, 4).unwrap()] {
            let blocks = DyadicIndex::blocks(&d);
            for j in 0..d.n_points {
                let xi = d.xi(j);
                let total: f64 = blocks.iter().map(|n| n.weight(xi)).sum();
                assert!((total - 1.0).abs() < 1e-12, "ξ = {xi}: {total}");
                if xi != 0.0 {
                    let active = blocks.iter().skip(1).filter(|n| n.weight(xi) != 0.0).count();
                    assert!(active <= 2);
                }
            }
            let f = random_field(d, 3);
            let mut sum = SpectralField::zeros(d);
            for n in &blocks {
                let p = dyadic_projection(&f, *n);
                assert!(p.l2_norm() <= f.l2_norm() + 1e-14);
                sum = sum.add(&p);
            }
            assert!(sum.max_abs_diff(&f) < 1e-12);
        }
    }

    #[test]
    fn transforms_roundtrip_and_plancherel() {
        for d in [Domain::torus(64).unwrap(), Domain::line(128, 8).unwrap()] {
            let g = random_field(d, 11).to_grid();
            let f = g.to_spectral();
            let back = f.to_grid();
            let rel = g.sub(&back).l2_norm() / g.l2_norm();
            assert!(rel < 1e-12);
            assert!((f.l2_norm() - g.l2_norm()).abs() < 1e-12 * g.l2_norm());
        }
        // unit mass at ξ = 1 on the torus is e^{ix}/√(2π)
        let d = Domain::torus(16).unwrap();
        let g = SpectralField::unit_mass(d, 1).unwrap().to_grid();
        for j in 0..16 {
            let want = Complex64::from_polar(1.0 / (2.0 * PI).sqrt(), d.x(j));
            assert!((g.values[j] - want).norm() < 1e-14);
        }
    }

    #[test]
    fn line_transform_approximates_gaussian() {
        // (2π)^{-1/2}∫ e^{-ixξ} e^{-x²/2} dx = e^{-ξ²/2}
        let d = Domain::line(256, 4).unwrap();
        let f = GridFunction::from_fn(d, |x| Complex64::new((-0.5 * x * x).exp(), 0.0)).to_spectral();
        for j in 0..d.n_points {
            let xi = d.xi(j);
            assert!((f.coeffs[j] - Complex64::new((-0.5 * xi * xi).exp(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn bessel_potential_examples() {
        let d = Domain::torus(32).unwrap();
        let f = random_field(d, 5);
        assert_eq!(bessel_potential(&f, 0.0), f);
        let one = SpectralField::unit_mass(d, 1).unwrap();
        assert!((bessel_potential(&one, 2.0).at_mode(1).re - 2.0).abs() < 1e-14);
        let back = bessel_potential(&bessel_potential(&f, -1.7), 1.7);
        assert!(back.max_abs_diff(&f) < 1e-13);
    }

    #[test]
    fn interval_projection_examples() {
        let d = Domain::line(64, 2).unwrap(); // Δξ = 1/2
        let f = SpectralField::unit_mass(d, 1).unwrap(); // ξ = 0.5
        assert_eq!(interval_projection(&f, 0.0, 1.0).unwrap(), f);
        let g = SpectralField::unit_mass(d, 10).unwrap(); // ξ = 5
        assert!(interval_projection(&g, 0.0, 1.0).unwrap().l2_norm() == 0.0);
        assert!(matches!(interval_projection(&f, 1.0, 1.0), Err(Error::InvalidInterval { .. })));
        assert!(interval_projection(&f, 2.0, 1.0).is_err());
        assert_eq!(interval_cutoff(-1.0, 0.0, 1.0), 0.0);
        assert_eq!(interval_cutoff(2.0, 0.0, 1.0), 0.0);
        assert!(interval_cutoff(-0.5, 0.0, 1.0) > 0.0);
    }

    #[test]
    fn interval_almost_orthogonality() {
        // brute force over random fields: Σ_k ‖P_{I_k} f‖² ≤ 3‖f‖²
        let d = Domain::torus(256).unwrap();
        let h = 5.0;
        for seed in 0..20 {
            let f = random_field(d, 100 + seed);
            let total: f64 = (-30..30)
                .map(|k| interval_projection(&f, k as f64 * h, (k + 1) as f64 * h).unwrap().l2_norm().powi(2))
                .sum();
            assert!(total <= 3.0 * f.l2_norm().powi(2));
        }
    }

    #[test]
    fn modulation_weight_examples() {
        let d = Domain::torus(8).unwrap();
        let lat = ModulationLattice::new(1.0, 8).unwrap();
        let u = SpaceTimeField::unit_mass(d, lat, 1, -1).unwrap();
        let k = d.slot(1).unwrap();
        let l = lat.slot(-1).unwrap();
        let plus = modulation_weight(&u, 1.0, Sign::Plus);
        assert!((plus.coeffs[u.index(k, l)].re - 1.0).abs() < 1e-15);
        let minus = modulation_weight(&u, 1.0, Sign::Minus);
        assert!((minus.coeffs[u.index(k, l)].re - 5f64.sqrt()).abs() < 1e-14);
        assert_eq!(modulation_weight(&u, 0.0, Sign::Minus), u);
    }

    #[test]
    fn space_time_roundtrip() {
        let d = Domain::torus(16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rows: Vec<Vec<Complex64>> = (0..24)
            .map(|_| (0..16).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
            .collect();
        let u = SpaceTimeField::from_samples(d, -1.3, 0.1, &rows).unwrap();
        let back = u.to_samples();
        for (a, b) in rows.iter().zip(&back) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }
}
