//! Trilinear multipliers, the resonance identity and their sampling scans.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{chunk_rng, ProbeReport, CHUNK};
use crate::error::{Error, Result};
use crate::frequency::bracket;

/// Point `(ξ, τ, ξ⃗, τ⃗)` on the convolution hyperplane. Only `ξ⃗` and `τ⃗` are
/// stored; `ξ` and `τ` are their sums, so the constraint holds exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiplierPoint {
    pub xis: [f64; 3],
    pub taus: [f64; 3],
}

impl MultiplierPoint {
    pub fn new(xis: [f64; 3], taus: [f64; 3]) -> Result<Self> {
        if xis.iter().chain(&taus).any(|v| !v.is_finite()) {
            return Err(Error::Parameter("multiplier point coordinates must be finite".into()));
        }
        Ok(Self { xis, taus })
    }

    /// Checks a fully specified point against the hyperplane.
    pub fn from_parts(xi: f64, tau: f64, xis: [f64; 3], taus: [f64; 3]) -> Result<Self> {
        let p = Self::new(xis, taus)?;
        let scale = 1.0 + xis.iter().chain(&taus).map(|v| v.abs()).fold(xi.abs().max(tau.abs()), f64::max);
        if (p.xi() - xi).abs() > 1e-12 * scale || (p.tau() - tau).abs() > 1e-12 * scale {
            return Err(Error::Parameter(format!(
                "point off the hyperplane: ξ = {xi} vs Σξⱼ = {}, τ = {tau} vs Στⱼ = {}",
                p.xi(),
                p.tau()
            )));
        }
        Ok(p)
    }

    pub fn xi(&self) -> f64 {
        self.xis.iter().sum()
    }

    pub fn tau(&self) -> f64 {
        self.taus.iter().sum()
    }

    /// The set `A = (τ+ξ², τ₁+ξ₁², τ₂+ξ₂², τ₃−ξ₃²)`, with signs.
    pub fn modulations(&self) -> [f64; 4] {
        let [x1, x2, x3] = self.xis;
        let [t1, t2, t3] = self.taus;
        let xi = self.xi();
        [self.tau() + xi * xi, t1 + x1 * x1, t2 + x2 * x2, t3 - x3 * x3]
    }

    /// Index of the largest `|A_j|`, ties going to the lowest index.
    pub fn dominant(&self) -> usize {
        let a = self.modulations();
        let mut best = 0;
        for j in 1..4 {
            if a[j].abs() > a[best].abs() {
                best = j;
            }
        }
        best
    }

    /// Largest magnitude entering the identity, used to scale residuals.
    pub fn scale(&self) -> f64 {
        let xi = self.xi();
        let mut s = xi * xi;
        for v in self.xis {
            s = s.max(v * v);
        }
        for v in self.taus {
            s = s.max(v.abs());
        }
        s.max(self.tau().abs())
    }

    /// Case of the domination argument this point falls in.
    pub fn case(&self) -> CaseLabel {
        let [x1, x2, x3] = self.xis;
        let xi = self.xi();
        let big1 = xi.abs() > 2.0 * x1.abs();
        let big2 = xi.abs() > 2.0 * x2.abs();
        match (big1, big2) {
            (true, true) => CaseLabel::I,
            (false, false) => CaseLabel::II,
            (true, false) => {
                if xi.abs() < 1.0 {
                    CaseLabel::IIIa
                } else if x3.abs() < 1.0 {
                    CaseLabel::IIIb
                } else if x1.abs() > (xi - x2).abs() {
                    CaseLabel::IIIc
                } else {
                    CaseLabel::IIId
                }
            }
            (false, true) => CaseLabel::IV,
        }
    }
}

/// Regimes of the domination argument:
/// I `|ξ|>2|ξ₁|, |ξ|>2|ξ₂|`; II `|ξ|≤2|ξ₁|, |ξ|≤2|ξ₂|`; III `|ξ|>2|ξ₁|, |ξ|≤2|ξ₂|`
/// split into a `|ξ|<1`, b `|ξ₃|<1`, c `|ξ₁|>|ξ−ξ₂|`, d otherwise; IV the mirror of III.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseLabel {
    I,
    II,
    IIIa,
    IIIb,
    IIIc,
    IIId,
    IV,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 7] =
        [CaseLabel::I, CaseLabel::II, CaseLabel::IIIa, CaseLabel::IIIb, CaseLabel::IIIc, CaseLabel::IIId, CaseLabel::IV];

    pub fn name(self) -> &'static str {
        match self {
            CaseLabel::I => "I",
            CaseLabel::II => "II",
            CaseLabel::IIIa => "IIIa",
            CaseLabel::IIIb => "IIIb",
            CaseLabel::IIIc => "IIIc",
            CaseLabel::IIId => "IIId",
            CaseLabel::IV => "IV",
        }
    }
}

/// Residuals of the resonance identity at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceResidual {
    /// `|A₀ − A₁ − A₂ − A₃ − 2(ξ−ξ₁)(ξ−ξ₂)|`
    pub identity: f64,
    /// `|2|(ξ−ξ₁)(ξ−ξ₂)| − 2|ξ₁+ξ₃||ξ₂+ξ₃||`
    pub factorization: f64,
    /// `4 max|A| ≥ 2|ξ₁+ξ₃||ξ₂+ξ₃|` up to rounding.
    pub bound_holds: bool,
    pub scale: f64,
}

impl ResonanceResidual {
    pub fn relative(&self) -> f64 {
        self.identity.max(self.factorization) / (1.0 + self.scale)
    }
}

pub fn resonance_check(p: &MultiplierPoint) -> ResonanceResidual {
    let [x1, x2, x3] = p.xis;
    let xi = p.xi();
    let a = p.modulations();
    let product = 2.0 * (xi - x1) * (xi - x2);
    let factored = 2.0 * (x1 + x3).abs() * (x2 + x3).abs();
    let identity = (a[0] - a[1] - a[2] - a[3] - product).abs();
    let factorization = (product.abs() - factored).abs();
    let max_a = a.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let scale = p.scale();
    let bound_holds = 4.0 * max_a >= factored - 1e-9 * (1.0 + scale);
    ResonanceResidual { identity, factorization, bound_holds, scale }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MultiplierTag {
    M,
    M0,
    M1,
    M2,
    M3,
    M4,
    #[serde(rename = "Mt")]
    MTilde,
    #[serde(rename = "Mt0")]
    MTilde0,
    #[serde(rename = "Mt1")]
    MTilde1,
    #[serde(rename = "Mt2")]
    MTilde2,
    #[serde(rename = "Mt3")]
    MTilde3,
    #[serde(rename = "Mt4")]
    MTilde4,
}

pub const DEFAULT_DELTA: f64 = 1.0 / 24.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiplierKind {
    pub tag: MultiplierTag,
    /// Only used by the tilde family's first term.
    pub delta: f64,
}

impl MultiplierKind {
    pub fn new(tag: MultiplierTag) -> Self {
        Self { tag, delta: DEFAULT_DELTA }
    }

    pub fn with_delta(tag: MultiplierTag, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0 / 6.0) {
            return Err(Error::Parameter(format!("δ = {delta} must lie in (0, 1/6)")));
        }
        Ok(Self { tag, delta })
    }
}

/// `|kind|` at `p`.
pub fn eval_multiplier(kind: MultiplierKind, p: &MultiplierPoint) -> f64 {
    use MultiplierTag::*;
    let [x1, x2, x3] = p.xis;
    let xi = p.xi();
    let a = p.modulations();
    let b = a.map(bracket);
    let (bx, bx1, bx2, bx3) = (bracket(xi), bracket(x1), bracket(x2), bracket(x3));
    let dom = p.dominant();
    let ind = |j: usize| if dom == j { 1.0 } else { 0.0 };
    let low = (bx1 * bx2).sqrt();
    let big = |tag: MultiplierTag| -> f64 {
        match tag {
            M => bx.sqrt() * x3.abs() / ((b[0] * b[1] * b[2] * b[3]).sqrt() * low * bx3.sqrt()),
            M0 => ind(0) / ((b[1] * b[2] * b[3]).sqrt() * low),
            M1 => ind(1) / ((b[0] * b[2] * b[3]).sqrt() * low),
            M2 => ind(2) / ((b[0] * b[1] * b[3]).sqrt() * low),
            M3 => ind(3) / ((b[0] * b[1] * b[2]).sqrt() * low),
            M4 => (b[0] * b[1] * b[2] * b[3]).powf(-7.0 / 16.0),
            _ => unreachable!(),
        }
    };
    let d = kind.delta;
    match kind.tag {
        M | M0 | M1 | M2 | M3 | M4 => big(kind.tag),
        MTilde => big(M) / b[0].sqrt(),
        MTilde0 => {
            ind(0)
                / ((b[1] * b[2] * b[3]).powf(0.5 + d)
                    * bx.powf(0.5 - 3.0 * d)
                    * low
                    * bx3.powf(0.5 - 3.0 * d))
        }
        MTilde1 => big(M1) / b[0].sqrt(),
        MTilde2 => big(M2) / b[0].sqrt(),
        MTilde3 => big(M3) / b[0].sqrt(),
        MTilde4 => big(M4) / b[0].sqrt(),
    }
}

/// `𝕐 = ℤ` or `𝕐 = ℝ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrequencySetting {
    Integer,
    Real,
}

/// Region sampled by a scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Region {
    /// The single point with all coordinates zero.
    Origin,
    /// Log-uniform magnitudes up to `bound` (modulations up to `4·bound²`).
    Box { bound: f64 },
    /// As `Box`, restricted to one case by rejection.
    Case { bound: f64, case: CaseLabel },
}

impl Region {
    pub fn bound(&self) -> f64 {
        match *self {
            Region::Origin => 0.0,
            Region::Box { bound } | Region::Case { bound, .. } => bound,
        }
    }
}

/// Rejection attempts per requested point of a case-restricted region.
const MAX_ATTEMPTS: usize = 100_000;
const ZERO_PROBABILITY: f64 = 0.1;
const MIN_MAGNITUDE: f64 = 1e-3;

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

fn signed(rng: &mut ChaCha8Rng, v: f64) -> f64 {
    if rng.gen::<bool>() {
        v
    } else {
        -v
    }
}

fn frequency(rng: &mut ChaCha8Rng, setting: FrequencySetting, bound: f64) -> f64 {
    if rng.gen_bool(ZERO_PROBABILITY) {
        return 0.0;
    }
    match setting {
        FrequencySetting::Real => {
            let m = log_uniform(rng, MIN_MAGNITUDE, bound);
            signed(rng, m)
        }
        FrequencySetting::Integer => {
            let m = log_uniform(rng, 1.0, bound + 0.5).round();
            signed(rng, m)
        }
    }
}

/// Free draw: `(ξ, ξ₁, ξ₂)` and three of the four modulations, the rest derived.
fn draw(rng: &mut ChaCha8Rng, setting: FrequencySetting, bound: f64) -> MultiplierPoint {
    let target = frequency(rng, setting, bound);
    let x1 = frequency(rng, setting, bound);
    let x2 = frequency(rng, setting, bound);
    let x3 = target - x1 - x2;
    let xi = x1 + x2 + x3;
    let resonance = 2.0 * (xi - x1) * (xi - x2);
    let mod_bound = 4.0 * bound * bound;
    let mut sigma = [0.0; 4];
    let derived = rng.gen_range(0..4);
    for (j, s) in sigma.iter_mut().enumerate() {
        if j != derived && !rng.gen_bool(ZERO_PROBABILITY) {
            let m = log_uniform(rng, MIN_MAGNITUDE, mod_bound);
            *s = signed(rng, m);
        }
    }
    // σ₀ − σ₁ − σ₂ − σ₃ = 2(ξ−ξ₁)(ξ−ξ₂)
    sigma[derived] = 0.0;
    let rest: f64 = sigma[1] + sigma[2] + sigma[3];
    if derived == 0 {
        sigma[0] = resonance + rest;
    } else {
        sigma[derived] = sigma[0] - resonance - rest;
    }
    let taus = [sigma[1] - x1 * x1, sigma[2] - x2 * x2, sigma[3] + x3 * x3];
    MultiplierPoint { xis: [x1, x2, x3], taus }
}

/// One point of `region`, or `None` if rejection sampling gave up.
pub fn sample_point(rng: &mut ChaCha8Rng, setting: FrequencySetting, region: Region) -> Option<MultiplierPoint> {
    match region {
        Region::Origin => Some(MultiplierPoint { xis: [0.0; 3], taus: [0.0; 3] }),
        Region::Box { bound } => Some(draw(rng, setting, bound)),
        Region::Case { bound, case } => {
            (0..MAX_ATTEMPTS).map(|_| draw(rng, setting, bound)).find(|p| p.case() == case)
        }
    }
}

/// Uniform draw with every coordinate in `[−bound, bound]`.
pub fn sample_uniform(rng: &mut ChaCha8Rng, setting: FrequencySetting, bound: f64) -> MultiplierPoint {
    let mut coord = |integer: bool| {
        let v = rng.gen_range(-bound..=bound);
        if integer {
            v.round()
        } else {
            v
        }
    };
    let int = setting == FrequencySetting::Integer;
    let xis = [coord(int), coord(int), coord(int)];
    let taus = [coord(false), coord(false), coord(false)];
    MultiplierPoint { xis, taus }
}

/// Largest relative resonance residual over `n` uniform points.
pub fn resonance_scan(setting: FrequencySetting, bound: f64, n: usize, seed: u64) -> ProbeReport {
    let chunks = n.div_ceil(CHUNK);
    let (max_rel, violations) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c as u64);
            let count = CHUNK.min(n - c * CHUNK);
            let mut worst = 0.0f64;
            let mut bad = 0usize;
            for _ in 0..count {
                let r = resonance_check(&sample_uniform(&mut rng, setting, bound));
                worst = worst.max(r.relative());
                bad += usize::from(!r.bound_holds);
            }
            (worst, bad)
        })
        .reduce(|| (0.0, 0), |a, b| (a.0.max(b.0), a.1 + b.1));
    let mut rep = ProbeReport::new("resonance", n, max_rel);
    rep.param("bound", bound);
    rep.note("setting", format!("{setting:?}").to_lowercase());
    rep.note("sampling", "uniform coordinates in [-bound, bound]");
    rep.detail("bound_violations", violations as f64);
    rep
}

/// Which family of multipliers a scan compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Plain,
    Tilde,
}

impl Family {
    fn tags(self) -> (MultiplierTag, [MultiplierTag; 5]) {
        use MultiplierTag::*;
        match self {
            Family::Plain => (M, [M0, M1, M2, M3, M4]),
            Family::Tilde => (MTilde, [MTilde0, MTilde1, MTilde2, MTilde3, MTilde4]),
        }
    }
}

/// `|M| / Σⱼ Mⱼ`, with `0/0 = 0`.
pub fn domination_ratio(family: Family, delta: f64, p: &MultiplierPoint) -> f64 {
    let (top, parts) = family.tags();
    let num = eval_multiplier(MultiplierKind { tag: top, delta }, p);
    let den: f64 = parts.iter().map(|&t| eval_multiplier(MultiplierKind { tag: t, delta }, p)).sum();
    if num == 0.0 {
        0.0
    } else {
        num / den
    }
}

#[derive(Clone, Copy)]
struct ScanBest {
    ratio: f64,
    point: Option<MultiplierPoint>,
}

fn better(a: ScanBest, b: ScanBest) -> ScanBest {
    if b.ratio > a.ratio {
        b
    } else {
        a
    }
}

/// Empirical sup of `|M|/ΣMⱼ` (or the tilde family) over `n` points of `region`.
///
/// For `Region::Box` the points are split evenly between the seven cases, so
/// every regime of the argument is exercised. Per-case sups are reported as
/// details, together with `|M|/M₄` restricted to case II.
pub fn domination_scan(
    family: Family,
    setting: FrequencySetting,
    region: Region,
    n: usize,
    seed: u64,
) -> ProbeReport {
    let delta = DEFAULT_DELTA;
    let (top, _) = family.tags();
    let m4 = match family {
        Family::Plain => MultiplierTag::M4,
        Family::Tilde => MultiplierTag::MTilde4,
    };
    let regions: Vec<(Option<CaseLabel>, Region)> = match region {
        Region::Box { bound } => CaseLabel::ALL.iter().map(|&c| (Some(c), Region::Case { bound, case: c })).collect(),
        Region::Case { case, .. } => vec![(Some(case), region)],
        Region::Origin => vec![(None, region)],
    };
    let per_region = n.div_ceil(regions.len());
    let mut rep = ProbeReport::new(
        match family {
            Family::Plain => "domination",
            Family::Tilde => "domination-tilde",
        },
        0,
        0.0,
    );
    let mut overall = ScanBest { ratio: 0.0, point: None };
    let mut case_two_m4 = 0.0f64;
    for (idx, (label, reg)) in regions.iter().enumerate() {
        let chunks = per_region.div_ceil(CHUNK);
        let (best, hits, m4_ratio) = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = chunk_rng(seed ^ ((idx as u64 + 1) << 40), c as u64);
                let count = CHUNK.min(per_region - c * CHUNK);
                let mut best = ScanBest { ratio: 0.0, point: None };
                let mut hits = 0usize;
                let mut m4_ratio = 0.0f64;
                for _ in 0..count {
                    let Some(p) = sample_point(&mut rng, setting, *reg) else { break };
                    hits += 1;
                    let r = domination_ratio(family, delta, &p);
                    best = better(best, ScanBest { ratio: r, point: Some(p) });
                    if p.case() == CaseLabel::II {
                        let num = eval_multiplier(MultiplierKind { tag: top, delta }, &p);
                        let den = eval_multiplier(MultiplierKind { tag: m4, delta }, &p);
                        m4_ratio = m4_ratio.max(num / den);
                    }
                }
                (best, hits, m4_ratio)
            })
            .reduce(
                || (ScanBest { ratio: 0.0, point: None }, 0, 0.0),
                |a, b| (better(a.0, b.0), a.1 + b.1, a.2.max(b.2)),
            );
        rep.samples += hits;
        overall = better(overall, best);
        case_two_m4 = case_two_m4.max(m4_ratio);
        if let Some(l) = label {
            rep.detail(&format!("sup_case_{}", l.name()), best.ratio);
            rep.detail(&format!("samples_case_{}", l.name()), hits as f64);
        }
    }
    rep.constant = overall.ratio;
    rep.argmax = overall.point;
    rep.detail("sup_case_II_over_M4", case_two_m4);
    rep.param("bound", region.bound());
    rep.param("delta", delta);
    rep.note("setting", format!("{setting:?}").to_lowercase());
    rep.note("sampling", "log-uniform magnitudes, random signs, 10% zeros, one modulation derived");
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn pt(xis: [f64; 3], taus: [f64; 3]) -> MultiplierPoint {
        MultiplierPoint::new(xis, taus).unwrap()
    }

    #[test]
    fn resonance_examples() {
        let p = pt([1.0, 2.0, 3.0], [0.3, -7.0, 2.5]);
        assert_eq!(p.xi(), 6.0);
        let r = resonance_check(&p);
        assert!(r.identity < 1e-12 && r.factorization == 0.0 && r.bound_holds);
        let a = p.modulations();
        assert!((a[0] - a[1] - a[2] - a[3] - 40.0).abs() < 1e-12);
        // ξ₁ = ξ forces ξ₂ + ξ₃ = 0
        let q = pt([2.0, 5.0, -5.0], [1.0, 1.0, 1.0]);
        assert_eq!(q.xi(), 2.0);
        let r = resonance_check(&q);
        assert!(r.identity < 1e-12 && r.factorization == 0.0);
    }

    #[test]
    fn hyperplane_violation_is_rejected() {
        assert!(MultiplierPoint::from_parts(6.0, 0.0, [1.0, 2.0, 3.0], [0.0, 0.0, 0.0]).is_ok());
        assert!(MultiplierPoint::from_parts(6.5, 0.0, [1.0, 2.0, 3.0], [0.0, 0.0, 0.0]).is_err());
        assert!(MultiplierPoint::new([f64::NAN, 0.0, 0.0], [0.0; 3]).is_err());
    }

    #[test]
    fn multiplier_examples() {
        let origin = pt([0.0; 3], [0.0; 3]);
        assert_eq!(origin.dominant(), 0);
        assert_eq!(eval_multiplier(MultiplierKind::new(MultiplierTag::M), &origin), 0.0);
        assert_eq!(eval_multiplier(MultiplierKind::new(MultiplierTag::M0), &origin), 1.0);
        assert_eq!(eval_multiplier(MultiplierKind::new(MultiplierTag::M4), &origin), 1.0);
        let p = pt([1.0, 2.0, 0.0], [3.0, 1.0, -2.0]);
        assert_eq!(eval_multiplier(MultiplierKind::new(MultiplierTag::M), &p), 0.0);
        assert!(MultiplierKind::with_delta(MultiplierTag::MTilde0, 0.2).is_err());
    }

    #[test]
    fn indicators_partition_and_tilde_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        use MultiplierTag::*;
        for _ in 0..20_000 {
            let p = draw(&mut rng, FrequencySetting::Real, 100.0);
            let ind: f64 = [M0, M1, M2, M3]
                .iter()
                .map(|&t| if eval_multiplier(MultiplierKind::new(t), &p) > 0.0 { 1.0 } else { 0.0 })
                .sum();
            assert_eq!(ind, 1.0);
            let b0 = bracket(p.modulations()[0]).sqrt();
            let m = eval_multiplier(MultiplierKind::new(M), &p);
            let mt = eval_multiplier(MultiplierKind::new(MTilde), &p);
            assert!((mt - m / b0).abs() <= 1e-12 * m.max(1e-300));
            for (a, b) in [(M1, MTilde1), (M2, MTilde2), (M3, MTilde3), (M4, MTilde4)] {
                let x = eval_multiplier(MultiplierKind::new(a), &p);
                let y = eval_multiplier(MultiplierKind::new(b), &p);
                assert!((y - x / b0).abs() <= 1e-12 * x.max(1e-300));
            }
        }
    }

    #[test]
    fn sampler_respects_cases_and_hyperplane() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for setting in [FrequencySetting::Real, FrequencySetting::Integer] {
            for case in CaseLabel::ALL {
                let region = Region::Case { bound: 100.0, case };
                match sample_point(&mut rng, setting, region) {
                    Some(p) => {
                        assert_eq!(p.case(), case);
                        assert!(resonance_check(&p).relative() < 1e-12);
                        if setting == FrequencySetting::Integer {
                            assert!(p.xis.iter().all(|v| v.fract() == 0.0));
                        }
                    }
                    // |ξ| < 1 with |ξ| > 2|ξ₁| has no integer solutions
                    None => assert!(setting == FrequencySetting::Integer && case == CaseLabel::IIIa),
                }
            }
        }
    }

    #[test]
    fn origin_scan_is_zero() {
        let rep = domination_scan(Family::Plain, FrequencySetting::Real, Region::Origin, 10, 0);
        assert_eq!(rep.constant, 0.0);
    }

    #[test]
    fn scans_are_deterministic_and_finite() {
        let a = domination_scan(Family::Plain, FrequencySetting::Real, Region::Box { bound: 50.0 }, 7000, 3);
        let b = domination_scan(Family::Plain, FrequencySetting::Real, Region::Box { bound: 50.0 }, 7000, 3);
        assert_eq!(a.constant, b.constant);
        assert!(a.constant.is_finite() && a.constant > 0.0);
        let r = resonance_scan(FrequencySetting::Integer, 1e3, 10_000, 4);
        assert!(r.constant < 1e-12);
        assert_eq!(r.details["bound_violations"], 0.0);
    }
}
