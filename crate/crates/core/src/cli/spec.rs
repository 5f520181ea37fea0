//! Experiment configuration files.
//!
//! A config is a JSON object `{name, seed?, scenario?, out?, params}`. The
//! shape of `params` depends on the scenario; unknown keys are rejected so
//! typos surface as schema errors with a line and column.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::estimates::{Family, FrequencySetting, Multilinear, SpaceTimeGrid, MULTILINEAR_DELTA};
use crate::frequency::{Domain, DomainKind};
use crate::nonlinear::NonlinearityConfig;
use crate::solver::{Direction, Integrator};

macro_rules! scenarios {
    ($($variant:ident => $name:literal),* $(,)?) => {
        /// Experiment kinds accepted by the runner.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
        pub enum Scenario {
            $(#[serde(rename = $name)] $variant,)*
        }

        impl Scenario {
            pub const ALL: &'static [Scenario] = &[$(Scenario::$variant),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(Scenario::$variant => $name,)*
                }
            }
        }
    };
}

scenarios! {
    Solve => "solve",
    GaugeRoundtrip => "gauge-roundtrip",
    GaugeEquivalence => "gauge-equivalence",
    PlaneWave => "plane-wave",
    Scaling => "scaling",
    Flowmap => "flowmap",
    VerifyResonance => "verify-resonance",
    VerifyDomination => "verify-domination",
    ProbeStrichartz => "probe-strichartz",
    ProbeTrilinear => "probe-trilinear",
    ProbeMultilinear => "probe-multilinear",
    ProbeSmult => "probe-smult",
    DyadicChecks => "dyadic-checks",
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Scenario::ALL.iter().copied().find(|c| c.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Scenario::ALL.iter().map(|c| c.name()).collect();
            format!("unknown scenario {s:?}; expected one of {}", names.join(", "))
        })
    }
}

/// Config rejected before any computation; maps to exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemaError(pub String);

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for SchemaError {}

fn invalid(msg: impl Into<String>) -> SchemaError {
    SchemaError(msg.into())
}

// ---------------------------------------------------------------- shared

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub kind: DomainKind,
    pub n_points: usize,
    /// Line period in units of 2π; ignored on the torus.
    #[serde(default = "one")]
    pub scale: u32,
}

impl DomainSpec {
    pub fn build(&self) -> Result<Domain, SchemaError> {
        match self.kind {
            DomainKind::Torus => Domain::torus(self.n_points),
            DomainKind::LineApprox => Domain::line(self.n_points, self.scale),
        }
        .map_err(|e| invalid(format!("params.domain: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonlinearitySpec {
    #[serde(default)]
    pub lambda: f64,
    #[serde(default = "one")]
    pub k: u32,
    #[serde(default)]
    pub gauged: bool,
}

impl NonlinearitySpec {
    pub fn build(&self, kind: DomainKind) -> NonlinearityConfig {
        if self.gauged {
            NonlinearityConfig::gauged(kind, self.lambda, self.k)
        } else {
            NonlinearityConfig::original(kind, self.lambda, self.k)
        }
    }
}

/// Initial datum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", deny_unknown_fields)]
pub enum InitialSpec {
    /// `A·e^{ikx}` (torus).
    PlaneWave {
        amplitude: f64,
        #[serde(default = "one_i64")]
        mode: i64,
    },
    /// `A·exp(−(x−c)²/2w²)·e^{ivx}`, centred mid-domain unless `center` is set.
    Gaussian {
        amplitude: f64,
        #[serde(default = "unit")]
        width: f64,
        #[serde(default)]
        velocity: f64,
        #[serde(default)]
        center: Option<f64>,
    },
    /// Random modes `|k| ≤ band` with `⟨k⟩^{−decay}` amplitudes, scaled to the
    /// given `H¹` norm (Gaussian-enveloped on the line).
    Random {
        band: i64,
        #[serde(default = "unit")]
        decay: f64,
        h1_norm: f64,
    },
}

fn one_i64() -> i64 {
    1
}

fn unit() -> f64 {
    1.0
}

fn default_ts() -> Vec<f64> {
    vec![1.0, 0.5, 0.25, 0.125]
}

// ------------------------------------------------------- per scenario

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveParams {
    pub domain: DomainSpec,
    #[serde(default)]
    pub nonlinearity: NonlinearitySpec,
    pub dt: f64,
    pub t_final: f64,
    #[serde(default)]
    pub integrator: Integrator,
    #[serde(default = "one_usize")]
    pub save_every: usize,
    #[serde(default = "forward")]
    pub direction: Direction,
    pub initial: InitialSpec,
    #[serde(default = "yes")]
    pub dump: bool,
    #[serde(default = "mass_tol")]
    pub mass_tolerance: f64,
}

fn one_usize() -> usize {
    1
}

fn forward() -> Direction {
    Direction::Forward
}

fn yes() -> bool {
    true
}

fn mass_tol() -> f64 {
    1e-9
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeRoundtripParams {
    pub domain: DomainSpec,
    #[serde(default = "hundred")]
    pub samples: usize,
    #[serde(default = "eight")]
    pub band: i64,
    #[serde(default = "unit")]
    pub amplitude: f64,
    #[serde(default = "roundtrip_tol")]
    pub tolerance: f64,
}

fn hundred() -> usize {
    100
}

fn eight() -> i64 {
    8
}

fn roundtrip_tol() -> f64 {
    1e-12
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeEquivalenceParams {
    pub domain: DomainSpec,
    #[serde(default)]
    pub lambda: f64,
    #[serde(default = "one")]
    pub k: u32,
    pub dt: f64,
    #[serde(default = "t_short")]
    pub t_final: f64,
    #[serde(default)]
    pub initial: Option<InitialSpec>,
    #[serde(default = "equivalence_tol")]
    pub tolerance: f64,
    #[serde(default = "mass_tol")]
    pub mass_tolerance: f64,
}

fn t_short() -> f64 {
    0.05
}

fn equivalence_tol() -> f64 {
    1e-6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneWaveParams {
    #[serde(default = "n256")]
    pub n_points: usize,
    #[serde(default = "half")]
    pub amplitude: f64,
    #[serde(default = "one_i64")]
    pub mode: i64,
    #[serde(default)]
    pub lambda: f64,
    #[serde(default = "one")]
    pub k: u32,
    pub dt: f64,
    #[serde(default = "t_tenth")]
    pub t_final: f64,
    #[serde(default)]
    pub integrator: Integrator,
    #[serde(default = "plane_tol")]
    pub tolerance: f64,
    /// Coarse steps for the convergence-order check, each half the previous.
    #[serde(default = "order_dts")]
    pub order_dts: Vec<f64>,
    #[serde(default = "eight_f")]
    pub min_order_gain: f64,
    /// Errors below this count as converged to roundoff.
    #[serde(default = "error_floor")]
    pub error_floor: f64,
    #[serde(default = "mass_tol")]
    pub mass_tolerance: f64,
}

fn n256() -> usize {
    256
}

fn half() -> f64 {
    0.5
}

fn t_tenth() -> f64 {
    0.1
}

fn plane_tol() -> f64 {
    1e-8
}

fn order_dts() -> Vec<f64> {
    vec![0.05, 0.025, 0.0125]
}

fn eight_f() -> f64 {
    8.0
}

fn error_floor() -> f64 {
    1e-12
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingScenarioParams {
    #[serde(default = "n512")]
    pub n_points: usize,
    #[serde(default = "scale8")]
    pub scale: u32,
    #[serde(default = "sigmas")]
    pub sigmas: Vec<u32>,
    #[serde(default = "dt_milli")]
    pub dt: f64,
    #[serde(default = "t_short")]
    pub t_final: f64,
    #[serde(default)]
    pub lambda: f64,
    #[serde(default = "two")]
    pub k: u32,
    #[serde(default = "scaling_h1")]
    pub h1_norm: f64,
    #[serde(default = "roundtrip_tol")]
    pub tolerance: f64,
}

fn n512() -> usize {
    512
}

fn scale8() -> u32 {
    8
}

fn sigmas() -> Vec<u32> {
    vec![2, 4]
}

fn dt_milli() -> f64 {
    1e-3
}

fn two() -> u32 {
    2
}

fn scaling_h1() -> f64 {
    0.3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowmapParams {
    #[serde(default = "n64")]
    pub n_points: usize,
    #[serde(default = "half")]
    pub r: f64,
    #[serde(default = "t_tenth")]
    pub t_final: f64,
    #[serde(default = "dt_milli")]
    pub dt: f64,
    #[serde(default = "epsilons")]
    pub epsilons: Vec<f64>,
    #[serde(default = "ten")]
    pub ensemble: usize,
    #[serde(default = "eight")]
    pub band: i64,
    #[serde(default)]
    pub lambda: f64,
    #[serde(default = "one")]
    pub k: u32,
    #[serde(default = "yes")]
    pub compare_gauged: bool,
    /// Allowed `max L / median L`.
    #[serde(default = "two_f")]
    pub spread_limit: f64,
    /// Allowed ratio between gauged and original `L(ε)`.
    #[serde(default = "four")]
    pub gauge_factor: f64,
}

fn n64() -> usize {
    64
}

fn epsilons() -> Vec<f64> {
    vec![1e-2, 1e-3, 1e-4]
}

fn ten() -> usize {
    10
}

fn two_f() -> f64 {
    2.0
}

fn four() -> f64 {
    4.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonanceParams {
    #[serde(default = "million")]
    pub n: usize,
    #[serde(default = "bound100")]
    pub bound: f64,
    #[serde(default = "settings")]
    pub settings: Vec<FrequencySetting>,
    #[serde(default = "resonance_tol")]
    pub tolerance: f64,
}

fn million() -> usize {
    1_000_000
}

fn bound100() -> f64 {
    100.0
}

fn settings() -> Vec<FrequencySetting> {
    vec![FrequencySetting::Integer, FrequencySetting::Real]
}

fn resonance_tol() -> f64 {
    1e-9
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DominationParams {
    #[serde(default = "hundred_k")]
    pub n: usize,
    /// Sampling boxes; the constant must be stable across them.
    #[serde(default = "bounds")]
    pub bounds: Vec<f64>,
    #[serde(default = "settings")]
    pub settings: Vec<FrequencySetting>,
    #[serde(default = "families")]
    pub families: Vec<Family>,
}

fn hundred_k() -> usize {
    100_000
}

fn bounds() -> Vec<f64> {
    vec![100.0, 200.0]
}

fn families() -> Vec<Family> {
    vec![Family::Plain, Family::Tilde]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrichartzParams {
    #[serde(default = "half")]
    pub b: f64,
    #[serde(default = "two_hundred")]
    pub ensemble: usize,
    #[serde(default = "strichartz_grids")]
    pub grids: Vec<SpaceTimeGrid>,
    #[serde(default = "spread_tol")]
    pub mode_spread_tolerance: f64,
}

fn two_hundred() -> usize {
    200
}

fn strichartz_grids() -> Vec<SpaceTimeGrid> {
    SpaceTimeGrid::strichartz_defaults().to_vec()
}

fn spread_tol() -> f64 {
    0.05
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrilinearParams {
    #[serde(default = "half")]
    pub s: f64,
    #[serde(default = "default_ts")]
    pub ts: Vec<f64>,
    #[serde(default = "hundred")]
    pub ensemble: usize,
    #[serde(default = "SpaceTimeGrid::multilinear_default")]
    pub grid: SpaceTimeGrid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultilinearParams {
    #[serde(default = "kinds")]
    pub kinds: Vec<Multilinear>,
    #[serde(default = "half")]
    pub s: f64,
    #[serde(default = "multi_delta")]
    pub delta: f64,
    #[serde(default = "default_ts")]
    pub ts: Vec<f64>,
    #[serde(default = "hundred")]
    pub ensemble: usize,
    #[serde(default = "SpaceTimeGrid::multilinear_default")]
    pub grid: SpaceTimeGrid,
}

fn kinds() -> Vec<Multilinear> {
    vec![
        Multilinear::Product { k: 0 },
        Multilinear::Product { k: 1 },
        Multilinear::Product { k: 2 },
        Multilinear::Quintic,
    ]
}

fn multi_delta() -> f64 {
    MULTILINEAR_DELTA
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmultParams {
    #[serde(default = "half")]
    pub s: f64,
    #[serde(default = "three_quarters")]
    pub s1: f64,
    #[serde(default = "three_quarters")]
    pub s2: f64,
    #[serde(default = "two_hundred")]
    pub ensemble: usize,
    #[serde(default = "smult_sizes")]
    pub sizes: Vec<usize>,
}

fn three_quarters() -> f64 {
    0.75
}

fn smult_sizes() -> Vec<usize> {
    vec![256, 512]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DyadicParams {
    #[serde(default = "deltas")]
    pub deltas: Vec<f64>,
    #[serde(default = "half")]
    pub s: f64,
    #[serde(default = "half")]
    pub b: f64,
    /// Constant of `N₁ ∼ N`.
    #[serde(default = "two_f")]
    pub c_sim: f64,
    /// Cutoff of the low-block sum.
    #[serde(default = "eight_u")]
    pub k: u64,
    #[serde(default = "hundred")]
    pub samples: usize,
    #[serde(default = "dyadic_grid")]
    pub grid: SpaceTimeGrid,
    #[serde(default = "thousand")]
    pub besov_samples: usize,
    #[serde(default = "n256")]
    pub besov_n: usize,
    #[serde(default)]
    pub xy_b1: f64,
    #[serde(default = "xy_b2")]
    pub xy_b2: f64,
}

fn deltas() -> Vec<f64> {
    vec![0.25, 1.0 / 16.0]
}

fn eight_u() -> u64 {
    8
}

fn dyadic_grid() -> SpaceTimeGrid {
    SpaceTimeGrid { n: 64, n_tau: 256, span: 4.0 }
}

fn thousand() -> usize {
    1000
}

fn xy_b2() -> f64 {
    0.6
}

/// Parameters of one scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ScenarioParams {
    Solve(SolveParams),
    GaugeRoundtrip(GaugeRoundtripParams),
    GaugeEquivalence(GaugeEquivalenceParams),
    PlaneWave(PlaneWaveParams),
    Scaling(ScalingScenarioParams),
    Flowmap(FlowmapParams),
    VerifyResonance(ResonanceParams),
    VerifyDomination(DominationParams),
    ProbeStrichartz(StrichartzParams),
    ProbeTrilinear(TrilinearParams),
    ProbeMultilinear(MultilinearParams),
    ProbeSmult(SmultParams),
    DyadicChecks(DyadicParams),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope<P> {
    name: String,
    #[serde(default)]
    scenario: Option<Scenario>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    out: Option<PathBuf>,
    params: P,
}

/// A validated experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub scenario: Scenario,
    pub seed: u64,
    pub out: PathBuf,
    pub params: ScenarioParams,
}

pub const DEFAULT_OUT: &str = "out";

fn parse_as<P: DeserializeOwned>(
    text: &str,
    wrap: fn(P) -> ScenarioParams,
) -> Result<(Envelope<()>, ScenarioParams), SchemaError> {
    let env: Envelope<P> = serde_json::from_str(text).map_err(|e| invalid(format!("invalid config: {e}")))?;
    let head = Envelope { name: env.name, scenario: env.scenario, seed: env.seed, out: env.out, params: () };
    Ok((head, wrap(env.params)))
}

fn positive(name: &str, v: f64) -> Result<(), SchemaError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("params.{name} must be positive, got {v}")))
    }
}

fn non_empty<T>(name: &str, v: &[T]) -> Result<(), SchemaError> {
    if v.is_empty() {
        Err(invalid(format!("params.{name} must not be empty")))
    } else {
        Ok(())
    }
}

fn check_grid(name: &str, g: &SpaceTimeGrid) -> Result<(), SchemaError> {
    SpaceTimeGrid::new(g.n, g.n_tau, g.span).map(|_| ()).map_err(|e| invalid(format!("params.{name}: {e}")))
}

impl ScenarioParams {
    /// Range checks that serde cannot express.
    pub fn validate(&self) -> Result<(), SchemaError> {
        match self {
            ScenarioParams::Solve(p) => {
                p.domain.build()?;
                positive("dt", p.dt)?;
                positive("t_final", p.t_final)?;
                if p.save_every == 0 {
                    return Err(invalid("params.save_every must be at least 1"));
                }
            }
            ScenarioParams::GaugeRoundtrip(p) => {
                p.domain.build()?;
                if p.samples == 0 || p.band < 0 {
                    return Err(invalid("params.samples must be positive and params.band non-negative"));
                }
            }
            ScenarioParams::GaugeEquivalence(p) => {
                p.domain.build()?;
                positive("dt", p.dt)?;
                positive("t_final", p.t_final)?;
            }
            ScenarioParams::PlaneWave(p) => {
                Domain::torus(p.n_points).map_err(|e| invalid(format!("params.n_points: {e}")))?;
                positive("dt", p.dt)?;
                positive("t_final", p.t_final)?;
                for &dt in &p.order_dts {
                    positive("order_dts", dt)?;
                }
            }
            ScenarioParams::Scaling(p) => {
                Domain::line(p.n_points, p.scale).map_err(|e| invalid(format!("params: {e}")))?;
                positive("dt", p.dt)?;
                positive("t_final", p.t_final)?;
                non_empty("sigmas", &p.sigmas)?;
                if p.sigmas.iter().any(|s| !s.is_power_of_two()) {
                    return Err(invalid("params.sigmas must be powers of two"));
                }
                if p.lambda != 0.0 && p.k != 2 {
                    return Err(invalid("params.lambda must be 0 unless k = 2 (only the quintic power is scale invariant)"));
                }
            }
            ScenarioParams::Flowmap(p) => {
                Domain::torus(p.n_points).map_err(|e| invalid(format!("params.n_points: {e}")))?;
                positive("r", p.r)?;
                positive("dt", p.dt)?;
                positive("t_final", p.t_final)?;
                if p.t_final > 1.0 {
                    return Err(invalid("params.t_final must not exceed 1"));
                }
                non_empty("epsilons", &p.epsilons)?;
                for &e in &p.epsilons {
                    positive("epsilons", e)?;
                }
                if p.ensemble == 0 {
                    return Err(invalid("params.ensemble must be positive"));
                }
            }
            ScenarioParams::VerifyResonance(p) => {
                positive("bound", p.bound)?;
                non_empty("settings", &p.settings)?;
            }
            ScenarioParams::VerifyDomination(p) => {
                if p.n < 10_000 {
                    return Err(invalid(format!("params.n must be at least 10000, got {}", p.n)));
                }
                non_empty("bounds", &p.bounds)?;
                for &b in &p.bounds {
                    positive("bounds", b)?;
                }
                non_empty("settings", &p.settings)?;
                non_empty("families", &p.families)?;
            }
            ScenarioParams::ProbeStrichartz(p) => {
                non_empty("grids", &p.grids)?;
                for g in &p.grids {
                    check_grid("grids", g)?;
                }
            }
            ScenarioParams::ProbeTrilinear(p) => {
                check_grid("grid", &p.grid)?;
                non_empty("ts", &p.ts)?;
            }
            ScenarioParams::ProbeMultilinear(p) => {
                check_grid("grid", &p.grid)?;
                non_empty("ts", &p.ts)?;
                non_empty("kinds", &p.kinds)?;
            }
            ScenarioParams::ProbeSmult(p) => {
                non_empty("sizes", &p.sizes)?;
                for &n in &p.sizes {
                    Domain::torus(n).map_err(|e| invalid(format!("params.sizes: {e}")))?;
                }
            }
            ScenarioParams::DyadicChecks(p) => {
                check_grid("grid", &p.grid)?;
                non_empty("deltas", &p.deltas)?;
                Domain::torus(p.besov_n).map_err(|e| invalid(format!("params.besov_n: {e}")))?;
            }
        }
        Ok(())
    }
}

impl ExperimentSpec {
    /// Parse and validate a config for `scenario`. A `scenario` key in the
    /// file, if present, must agree.
    pub fn parse(scenario: Scenario, text: &str) -> Result<Self, SchemaError> {
        let (head, params) = match scenario {
            Scenario::Solve => parse_as(text, ScenarioParams::Solve)?,
            Scenario::GaugeRoundtrip => parse_as(text, ScenarioParams::GaugeRoundtrip)?,
            Scenario::GaugeEquivalence => parse_as(text, ScenarioParams::GaugeEquivalence)?,
            Scenario::PlaneWave => parse_as(text, ScenarioParams::PlaneWave)?,
            Scenario::Scaling => parse_as(text, ScenarioParams::Scaling)?,
            Scenario::Flowmap => parse_as(text, ScenarioParams::Flowmap)?,
            Scenario::VerifyResonance => parse_as(text, ScenarioParams::VerifyResonance)?,
            Scenario::VerifyDomination => parse_as(text, ScenarioParams::VerifyDomination)?,
            Scenario::ProbeStrichartz => parse_as(text, ScenarioParams::ProbeStrichartz)?,
            Scenario::ProbeTrilinear => parse_as(text, ScenarioParams::ProbeTrilinear)?,
            Scenario::ProbeMultilinear => parse_as(text, ScenarioParams::ProbeMultilinear)?,
            Scenario::ProbeSmult => parse_as(text, ScenarioParams::ProbeSmult)?,
            Scenario::DyadicChecks => parse_as(text, ScenarioParams::DyadicChecks)?,
        };
        if let Some(s) = head.scenario {
            if s != scenario {
                return Err(invalid(format!("config is for scenario {s}, but {scenario} was requested")));
            }
        }
        if head.name.is_empty() || head.name.contains(['/', '\\']) {
            return Err(invalid(format!("name {:?} must be non-empty and contain no path separators", head.name)));
        }
        params.validate()?;
        Ok(Self {
            name: head.name,
            scenario,
            seed: head.seed.unwrap_or(0),
            out: head.out.unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
            params,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario_names_round_trip() {
        for &s in Scenario::ALL {
            assert_eq!(s.name().parse::<Scenario>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{}\"", s.name()));
        }
        assert_eq!(Scenario::ALL.len(), 13);
        assert!("nope".parse::<Scenario>().is_err());
    }

    #[test]
    fn defaults_fill_in() {
        let spec = ExperimentSpec::parse(Scenario::PlaneWave, r#"{"name": "pw", "seed": 42, "params": {"dt": 1e-4}}"#)
            .unwrap();
        assert_eq!(spec.seed, 42);
        match spec.params {
            ScenarioParams::PlaneWave(p) => assert_eq!((p.n_points, p.amplitude, p.t_final), (256, 0.5, 0.1)),
            _ => unreachable!(),
        }
    }

    #[test]
    fn missing_field_is_line_precise() {
        let text = "{\n  \"name\": \"pw\",\n  \"params\": {\n    \"amplitude\": 0.5\n  }\n}";
        let err = ExperimentSpec::parse(Scenario::PlaneWave, text).unwrap_err();
        assert!(err.0.contains("dt") && err.0.contains("line"), "{err}");
    }

    #[test]
    fn unknown_keys_and_ranges_are_rejected() {
        let typo = r#"{"name": "a", "params": {"dt": 1e-3, "t_fnal": 1}}"#;
        assert!(ExperimentSpec::parse(Scenario::PlaneWave, typo).unwrap_err().0.contains("t_fnal"));
        let eps0 = r#"{"name": "a", "params": {"epsilons": [0.0]}}"#;
        assert!(ExperimentSpec::parse(Scenario::Flowmap, eps0).is_err());
        let wrong = r#"{"name": "a", "scenario": "solve", "params": {"dt": 1e-3}}"#;
        assert!(ExperimentSpec::parse(Scenario::PlaneWave, wrong).is_err());
        let bad_domain = r#"{"name": "a", "params": {"domain": {"kind": "torus", "n_points": 100}}}"#;
        assert!(ExperimentSpec::parse(Scenario::GaugeRoundtrip, bad_domain).is_err());
    }

    #[test]
    fn tagged_variants_parse() {
        let text = r#"{"name": "m", "params": {"kinds": [{"kind": "product", "k": 1}, {"kind": "quintic"}]}}"#;
        match ExperimentSpec::parse(Scenario::ProbeMultilinear, text).unwrap().params {
            ScenarioParams::ProbeMultilinear(p) => {
                assert_eq!(p.kinds, vec![Multilinear::Product { k: 1 }, Multilinear::Quintic])
            }
            _ => unreachable!(),
        }
    }
}
