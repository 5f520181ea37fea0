//! Numerical checks of the estimates behind the well-posedness argument.
//!
//! Exact identities (the resonance relation, indicator partitions) are
//! checked pointwise. Inequalities with unspecified constants are probed by
//! sampling: each probe reports an empirical sup constant and, where a
//! refinement is part of the protocol, whether that constant is stable
//! within a factor of two.
//!
//! All sampling is deterministic given the seed: work is split into fixed
//! chunks, each drawing from its own ChaCha8 stream, so results do not
//! depend on the number of worker threads.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub mod fields;
pub mod multiplier;
pub mod probes;

pub use multiplier::{
    domination_ratio, domination_scan, eval_multiplier, resonance_check, resonance_scan, sample_point, CaseLabel,
    Family, FrequencySetting, MultiplierKind, MultiplierPoint, MultiplierTag, Region, ResonanceResidual,
};
pub use probes::{
    besov_sobolev_check, dyadic_sum_check, multilinear_probe, multilinear_ratios, smult_ratio, sobolev_mult_probe,
    strichartz_probe, strichartz_ratio, trilinear_probe, trilinear_ratios, xy_embedding_check, Multilinear,
    SpaceTimeGrid, MULTILINEAR_DELTA,
};

pub(crate) const CHUNK: usize = 1024;

/// RNG for chunk or ensemble member `index` of a run seeded with `seed`.
pub fn chunk_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Factor-of-two stability verdict for constants measured at several
/// resolutions.
pub fn within_factor_two(values: &[f64]) -> bool {
    let max = values.iter().cloned().fold(f64::MIN, f64::max);
    let min = values.iter().cloned().fold(f64::MAX, f64::min);
    values.iter().all(|v| v.is_finite()) && (max == 0.0 || (min > 0.0 && max <= 2.0 * min))
}

/// Outcome of one probe or scan.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ProbeReport {
    pub probe: String,
    pub samples: usize,
    /// Empirical sup ratio or constant.
    pub constant: f64,
    /// Refinement-stability verdict, when the protocol includes a refinement.
    pub stable: Option<bool>,
    pub params: BTreeMap<String, f64>,
    pub notes: BTreeMap<String, String>,
    pub details: BTreeMap<String, f64>,
    /// Named `(x, y)` series, e.g. sup ratio against `T`.
    pub series: BTreeMap<String, Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmax: Option<MultiplierPoint>,
}

impl ProbeReport {
    pub fn new(probe: &str, samples: usize, constant: f64) -> Self {
        Self { probe: probe.to_string(), samples, constant, ..Self::default() }
    }

    pub fn param(&mut self, key: &str, value: f64) {
        self.params.insert(key.to_string(), value);
    }

    pub fn note(&mut self, key: &str, value: impl Into<String>) {
        self.notes.insert(key.to_string(), value.into());
    }

    pub fn detail(&mut self, key: &str, value: f64) {
        self.details.insert(key.to_string(), value);
    }

    pub fn push(&mut self, series: &str, x: f64, y: f64) {
        self.series.entry(series.to_string()).or_default().push([x, y]);
    }

    /// `y` values of a series in insertion order.
    pub fn values(&self, series: &str) -> Vec<f64> {
        self.series.get(series).map(|s| s.iter().map(|p| p[1]).collect()).unwrap_or_default()
    }
}

/// True when `values` never increases by more than rounding.
pub fn non_increasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_independent_of_order() {
        let a: Vec<u64> = (0..4).map(|i| chunk_rng(9, i).gen()).collect();
        let b: Vec<u64> = (0..4).rev().map(|i| chunk_rng(9, i).gen()).collect();
        assert_eq!(a, b.into_iter().rev().collect::<Vec<_>>());
        assert_ne!(a[0], a[1]);
    }

    #[test]
    fn verdict_helpers() {
        assert!(within_factor_two(&[1.0, 1.9]));
        assert!(!within_factor_two(&[1.0, 2.1]));
        assert!(!within_factor_two(&[1.0, f64::INFINITY]));
        assert!(non_increasing(&[3.0, 2.0, 2.0, 1.0]));
        assert!(!non_increasing(&[1.0, 1.5]));
    }
}
