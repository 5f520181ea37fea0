//! Random test fields for the probes.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::frequency::{bracket, Domain, ModulationLattice, Sign, SpaceTimeField, SpectralField};

fn unit_disk(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if z.norm_sqr() <= 1.0 && z.norm_sqr() > 0.0 {
            return z;
        }
    }
}

/// Modes `|k| ≤ band` with amplitudes `⟨k⟩^{−decay}` times a random point of
/// the unit disk.
pub fn random_spectral(domain: Domain, band: i64, decay: f64, rng: &mut ChaCha8Rng) -> SpectralField {
    let mut f = SpectralField::zeros(domain);
    for k in -band..=band {
        if let Some(j) = domain.slot(k) {
            f.coeffs[j] = unit_disk(rng) * bracket(k as f64).powf(-decay);
        }
    }
    f
}

/// Random field supported on `|k| ≤ band` and `|τ ± ξ²| ≤ modulation`
/// (`+` for [`Sign::Plus`]), so it is concentrated near the free
/// characteristic of that sign.
pub fn random_spacetime(
    domain: Domain,
    lattice: ModulationLattice,
    t_start: f64,
    band: i64,
    modulation: f64,
    sign: Sign,
    rng: &mut ChaCha8Rng,
) -> SpaceTimeField {
    let mut u = SpaceTimeField::zeros(domain, lattice);
    u.t_start = t_start;
    let s = sign.value();
    for k in -band..=band {
        let Some(j) = domain.slot(k) else { continue };
        let xi = domain.xi(j);
        for l in 0..lattice.n_tau {
            if (lattice.tau(l) + s * xi * xi).abs() <= modulation {
                let idx = u.index(j, l);
                u.coeffs[idx] = unit_disk(rng) / bracket(xi);
            }
        }
    }
    u
}
