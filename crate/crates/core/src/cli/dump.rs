//! Binary field dumps: one JSON header line, then the raw coefficients.
//!
//! The payload holds `n_points` little-endian `f64` pairs `(re, im)` in FFT
//! order, so it is exactly `16·n_points` bytes. The header records a CRC32
//! of the payload.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frequency::{Domain, DomainKind, SpectralField};

pub const DTYPE: &str = "c128-le";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DumpHeader {
    pub domain: DomainKind,
    pub n_points: usize,
    pub period: f64,
    pub time: f64,
    pub dtype: String,
    pub crc32: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldDump {
    pub header: DumpHeader,
    pub payload: Vec<u8>,
}

fn encode(coeffs: &[Complex64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 * coeffs.len());
    for c in coeffs {
        out.extend_from_slice(&c.re.to_le_bytes());
        out.extend_from_slice(&c.im.to_le_bytes());
    }
    out
}

impl FieldDump {
    pub fn from_spectral(f: &SpectralField, time: f64) -> Self {
        let payload = encode(&f.coeffs);
        let header = DumpHeader {
            domain: f.domain.kind,
            n_points: f.domain.n_points,
            period: f.domain.period,
            time,
            dtype: DTYPE.to_string(),
            crc32: crc32fast::hash(&payload),
        };
        Self { header, payload }
    }

    pub fn domain(&self) -> Result<Domain> {
        let h = &self.header;
        let d = match h.domain {
            DomainKind::Torus => Domain::torus(h.n_points)?,
            DomainKind::LineApprox => {
                let scale = (h.period / (2.0 * std::f64::consts::PI)).round();
                if !(scale >= 1.0 && scale <= u32::MAX as f64) {
                    return Err(Error::Dump(format!("period {} is not a multiple of 2π", h.period)));
                }
                Domain::line(h.n_points, scale as u32)?
            }
        };
        if (d.period - h.period).abs() > 1e-12 * d.period {
            return Err(Error::Dump(format!("period {} does not match the {:?} grid", h.period, h.domain)));
        }
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        let h = &self.header;
        if h.dtype != DTYPE {
            return Err(Error::Dump(format!("unsupported dtype {:?}", h.dtype)));
        }
        if self.payload.len() != 16 * h.n_points {
            return Err(Error::Dump(format!("payload has {} bytes, expected {}", self.payload.len(), 16 * h.n_points)));
        }
        let crc = crc32fast::hash(&self.payload);
        if crc != h.crc32 {
            return Err(Error::Dump(format!("checksum mismatch: header {:08x}, payload {crc:08x}", h.crc32)));
        }
        Ok(())
    }

    pub fn to_spectral(&self) -> Result<SpectralField> {
        self.validate()?;
        let coeffs = self
            .payload
            .chunks_exact(16)
            .map(|b| {
                let re = f64::from_le_bytes(b[..8].try_into().expect("8 bytes"));
                let im = f64::from_le_bytes(b[8..].try_into().expect("8 bytes"));
                Complex64::new(re, im)
            })
            .collect();
        SpectralField::new(self.domain()?, coeffs)
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut out = serde_json::to_vec(&self.header)?;
        out.push(b'\n');
        out.extend_from_slice(&self.payload);
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let nl = bytes.iter().position(|&b| b == b'\n').ok_or_else(|| Error::Dump("missing header line".into()))?;
        let header: DumpHeader =
            serde_json::from_slice(&bytes[..nl]).map_err(|e| Error::Dump(format!("bad header: {e}")))?;
        let dump = Self { header, payload: bytes[nl + 1..].to_vec() };
        dump.validate()?;
        dump.domain()?;
        Ok(dump)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_bytes()?)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frequency::GridFunction;

    fn sample() -> SpectralField {
        let d = Domain::line(32, 4).unwrap();
        GridFunction::from_fn(d, |x| Complex64::new((-x * x).exp(), 0.1 * x)).to_spectral()
    }

    #[test]
    fn round_trip_is_bit_identical() {
        let f = sample();
        let dump = FieldDump::from_spectral(&f, 0.25);
        let bytes = dump.to_bytes().unwrap();
        let back = FieldDump::from_bytes(&bytes).unwrap();
        assert_eq!(back, dump);
        assert_eq!(back.payload.len(), 16 * 32);
        let g = back.to_spectral().unwrap();
        assert!(g.coeffs.iter().zip(&f.coeffs).all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()));
        assert_eq!(g.domain, f.domain);
    }

    #[test]
    fn corruption_is_detected() {
        let mut bytes = FieldDump::from_spectral(&sample(), 0.0).to_bytes().unwrap();
        let last = bytes.len() - 1;
        bytes[last] ^= 1;
        assert!(matches!(FieldDump::from_bytes(&bytes), Err(Error::Dump(_))));
        let bytes = FieldDump::from_spectral(&sample(), 0.0).to_bytes().unwrap();
        assert!(FieldDump::from_bytes(&bytes[..bytes.len() - 16]).is_err());
        assert!(FieldDump::from_bytes(b"no header").is_err());
    }
}
