//! Fixed-point encoding of signed reals into the ring.
//!
//! A real `r` is stored as `round(r · 2^f)` in two's complement. Rounding is
//! to nearest with ties toward zero so that every party and the plaintext
//! reference produce identical raw values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Ring, RingElement};

pub const DEFAULT_FRAC_BITS: u32 = 18;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointValue {
    pub raw: RingElement,
    pub frac_bits: u32,
}

/// Encoder bound to a ring width and a fraction-bit count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub ring: Ring,
    pub frac_bits: u32,
}

impl Default for FixedPoint {
    fn default() -> Self {
        FixedPoint {
            ring: Ring::R64,
            frac_bits: DEFAULT_FRAC_BITS,
        }
    }
}

/// Round to nearest, ties toward zero.
pub fn round_ties_toward_zero(s: f64) -> f64 {
    let fl = s.floor();
    let frac = s - fl;
    if frac > 0.5 {
        fl + 1.0
    } else if frac < 0.5 || s > 0.0 {
        fl
    } else {
        fl + 1.0
    }
}

impl FixedPoint {
    pub fn new(ring: Ring, frac_bits: u32) -> Result<Self> {
        if frac_bits == 0 || frac_bits + 2 >= ring.bits() {
            return Err(Error::Config(format!(
                "{frac_bits} fraction bits do not fit a {}-bit ring",
                ring.bits()
            )));
        }
        Ok(FixedPoint { ring, frac_bits })
    }

    /// Magnitude bound 2^(ℓ−1−f) of representable reals.
    pub fn bound(&self) -> f64 {
        2f64.powi((self.ring.bits() - 1 - self.frac_bits) as i32)
    }

    pub fn scale(&self) -> f64 {
        2f64.powi(self.frac_bits as i32)
    }

    pub fn encode(&self, r: f64) -> Result<u64> {
        self.encode_at(r, self.frac_bits)
    }

    /// Encode at an explicit scale (used for products that carry 2f bits).
    pub fn encode_at(&self, r: f64, frac_bits: u32) -> Result<u64> {
        let bound = 2f64.powi(self.ring.bits() as i32 - 1 - frac_bits as i32);
        if !r.is_finite() || r.abs() >= bound {
            return Err(Error::Range { value: r, bound });
        }
        let s = round_ties_toward_zero(r * 2f64.powi(frac_bits as i32));
        Ok(self.ring.from_signed(s as i64))
    }

    pub fn decode(&self, raw: u64) -> f64 {
        self.decode_at(raw, self.frac_bits)
    }

    pub fn decode_at(&self, raw: u64, frac_bits: u32) -> f64 {
        self.ring.to_signed(self.ring.reduce(raw)) as f64 / 2f64.powi(frac_bits as i32)
    }

    pub fn encode_all(&self, values: &[f64]) -> Result<Vec<u64>> {
        values.iter().map(|&v| self.encode(v)).collect()
    }

    pub fn decode_all(&self, raw: &[u64]) -> Vec<f64> {
        raw.iter().map(|&v| self.decode(v)).collect()
    }
}

/// Encode at the default 64-bit ring.
pub fn encode_fixed(r: f64, frac_bits: u32) -> Result<FixedPointValue> {
    let codec = FixedPoint {
        ring: Ring::R64,
        frac_bits,
    };
    Ok(FixedPointValue {
        raw: RingElement(codec.encode(r)?),
        frac_bits,
    })
}

pub fn decode_fixed(x: FixedPointValue) -> f64 {
    x.raw.as_signed() as f64 / 2f64.powi(x.frac_bits as i32)
}

/// Deterministic arithmetic shift by `bits`, the plaintext counterpart of share
/// truncation.
pub fn truncate_raw(ring: Ring, raw: u64, bits: u32) -> u64 {
    ring.from_signed(ring.to_signed(raw) >> bits)
}
