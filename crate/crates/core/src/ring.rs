//! Arithmetic over Z_{2^ℓ}.
//!
//! Values are stored in the low ℓ bits of a `u64`; every operation reduces
//! its result, so ring overflow is never an error. Signed interpretation is
//! two's complement.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// A ring element of Z_{2^64}. Narrower rings are handled through [`Ring`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RingElement(pub u64);

impl RingElement {
    pub const ZERO: RingElement = RingElement(0);
    pub const ONE: RingElement = RingElement(1);

    pub fn as_signed(self) -> i64 {
        self.0 as i64
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::ops::Add for RingElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        ring_add(self, rhs)
    }
}

impl std::ops::Sub for RingElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        ring_sub(self, rhs)
    }
}

impl std::ops::Mul for RingElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        ring_mul(self, rhs)
    }
}

impl std::ops::Neg for RingElement {
    type Output = Self;
    fn neg(self) -> Self {
        RingElement(self.0.wrapping_neg())
    }
}

pub fn ring_add(a: RingElement, b: RingElement) -> RingElement {
    RingElement(a.0.wrapping_add(b.0))
}

pub fn ring_sub(a: RingElement, b: RingElement) -> RingElement {
    RingElement(a.0.wrapping_sub(b.0))
}

pub fn ring_mul(a: RingElement, b: RingElement) -> RingElement {
    RingElement(a.0.wrapping_mul(b.0))
}

/// Ring width descriptor. ℓ is fixed per session.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Ring {
    bits: u32,
}

impl Default for Ring {
    fn default() -> Self {
        Ring::R64
    }
}

impl TryFrom<u32> for Ring {
    type Error = Error;
    fn try_from(bits: u32) -> Result<Self> {
        Ring::new(bits)
    }
}

impl From<Ring> for u32 {
    fn from(r: Ring) -> u32 {
        r.bits
    }
}

impl Ring {
    pub const R64: Ring = Ring { bits: 64 };

    /// Supported widths are 16, 32 and 64; each serializes to whole bytes.
    pub fn new(bits: u32) -> Result<Self> {
        match bits {
            16 | 32 | 64 => Ok(Ring { bits }),
            _ => Err(Error::Config(format!("unsupported ring width {bits}"))),
        }
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn bytes(self) -> usize {
        (self.bits / 8) as usize
    }

    #[inline]
    pub fn mask(self) -> u64 {
        if self.bits == 64 {
            u64::MAX
        } else {
            (1u64 << self.bits) - 1
        }
    }

    #[inline]
    pub fn reduce(self, x: u64) -> u64 {
        x & self.mask()
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        a.wrapping_add(b) & self.mask()
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        a.wrapping_sub(b) & self.mask()
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a.wrapping_mul(b) & self.mask()
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        a.wrapping_neg() & self.mask()
    }

    #[inline]
    pub fn from_signed(self, v: i64) -> u64 {
        (v as u64) & self.mask()
    }

    /// Two's-complement interpretation of a reduced value.
    #[inline]
    pub fn to_signed(self, x: u64) -> i64 {
        let shift = 64 - self.bits;
        ((x << shift) as i64) >> shift
    }

    #[inline]
    pub fn msb(self, x: u64) -> u64 {
        (x >> (self.bits - 1)) & 1
    }

    /// Little-endian, ℓ/8 bytes per element.
    pub fn encode_elems(self, elems: &[u64], out: &mut Vec<u8>) {
        let w = self.bytes();
        out.reserve(elems.len() * w);
        for &e in elems {
            out.extend_from_slice(&e.to_le_bytes()[..w]);
        }
    }

    pub fn decode_elems(self, bytes: &[u8]) -> Result<Vec<u64>> {
        let w = self.bytes();
        if !bytes.len().is_multiple_of(w) {
            return Err(Error::Desync(format!(
                "payload of {} bytes is not a multiple of {w}",
                bytes.len()
            )));
        }
        Ok(bytes
            .chunks_exact(w)
            .map(|c| {
                let mut buf = [0u8; 8];
                buf[..w].copy_from_slice(c);
                u64::from_le_bytes(buf)
            })
            .collect())
    }
}
