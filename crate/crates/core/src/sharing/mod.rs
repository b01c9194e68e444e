//! Replicated 3-of-3 additive sharing.
//!
//! A secret x is split as x = x1 + x2 + x3 (mod 2^ℓ). Party P1 holds
//! (x1, x2), P2 holds (x2, x3) and P3 holds (x3, x1): party p holds the pair
//! (x_p, x_{next(p)}), so any two parties see all three components.

pub mod prf;
pub mod protocol;

use rand::RngCore;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{Ring, RingElement};

pub use prf::{PrfKey, PrfStream, ZeroShareContext};
pub use protocol::{announce, deal, deal_matrix, open, reveal_bits_to, reveal_to};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PartyId {
    P1,
    P2,
    P3,
}

impl PartyId {
    pub const ALL: [PartyId; 3] = [PartyId::P1, PartyId::P2, PartyId::P3];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> PartyId {
        PartyId::ALL[i % 3]
    }

    pub fn next(self) -> PartyId {
        PartyId::from_index(self.index() + 1)
    }

    pub fn prev(self) -> PartyId {
        PartyId::from_index(self.index() + 2)
    }
}

impl fmt::Display for PartyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.index() + 1)
    }
}

impl std::str::FromStr for PartyId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "P1" | "1" => Ok(PartyId::P1),
            "P2" | "2" => Ok(PartyId::P2),
            "P3" | "3" => Ok(PartyId::P3),
            other => Err(Error::Config(format!("unknown party {other:?}"))),
        }
    }
}

/// One party's view of a single secret.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplicatedShare {
    pub first: RingElement,
    pub second: RingElement,
    pub owner: PartyId,
}

/// Deal a 64-bit secret: x1, x2 uniform, x3 = secret − x1 − x2.
pub fn share<R: RngCore>(secret: RingElement, rng: &mut R) -> [ReplicatedShare; 3] {
    let x1 = RingElement(rng.next_u64());
    let x2 = RingElement(rng.next_u64());
    let comps = [x1, x2, secret - x1 - x2];
    PartyId::ALL.map(|p| ReplicatedShare {
        first: comps[p.index()],
        second: comps[p.next().index()],
        owner: p,
    })
}

/// Reconstruct from the shares of at least two distinct parties, checking
/// that overlapping replicated components agree.
pub fn reconstruct(shares: &[ReplicatedShare]) -> Result<RingElement> {
    let mut comps: [Option<RingElement>; 3] = [None; 3];
    for s in shares {
        for (idx, v) in [(s.owner.index(), s.first), (s.owner.next().index(), s.second)] {
            match comps[idx] {
                Some(prev) if prev != v => {
                    return Err(Error::Consistency(format!(
                        "component x{} differs between parties",
                        idx + 1
                    )))
                }
                _ => comps[idx] = Some(v),
            }
        }
    }
    let mut sum = RingElement::ZERO;
    for (i, c) in comps.iter().enumerate() {
        sum = sum + c.ok_or_else(|| Error::Consistency(format!("component x{} missing", i + 1)))?;
    }
    Ok(sum)
}

/// A party's share of a vector of secrets (arithmetic, mod 2^ℓ).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecretVector {
    pub owner: PartyId,
    pub first: Vec<u64>,
    pub second: Vec<u64>,
    /// Fixed-point scale of the shared values; 0 for integers.
    pub frac_bits: u32,
}

impl SecretVector {
    pub fn zeros(owner: PartyId, n: usize, frac_bits: u32) -> Self {
        SecretVector {
            owner,
            first: vec![0; n],
            second: vec![0; n],
            frac_bits,
        }
    }

    /// Shares of public values: component x1 carries the value.
    pub fn from_public(owner: PartyId, values: &[u64], frac_bits: u32) -> Self {
        let mut v = SecretVector::zeros(owner, values.len(), frac_bits);
        v.add_public_in_place(values, Ring::R64);
        v
    }

    /// Shares where component `index` carries `values` and the others are
    /// zero. Every holder of that component must pass the same values.
    pub fn from_component(owner: PartyId, index: usize, values: &[u64], frac_bits: u32) -> Self {
        let mut v = SecretVector::zeros(owner, values.len(), frac_bits);
        if owner.index() == index {
            v.first.copy_from_slice(values);
        }
        if owner.next().index() == index {
            v.second.copy_from_slice(values);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.first.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first.is_empty()
    }

    fn check_same(&self, other: &SecretVector) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::Shape(format!(
                "vector lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        if self.frac_bits != other.frac_bits {
            return Err(Error::Shape(format!(
                "fraction bits {} and {}",
                self.frac_bits, other.frac_bits
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &SecretVector, ring: Ring) -> Result<SecretVector> {
        self.check_same(other)?;
        Ok(self.zip_with(other, |a, b| ring.add(a, b)))
    }

    pub fn sub(&self, other: &SecretVector, ring: Ring) -> Result<SecretVector> {
        self.check_same(other)?;
        Ok(self.zip_with(other, |a, b| ring.sub(a, b)))
    }

    pub fn neg(&self, ring: Ring) -> SecretVector {
        self.map(|a| ring.neg(a))
    }

    /// Multiply by a public ring constant; the scale is unchanged.
    pub fn scalar_mul(&self, c: u64, ring: Ring) -> SecretVector {
        self.map(|a| ring.mul(a, c))
    }

    /// Elementwise product with public ring values.
    pub fn mul_public(&self, values: &[u64], ring: Ring) -> Result<SecretVector> {
        if values.len() != self.len() {
            return Err(Error::Shape(format!("{} public values for {} shares", values.len(), self.len())));
        }
        let mut out = self.clone();
        for (i, &c) in values.iter().enumerate() {
            out.first[i] = ring.mul(out.first[i], c);
            out.second[i] = ring.mul(out.second[i], c);
        }
        Ok(out)
    }

    pub fn add_public_in_place(&mut self, values: &[u64], ring: Ring) {
        match self.owner {
            PartyId::P1 => {
                for (a, &v) in self.first.iter_mut().zip(values) {
                    *a = ring.add(*a, v);
                }
            }
            PartyId::P3 => {
                for (a, &v) in self.second.iter_mut().zip(values) {
                    *a = ring.add(*a, v);
                }
            }
            PartyId::P2 => {}
        }
    }

    pub fn add_public(&self, values: &[u64], ring: Ring) -> Result<SecretVector> {
        if values.len() != self.len() {
            return Err(Error::Shape(format!("{} public values for {} shares", values.len(), self.len())));
        }
        let mut out = self.clone();
        out.add_public_in_place(values, ring);
        Ok(out)
    }

    /// Sum of all elements as a length-1 vector.
    pub fn sum(&self, ring: Ring) -> SecretVector {
        let f = self.first.iter().fold(0, |acc, &v| ring.add(acc, v));
        let s = self.second.iter().fold(0, |acc, &v| ring.add(acc, v));
        SecretVector {
            owner: self.owner,
            first: vec![f],
            second: vec![s],
            frac_bits: self.frac_bits,
        }
    }

    /// Σ c_i · x_i for public coefficients.
    pub fn weighted_sum(&self, coeffs: &[u64], ring: Ring) -> Result<SecretVector> {
        Ok(self.mul_public(coeffs, ring)?.sum(ring))
    }

    pub fn gather(&self, idx: &[usize]) -> SecretVector {
        SecretVector {
            owner: self.owner,
            first: idx.iter().map(|&i| self.first[i]).collect(),
            second: idx.iter().map(|&i| self.second[i]).collect(),
            frac_bits: self.frac_bits,
        }
    }

    pub fn concat(parts: &[&SecretVector]) -> Result<SecretVector> {
        let head = parts
            .first()
            .ok_or_else(|| Error::Shape("concat of nothing".into()))?;
        let mut out = SecretVector::zeros(head.owner, 0, head.frac_bits);
        for p in parts {
            if p.frac_bits != head.frac_bits {
                return Err(Error::Shape("concat of mixed scales".into()));
            }
            out.first.extend_from_slice(&p.first);
            out.second.extend_from_slice(&p.second);
        }
        Ok(out)
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> SecretVector {
        SecretVector {
            owner: self.owner,
            first: self.first[range.clone()].to_vec(),
            second: self.second[range].to_vec(),
            frac_bits: self.frac_bits,
        }
    }

    pub fn with_frac_bits(mut self, frac_bits: u32) -> SecretVector {
        self.frac_bits = frac_bits;
        self
    }

    pub fn share_at(&self, i: usize) -> ReplicatedShare {
        ReplicatedShare {
            first: RingElement(self.first[i]),
            second: RingElement(self.second[i]),
            owner: self.owner,
        }
    }

    fn map(&self, f: impl Fn(u64) -> u64) -> SecretVector {
        SecretVector {
            owner: self.owner,
            first: self.first.iter().map(|&a| f(a)).collect(),
            second: self.second.iter().map(|&a| f(a)).collect(),
            frac_bits: self.frac_bits,
        }
    }

    fn zip_with(&self, other: &SecretVector, f: impl Fn(u64, u64) -> u64) -> SecretVector {
        SecretVector {
            owner: self.owner,
            first: self.first.iter().zip(&other.first).map(|(&a, &b)| f(a, b)).collect(),
            second: self.second.iter().zip(&other.second).map(|(&a, &b)| f(a, b)).collect(),
            frac_bits: self.frac_bits,
        }
    }
}

/// Row-major matrix of shares.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecretMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: SecretVector,
}

impl SecretMatrix {
    pub fn new(rows: usize, cols: usize, data: SecretVector) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix from {} elements",
                data.len()
            )));
        }
        Ok(SecretMatrix { rows, cols, data })
    }

    pub fn frac_bits(&self) -> u32 {
        self.data.frac_bits
    }

    pub fn owner(&self) -> PartyId {
        self.data.owner
    }

    pub fn row(&self, i: usize) -> SecretVector {
        self.data.slice(i * self.cols..(i + 1) * self.cols)
    }

    pub fn select_rows(&self, rows: &[usize]) -> SecretMatrix {
        let idx: Vec<usize> = rows
            .iter()
            .flat_map(|&r| (r * self.cols)..((r + 1) * self.cols))
            .collect();
        SecretMatrix {
            rows: rows.len(),
            cols: self.cols,
            data: self.data.gather(&idx),
        }
    }
}

/// XOR-shared bit words. Each word packs up to ℓ bits; the replication layout
/// matches [`SecretVector`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolVector {
    pub owner: PartyId,
    pub first: Vec<u64>,
    pub second: Vec<u64>,
}

impl BoolVector {
    pub fn len(&self) -> usize {
        self.first.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first.is_empty()
    }

    /// Component `index` carries `words`, the others are zero.
    pub fn from_component(owner: PartyId, index: usize, words: &[u64]) -> Self {
        let zeros = vec![0; words.len()];
        BoolVector {
            owner,
            first: if owner.index() == index { words.to_vec() } else { zeros.clone() },
            second: if owner.next().index() == index { words.to_vec() } else { zeros },
        }
    }

    pub fn xor(&self, other: &BoolVector) -> BoolVector {
        BoolVector {
            owner: self.owner,
            first: self.first.iter().zip(&other.first).map(|(a, b)| a ^ b).collect(),
            second: self.second.iter().zip(&other.second).map(|(a, b)| a ^ b).collect(),
        }
    }

    pub fn xor_public(&self, words: &[u64]) -> BoolVector {
        let mut out = self.clone();
        match self.owner {
            PartyId::P1 => out.first.iter_mut().zip(words).for_each(|(a, w)| *a ^= w),
            PartyId::P3 => out.second.iter_mut().zip(words).for_each(|(a, w)| *a ^= w),
            PartyId::P2 => {}
        }
        out
    }

    pub fn map(&self, f: impl Fn(u64) -> u64) -> BoolVector {
        BoolVector {
            owner: self.owner,
            first: self.first.iter().map(|&a| f(a)).collect(),
            second: self.second.iter().map(|&a| f(a)).collect(),
        }
    }

    pub fn gather(&self, idx: &[usize]) -> BoolVector {
        BoolVector {
            owner: self.owner,
            first: idx.iter().map(|&i| self.first[i]).collect(),
            second: idx.iter().map(|&i| self.second[i]).collect(),
        }
    }

    pub fn concat(a: &BoolVector, b: &BoolVector) -> BoolVector {
        BoolVector {
            owner: a.owner,
            first: a.first.iter().chain(&b.first).copied().collect(),
            second: a.second.iter().chain(&b.second).copied().collect(),
        }
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> BoolVector {
        BoolVector {
            owner: self.owner,
            first: self.first[range.clone()].to_vec(),
            second: self.second[range].to_vec(),
        }
    }
}

/// Split plaintext values into the three parties' vector shares.
pub fn share_vector<R: RngCore>(
    ring: Ring,
    values: &[u64],
    frac_bits: u32,
    rng: &mut R,
) -> [SecretVector; 3] {
    let n = values.len();
    let x1: Vec<u64> = (0..n).map(|_| ring.reduce(rng.next_u64())).collect();
    let x2: Vec<u64> = (0..n).map(|_| ring.reduce(rng.next_u64())).collect();
    let x3: Vec<u64> = (0..n)
        .map(|i| ring.sub(ring.sub(values[i], x1[i]), x2[i]))
        .collect();
    let comps = [x1, x2, x3];
    PartyId::ALL.map(|p| SecretVector {
        owner: p,
        first: comps[p.index()].clone(),
        second: comps[p.next().index()].clone(),
        frac_bits,
    })
}

/// Reconstruct vectors from two or three parties' shares, checking overlaps.
pub fn reconstruct_vector(ring: Ring, shares: &[&SecretVector]) -> Result<Vec<u64>> {
    let n = shares.first().map(|s| s.len()).unwrap_or(0);
    if shares.iter().any(|s| s.len() != n) {
        return Err(Error::Shape("share vectors of different lengths".into()));
    }
    (0..n)
        .map(|i| {
            let parts: Vec<ReplicatedShare> = shares.iter().map(|s| s.share_at(i)).collect();
            reconstruct(&parts).map(|v| ring.reduce(v.0))
        })
        .collect()
}

pub fn reconstruct_bools(shares: &[&BoolVector]) -> Result<Vec<u64>> {
    let n = shares.first().map(|s| s.len()).unwrap_or(0);
    (0..n)
        .map(|i| {
            let mut comps: [Option<u64>; 3] = [None; 3];
            for s in shares {
                for (idx, v) in [(s.owner.index(), s.first[i]), (s.owner.next().index(), s.second[i])] {
                    match comps[idx] {
                        Some(prev) if prev != v => {
                            return Err(Error::Consistency(format!("bool component x{}", idx + 1)))
                        }
                        _ => comps[idx] = Some(v),
                    }
                }
            }
            comps.iter().try_fold(0u64, |acc, c| {
                c.map(|c| acc ^ c)
                    .ok_or_else(|| Error::Consistency("bool component missing".into()))
            })
        })
        .collect()
}
