//! Comparison via boolean MSB extraction, and bit conversion.
//!
//! Each arithmetic component x_j is already a (trivial) boolean sharing, so
//! x1 + x2 + x3 is computed by a boolean circuit: one carry-save layer turns
//! three addends into two, and a Kogge–Stone prefix network yields the carry
//! into the top bit. Bit results are returned in bit 0 of each word.

use crate::error::{Error, Result};
use crate::kernels::and_cross;
use crate::ops::mul;
use crate::runtime::Party;
use crate::sharing::{deal, BoolVector, PartyId, SecretVector};

/// Replicated AND of two boolean sharings: one round, one word per element
/// sent by each party.
pub fn and(p: &mut Party, a: &BoolVector, b: &BoolVector) -> Result<BoolVector> {
    if a.len() != b.len() {
        return Err(Error::Shape(format!("AND of {} and {} words", a.len(), b.len())));
    }
    let ring = p.ring();
    let mut z = and_cross(&a.first, &a.second, &b.first, &b.second);
    let alpha = p.bool_zero_shares(z.len());
    for (w, m) in z.iter_mut().zip(alpha) {
        *w = ring.reduce(*w ^ m);
    }
    let theirs = if z.is_empty() { Vec::new() } else { p.reshare(&z)? };
    Ok(BoolVector {
        owner: a.owner,
        first: z,
        second: theirs,
    })
}

/// Flip bit 0.
pub fn not(x: &BoolVector) -> BoolVector {
    x.xor_public(&vec![1; x.len()])
}

fn component(x: &SecretVector, j: usize) -> BoolVector {
    let owner = x.owner;
    let words = if owner.index() == j {
        &x.first
    } else if owner.next().index() == j {
        &x.second
    } else {
        return BoolVector::from_component(owner, j, &vec![0; x.len()]);
    };
    BoolVector::from_component(owner, j, words)
}

/// Boolean sharing of the most significant bit of each element.
pub fn msb(p: &mut Party, x: &SecretVector) -> Result<BoolVector> {
    let ring = p.ring();
    let bits = ring.bits();
    let mask = ring.mask();
    let n = x.len();
    if n == 0 {
        return Ok(BoolVector::from_component(x.owner, 0, &[]));
    }
    let (a, b, c) = (component(x, 0), component(x, 1), component(x, 2));

    // carry-save: a + b + c = s + 2·maj(a, b, c)
    let s = a.xor(&b).xor(&c);
    let maj = and(p, &a.xor(&c), &b.xor(&c))?.xor(&c);
    let carry = maj.map(|w| (w << 1) & mask);

    let mut g = and(p, &s, &carry)?;
    let p0 = s.xor(&carry);
    let mut prop = p0.clone();

    // after the level with shift sh, g[i] is the carry out of bits i..i-2sh+1;
    // the top bit needs the carry out of bits ℓ-2..0
    let mut sh = 1;
    while sh < bits - 1 {
        let g_sh = g.map(|w| (w << sh) & mask);
        let last = 2 * sh >= bits - 1;
        if last {
            g = g.xor(&and(p, &prop, &g_sh)?);
        } else {
            let p_sh = prop.map(|w| (w << sh) & mask);
            let lhs = BoolVector::concat(&prop, &prop);
            let rhs = BoolVector::concat(&g_sh, &p_sh);
            let both = and(p, &lhs, &rhs)?;
            g = g.xor(&both.slice(0..n));
            prop = both.slice(n..2 * n);
        }
        sh *= 2;
    }
    let top = bits - 1;
    Ok(p0
        .map(|w| (w >> top) & 1)
        .xor(&g.map(|w| (w >> (top - 1)) & 1)))
}

/// Bit x < y (signed), as a boolean sharing in bit 0.
pub fn less_than(p: &mut Party, x: &SecretVector, y: &SecretVector) -> Result<BoolVector> {
    let d = x.sub(y, p.ring())?;
    msb(p, &d)
}

/// Bit x < c for public raw values c.
pub fn less_than_public(p: &mut Party, x: &SecretVector, c: &[u64]) -> Result<BoolVector> {
    let ring = p.ring();
    let neg: Vec<u64> = c.iter().map(|&v| ring.neg(v)).collect();
    let d = x.add_public(&neg, ring)?;
    msb(p, &d)
}

/// Arithmetic sharing (integer 0/1) of bit-0 boolean shares.
///
/// P1 knows u = b1 ⊕ b2 and deals it; b3 is held by P2 and P3 and is used
/// as a component directly. Then b = u + b3 − 2·u·b3. Two rounds.
pub fn b2a(p: &mut Party, b: &BoolVector) -> Result<SecretVector> {
    let ring = p.ring();
    let n = b.len();
    let me = p.id();
    let u_plain: Option<Vec<u64>> =
        (me == PartyId::P1).then(|| (0..n).map(|i| (b.first[i] ^ b.second[i]) & 1).collect());
    let u = deal(p, PartyId::P1, u_plain.as_deref(), n, 0)?;
    let b3_words: Vec<u64> = match me {
        PartyId::P1 => vec![0; n],
        PartyId::P2 => b.second.iter().map(|w| w & 1).collect(),
        PartyId::P3 => b.first.iter().map(|w| w & 1).collect(),
    };
    let b3 = SecretVector::from_component(me, 2, &b3_words, 0);
    let uv = mul(p, &u, &b3)?;
    u.add(&b3, ring)?.sub(&uv.scalar_mul(2, ring), ring)
}

/// Arithmetic bit x < y.
pub fn less_than_bit(p: &mut Party, x: &SecretVector, y: &SecretVector) -> Result<SecretVector> {
    let b = less_than(p, x, y)?;
    b2a(p, &b)
}
