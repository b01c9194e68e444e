//! Oblivious selection, argmax and top-k.

use crate::error::{Error, Result};
use crate::ops::{b2a, less_than, mul};
use crate::runtime::Party;
use crate::sharing::SecretVector;

/// x where b = 1, y where b = 0; b is an arithmetic bit at scale 0.
pub fn oblivious_select(p: &mut Party, b: &SecretVector, x: &SecretVector, y: &SecretVector) -> Result<SecretVector> {
    let ring = p.ring();
    let diff = x.sub(y, ring)?;
    if b.len() != diff.len() {
        return Err(Error::Shape(format!("{} selector bits for {} values", b.len(), diff.len())));
    }
    let delta = mul(p, b, &diff)?;
    y.add(&delta, ring)
}

/// Winner of a tournament over the scores.
#[derive(Clone, Debug)]
pub struct Argmax {
    /// Secret position of the maximum (scale 0), length 1.
    pub index: SecretVector,
    /// The maximum score, length 1.
    pub value: SecretVector,
    /// Secret one-hot indicator of the winner, length n.
    pub indicator: SecretVector,
}

/// Tournament argmax: pairwise comparisons per level, ties to the smaller
/// index, an odd last element advancing unopposed. The one-hot indicator is
/// rebuilt top-down from the comparison bits.
pub fn argmax(p: &mut Party, scores: &SecretVector) -> Result<Argmax> {
    let ring = p.ring();
    let n = scores.len();
    if n == 0 {
        return Err(Error::TopK { k: 1, n: 0 });
    }
    let mut cur = scores.clone();
    let mut levels: Vec<(usize, SecretVector)> = Vec::new();
    while cur.len() > 1 {
        let len = cur.len();
        let pairs = len / 2;
        let left = cur.gather(&(0..pairs).map(|i| 2 * i).collect::<Vec<_>>());
        let right = cur.gather(&(0..pairs).map(|i| 2 * i + 1).collect::<Vec<_>>());
        // 1 when the right element is strictly larger
        let lt = less_than(p, &left, &right)?;
        let bit = b2a(p, &lt)?;
        let winners = oblivious_select(p, &bit, &right, &left)?;
        cur = if len % 2 == 1 {
            SecretVector::concat(&[&winners, &cur.slice(len - 1..len)])?
        } else {
            winners
        };
        levels.push((len, bit));
    }

    let mut ind = SecretVector::from_public(p.id(), &[1], 0);
    for (len, bit) in levels.iter().rev() {
        let pairs = len / 2;
        let parent = ind.slice(0..pairs);
        let right = mul(p, &parent, bit)?;
        let left = parent.sub(&right, ring)?;
        let mut next = SecretVector::zeros(p.id(), *len, 0);
        for i in 0..pairs {
            next.first[2 * i] = left.first[i];
            next.second[2 * i] = left.second[i];
            next.first[2 * i + 1] = right.first[i];
            next.second[2 * i + 1] = right.second[i];
        }
        if len % 2 == 1 {
            next.first[len - 1] = ind.first[pairs];
            next.second[len - 1] = ind.second[pairs];
        }
        ind = next;
    }
    let positions: Vec<u64> = (0..n as u64).collect();
    let index = ind.weighted_sum(&positions, ring)?;
    Ok(Argmax {
        index,
        value: cur,
        indicator: ind,
    })
}

/// Secret top-k positions and values in decreasing score order.
#[derive(Clone, Debug)]
pub struct TopK {
    pub indices: SecretVector,
    pub values: SecretVector,
}

/// Raw masking value written over each winner: −2^(ℓ−2), below any score
/// in the signed comparison range.
pub fn sentinel(p: &Party) -> u64 {
    let ring = p.ring();
    ring.neg(1u64 << (ring.bits() - 2))
}

/// k sequential argmax passes, each overwriting the winner with the sentinel.
pub fn secure_topk(p: &mut Party, scores: &SecretVector, k: usize) -> Result<TopK> {
    let ring = p.ring();
    let n = scores.len();
    if k > n {
        return Err(Error::TopK { k, n });
    }
    let mut s = scores.clone();
    let mut indices = SecretVector::zeros(p.id(), 0, 0);
    let mut values = SecretVector::zeros(p.id(), 0, scores.frac_bits);
    let sent = sentinel(p);
    for pass in 0..k {
        let am = argmax(p, &s)?;
        indices = SecretVector::concat(&[&indices, &am.index])?;
        values = SecretVector::concat(&[&values, &am.value])?;
        if pass + 1 < k {
            // s + ind·(sentinel − s)
            let hit = mul(p, &am.indicator, &s)?;
            let planted = am.indicator.scalar_mul(sent, ring).with_frac_bits(s.frac_bits);
            s = s.add(&planted, ring)?.sub(&hit, ring)?;
        }
    }
    Ok(TopK { indices, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;
    use crate::runtime::{run_session, SessionConfig};
    use crate::sharing::{deal, reconstruct_vector, PartyId};

    fn topk_plain(scores: &[f64], k: usize) -> (Vec<u64>, Vec<u64>) {
        let n = scores.len();
        let out = run_session(&SessionConfig::with_seed(41), |p| {
            let raw = p.fixed().encode_all(scores)?;
            let x = deal(p, PartyId::P1, (p.id() == PartyId::P1).then_some(&raw[..]), n, 18)?;
            let t = secure_topk(p, &x, k)?;
            Ok((t.indices, t.values))
        })
        .unwrap();
        let idx = reconstruct_vector(Ring::R64, &out.outputs.iter().map(|o| &o.0).collect::<Vec<_>>()).unwrap();
        let val = reconstruct_vector(Ring::R64, &out.outputs.iter().map(|o| &o.1).collect::<Vec<_>>()).unwrap();
        (idx, val)
    }

    #[test]
    fn topk_examples() {
        assert_eq!(topk_plain(&[0.1, 0.9, 0.5], 2).0, vec![1, 2]);
        assert_eq!(topk_plain(&[0.3, 0.3, 0.3, 0.3], 2).0, vec![0, 1]);
        let (idx, val) = topk_plain(&[-1.0, 0.25, -0.5, 0.75, 0.0], 5);
        assert_eq!(idx, vec![3, 1, 4, 2, 0]);
        let fx = crate::fixed::FixedPoint::default();
        assert_eq!(fx.decode_all(&val), vec![0.75, 0.25, 0.0, -0.5, -1.0]);
    }

    #[test]
    fn topk_rejects_large_k() {
        let err = run_session(&SessionConfig::with_seed(42), |p| {
            let x = SecretVector::zeros(p.id(), 3, 18);
            secure_topk(p, &x, 4)
        })
        .unwrap_err();
        assert!(matches!(err, Error::TopK { k: 4, n: 3 }));
    }

    #[test]
    fn select_both_ways() {
        let out = run_session(&SessionConfig::with_seed(43), |p| {
            let me = p.id();
            let b = deal(p, PartyId::P1, (me == PartyId::P1).then_some(&[1u64, 0][..]), 2, 0)?;
            let x = deal(p, PartyId::P2, (me == PartyId::P2).then_some(&[10u64, 11][..]), 2, 0)?;
            let y = deal(p, PartyId::P3, (me == PartyId::P3).then_some(&[20u64, 21][..]), 2, 0)?;
            oblivious_select(p, &b, &x, &y)
        })
        .unwrap();
        let v = reconstruct_vector(Ring::R64, &out.outputs.iter().collect::<Vec<_>>()).unwrap();
        assert_eq!(v, vec![10, 21]);
    }
}
