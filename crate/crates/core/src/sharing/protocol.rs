//! Input dealing, reveals and public announcements.

use crate::error::{Error, Result};
use crate::runtime::{FrameKind, Party};
use crate::sharing::{BoolVector, PartyId, SecretMatrix, SecretVector};

/// Secret-share `values` held in plaintext by `dealer`.
///
/// The dealer's two components come from the PRF streams it shares with each
/// neighbour, so only the third component travels: the dealer sends it to
/// both neighbours (2n ring elements, one round). Non-dealers pass `None`
/// and must agree on `n`.
pub fn deal(
    p: &mut Party,
    dealer: PartyId,
    values: Option<&[u64]>,
    n: usize,
    frac_bits: u32,
) -> Result<SecretVector> {
    let ring = p.ring();
    let me = p.id();
    if n == 0 {
        return Ok(SecretVector::zeros(me, 0, frac_bits));
    }
    let (first, second) = if me == dealer {
        let values = values.ok_or_else(|| Error::Shape(format!("dealer {me} has no input")))?;
        if values.len() != n {
            return Err(Error::Shape(format!("dealing {} values announced as {n}", values.len())));
        }
        let own = p.prf_with_prev(n);
        let next = p.prf_with_next(n);
        let third: Vec<u64> = (0..n)
            .map(|i| ring.sub(ring.sub(ring.reduce(values[i]), own[i]), next[i]))
            .collect();
        p.send_elems(me.next(), &third)?;
        p.send_elems(me.prev(), &third)?;
        (own, next)
    } else if me == dealer.next() {
        let mine = p.prf_with_prev(n);
        let third = p.recv_elems(dealer, n)?;
        (mine, third)
    } else {
        let theirs = p.prf_with_next(n);
        let third = p.recv_elems(dealer, n)?;
        (third, theirs)
    };
    Ok(SecretVector {
        owner: me,
        first,
        second,
        frac_bits,
    })
}

/// Deal a row-major matrix.
pub fn deal_matrix(
    p: &mut Party,
    dealer: PartyId,
    values: Option<&[u64]>,
    rows: usize,
    cols: usize,
    frac_bits: u32,
) -> Result<SecretMatrix> {
    let data = deal(p, dealer, values, rows * cols, frac_bits)?;
    SecretMatrix::new(rows, cols, data)
}

/// Reveal `x` to `target` only. The other two parties each send the one
/// component the target lacks; the target checks that both copies agree.
pub fn reveal_to(p: &mut Party, target: PartyId, x: &SecretVector) -> Result<Option<Vec<u64>>> {
    let ring = p.ring();
    let me = p.id();
    let n = x.len();
    if me != target {
        if n > 0 {
            // target lacks x_{prev(target)}: prev(target) holds it first, next(target) second
            let comp = if me == target.prev() { &x.first } else { &x.second };
            p.send_elems(target, comp)?;
        }
        return Ok(None);
    }
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    let a = p.recv_elems(target.prev(), n)?;
    let b = p.recv_elems(target.next(), n)?;
    if a != b {
        return Err(Error::Consistency(format!(
            "{target} received disagreeing copies of x{}",
            target.prev().index() + 1
        )));
    }
    Ok(Some(
        (0..n)
            .map(|i| ring.add(ring.add(x.first[i], x.second[i]), a[i]))
            .collect(),
    ))
}

/// Reveal `x` to every party (3n elements, one round).
pub fn open(p: &mut Party, x: &SecretVector) -> Result<Vec<u64>> {
    let ring = p.ring();
    let n = x.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    p.send_elems(p.id().next(), &x.first)?;
    let missing = p.recv_elems(p.id().prev(), n)?;
    Ok((0..n)
        .map(|i| ring.add(ring.add(x.first[i], x.second[i]), missing[i]))
        .collect())
}

/// Boolean counterpart of [`reveal_to`].
pub fn reveal_bits_to(p: &mut Party, target: PartyId, x: &BoolVector) -> Result<Option<Vec<u64>>> {
    let me = p.id();
    let n = x.len();
    if me != target {
        if n > 0 {
            let comp = if me == target.prev() { &x.first } else { &x.second };
            p.send_elems(target, comp)?;
        }
        return Ok(None);
    }
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    let a = p.recv_elems(target.prev(), n)?;
    let b = p.recv_elems(target.next(), n)?;
    if a != b {
        return Err(Error::Consistency(format!("{target} received disagreeing bit shares")));
    }
    Ok(Some((0..n).map(|i| x.first[i] ^ x.second[i] ^ a[i]).collect()))
}

/// Send public integers from `from` to both other parties.
pub fn announce(p: &mut Party, from: PartyId, values: Option<&[u64]>) -> Result<Vec<u64>> {
    if p.id() == from {
        let values = values.ok_or_else(|| Error::Shape("announcer has nothing to send".into()))?;
        let payload: Vec<u8> = values.iter().flat_map(|v| v.to_le_bytes()).collect();
        p.send_bytes(from.next(), payload.clone(), FrameKind::Public)?;
        p.send_bytes(from.prev(), payload, FrameKind::Public)?;
        return Ok(values.to_vec());
    }
    let bytes = p.recv_bytes(from)?;
    if bytes.len() % 8 != 0 {
        return Err(Error::Desync(format!("announcement of {} bytes", bytes.len())));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect())
}

/// Debug-mode replication check on a vector.
pub fn verify(p: &mut Party, x: &SecretVector) -> Result<()> {
    p.verify_replication(&x.first, &x.second)
}
