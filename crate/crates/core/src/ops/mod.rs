//! Interactive arithmetic on replicated shares.
//!
//! Products come in two flavours. The plain ring product reshares one
//! element per output to the previous party (3 elements per output in total,
//! one round) and adds the operand scales. The fused product-with-truncation
//! also costs 3 elements per output: P2 and P3 send masked cross terms to P1,
//! which returns its truncated share to P2 (two rounds). Its result is within
//! one LSB of the exact shifted value, and exact whenever the dropped bits
//! of the product are zero, except with probability about |v|/2^ℓ.

pub mod compare;
pub mod topk;

use crate::error::{Error, Result};
use crate::kernels::Bilinear;
use crate::runtime::Party;
use crate::sharing::{PartyId, SecretMatrix, SecretVector};

pub use compare::{and, b2a, less_than, less_than_bit, less_than_public, msb, not};
pub use topk::{argmax, oblivious_select, secure_topk, Argmax, TopK};

fn check_operands(shape: Bilinear, x: &SecretVector, y: &SecretVector) -> Result<()> {
    if x.len() != shape.lhs_len() || y.len() != shape.rhs_len() {
        return Err(Error::Shape(format!(
            "{shape:?} with operands of length {} and {}",
            x.len(),
            y.len()
        )));
    }
    Ok(())
}

fn add_vecs(p: &Party, a: &[u64], b: &[u64]) -> Vec<u64> {
    let ring = p.ring();
    a.iter().zip(b).map(|(&x, &y)| ring.add(x, y)).collect()
}

/// Ring product of shape `shape`; the result scale is the sum of the
/// operand scales. One round, `shape.out_len()` elements sent per party.
pub fn product(p: &mut Party, shape: Bilinear, x: &SecretVector, y: &SecretVector) -> Result<SecretVector> {
    check_operands(shape, x, y)?;
    let ring = p.ring();
    let ysum = add_vecs(p, &y.first, &y.second);
    let cross = shape.eval(&[(&x.first, &ysum), (&x.second, &y.first)]);
    let alpha = p.zero_shares(cross.len());
    let mine: Vec<u64> = cross
        .iter()
        .zip(&alpha)
        .map(|(&c, &a)| ring.add(ring.reduce(c), a))
        .collect();
    let theirs = if mine.is_empty() { Vec::new() } else { p.reshare(&mine)? };
    let out = SecretVector {
        owner: p.id(),
        first: mine,
        second: theirs,
        frac_bits: x.frac_bits + y.frac_bits,
    };
    crate::sharing::protocol::verify(p, &out)?;
    Ok(out)
}

/// Product of shape `shape` followed by truncation by `shift` bits.
pub fn product_trunc(
    p: &mut Party,
    shape: Bilinear,
    x: &SecretVector,
    y: &SecretVector,
    shift: u32,
) -> Result<SecretVector> {
    check_operands(shape, x, y)?;
    let frac_bits = (x.frac_bits + y.frac_bits)
        .checked_sub(shift)
        .ok_or_else(|| Error::Shape(format!("cannot drop {shift} bits from scale {}", x.frac_bits + y.frac_bits)))?;
    let n = shape.out_len();
    if n == 0 {
        return Ok(SecretVector::zeros(p.id(), 0, frac_bits));
    }
    let ring = p.ring();
    let (first, second) = match p.id() {
        PartyId::P1 => {
            let xs = add_vecs(p, &x.first, &x.second);
            let ys = add_vecs(p, &y.first, &y.second);
            let local = shape.eval(&[(&xs, &ys)]);
            let m2 = p.recv_elems(PartyId::P2, n)?;
            let m3 = p.recv_elems(PartyId::P3, n)?;
            let r = p.prf_with_prev(n);
            let y2: Vec<u64> = (0..n)
                .map(|i| {
                    let a = ring.add(ring.add(ring.reduce(local[i]), m2[i]), m3[i]);
                    ring.sub(a >> shift, r[i])
                })
                .collect();
            p.send_elems(PartyId::P2, &y2)?;
            (r, y2)
        }
        PartyId::P2 => {
            // P2 holds (x2, x3)
            let s = p.prf_with_next(n);
            let s2 = p.prf_with_next(n);
            let cross = shape.eval(&[(&x.first, &y.second), (&x.second, &y.first)]);
            let m2: Vec<u64> = (0..n).map(|i| ring.sub(ring.reduce(cross[i]), s[i])).collect();
            p.send_elems(PartyId::P1, &m2)?;
            let b = high_part(p, shape, &x.second, &y.second, &s, &s2, shift);
            let y2 = p.recv_elems(PartyId::P1, n)?;
            (y2, b)
        }
        PartyId::P3 => {
            // P3 holds (x3, x1)
            let s = p.prf_with_prev(n);
            let s2 = p.prf_with_prev(n);
            let cross = shape.eval(&[(&x.first, &y.second), (&x.second, &y.first)]);
            let m3: Vec<u64> = (0..n).map(|i| ring.sub(ring.reduce(cross[i]), s2[i])).collect();
            p.send_elems(PartyId::P1, &m3)?;
            let b = high_part(p, shape, &x.first, &y.first, &s, &s2, shift);
            let r = p.prf_with_next(n);
            (b, r)
        }
    };
    let out = SecretVector {
        owner: p.id(),
        first,
        second,
        frac_bits,
    };
    crate::sharing::protocol::verify(p, &out)?;
    Ok(out)
}

/// B' = −((−B) >> shift) with B = x3∘y3 + s + s'.
fn high_part(p: &Party, shape: Bilinear, x3: &[u64], y3: &[u64], s: &[u64], s2: &[u64], shift: u32) -> Vec<u64> {
    let ring = p.ring();
    let b = shape.eval(&[(x3, y3)]);
    (0..b.len())
        .map(|i| {
            let b = ring.add(ring.add(ring.reduce(b[i]), s[i]), s2[i]);
            ring.neg(ring.neg(b) >> shift)
        })
        .collect()
}

/// Elementwise ring product (scales add).
pub fn mul(p: &mut Party, x: &SecretVector, y: &SecretVector) -> Result<SecretVector> {
    product(p, Bilinear::Hadamard { n: x.len() }, x, y)
}

/// Elementwise fixed-point product, truncated back to the scale of `x`.
pub fn fixed_mul(p: &mut Party, x: &SecretVector, y: &SecretVector) -> Result<SecretVector> {
    product_trunc(p, Bilinear::Hadamard { n: x.len() }, x, y, y.frac_bits)
}

/// Divide by 2^shift. P2 and P3 add a common PRF mask s to x3, so the high
/// part B = x3 + s is uniform; P2 sends x2 − s so that P1 holds the low part
/// A = x1 + x2 − s. 2n elements, two rounds.
pub fn truncate(p: &mut Party, x: &SecretVector, shift: u32) -> Result<SecretVector> {
    let frac_bits = x
        .frac_bits
        .checked_sub(shift)
        .ok_or_else(|| Error::Shape(format!("cannot drop {shift} bits from scale {}", x.frac_bits)))?;
    let n = x.len();
    if n == 0 {
        return Ok(SecretVector::zeros(p.id(), 0, frac_bits));
    }
    let ring = p.ring();
    let hi = |b: u64| ring.neg(ring.neg(b) >> shift);
    let (first, second) = match p.id() {
        PartyId::P1 => {
            let m = p.recv_elems(PartyId::P2, n)?;
            let r = p.prf_with_prev(n);
            let y2: Vec<u64> = (0..n)
                .map(|i| {
                    let a = ring.add(x.first[i], m[i]);
                    ring.sub(a >> shift, r[i])
                })
                .collect();
            p.send_elems(PartyId::P2, &y2)?;
            (r, y2)
        }
        PartyId::P2 => {
            let s = p.prf_with_next(n);
            let m: Vec<u64> = (0..n).map(|i| ring.sub(x.first[i], s[i])).collect();
            p.send_elems(PartyId::P1, &m)?;
            let b: Vec<u64> = (0..n).map(|i| hi(ring.add(x.second[i], s[i]))).collect();
            let y2 = p.recv_elems(PartyId::P1, n)?;
            (y2, b)
        }
        PartyId::P3 => {
            let s = p.prf_with_prev(n);
            let b: Vec<u64> = (0..n).map(|i| hi(ring.add(x.first[i], s[i]))).collect();
            let r = p.prf_with_next(n);
            (b, r)
        }
    };
    Ok(SecretVector {
        owner: p.id(),
        first,
        second,
        frac_bits,
    })
}

/// Untruncated inner product (scale = sum of scales), as a length-1 vector.
pub fn dot_ring(p: &mut Party, x: &SecretVector, y: &SecretVector) -> Result<SecretVector> {
    let k = x.len();
    product(p, Bilinear::MatMul { m: 1, k, n: 1 }, x, y)
}

/// Fixed-point inner product with a single truncation by the session's f.
pub fn secure_dot(p: &mut Party, x: &SecretVector, y: &SecretVector) -> Result<SecretVector> {
    let k = x.len();
    let f = p.frac_bits();
    product_trunc(p, Bilinear::MatMul { m: 1, k, n: 1 }, x, y, f)
}

fn check_matvec(a: &SecretMatrix, x: &SecretVector) -> Result<Bilinear> {
    if a.cols != x.len() {
        return Err(Error::Shape(format!(
            "{}x{} matrix times vector of length {}",
            a.rows,
            a.cols,
            x.len()
        )));
    }
    Ok(Bilinear::MatMul {
        m: a.rows,
        k: a.cols,
        n: 1,
    })
}

/// A·x without truncation.
pub fn matmul_ring(p: &mut Party, a: &SecretMatrix, x: &SecretVector) -> Result<SecretVector> {
    let shape = check_matvec(a, x)?;
    product(p, shape, &a.data, x)
}

/// Fixed-point A·x, one truncation per output row.
pub fn secure_matmul(p: &mut Party, a: &SecretMatrix, x: &SecretVector) -> Result<SecretVector> {
    let shape = check_matvec(a, x)?;
    let f = p.frac_bits();
    product_trunc(p, shape, &a.data, x, f)
}

/// x·B for a row vector x, without truncation.
pub fn vecmat_ring(p: &mut Party, x: &SecretVector, b: &SecretMatrix) -> Result<SecretVector> {
    if b.rows != x.len() {
        return Err(Error::Shape(format!(
            "vector of length {} times {}x{} matrix",
            x.len(),
            b.rows,
            b.cols
        )));
    }
    product(p, Bilinear::MatMul { m: 1, k: b.rows, n: b.cols }, x, &b.data)
}

/// A·B for A m×k and B k×n, truncating by `shift`.
pub fn matmul_trunc(p: &mut Party, a: &SecretMatrix, b: &SecretMatrix, shift: u32) -> Result<SecretMatrix> {
    if a.cols != b.rows {
        return Err(Error::Shape(format!(
            "{}x{} times {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let shape = Bilinear::MatMul {
        m: a.rows,
        k: a.cols,
        n: b.cols,
    };
    let data = if shift == 0 {
        product(p, shape, &a.data, &b.data)?
    } else {
        product_trunc(p, shape, &a.data, &b.data, shift)?
    };
    SecretMatrix::new(a.rows, b.cols, data)
}

/// A·Bᵀ without truncation: every pairwise row dot product.
pub fn matmul_t_ring(p: &mut Party, a: &SecretMatrix, b: &SecretMatrix) -> Result<SecretMatrix> {
    if a.cols != b.cols {
        return Err(Error::Shape(format!(
            "{}x{} times ({}x{})ᵀ",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let shape = Bilinear::MatMulT {
        m: a.rows,
        k: a.cols,
        n: b.rows,
    };
    let data = product(p, shape, &a.data, &b.data)?;
    SecretMatrix::new(a.rows, b.rows, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runtime::{run_session, Phase, SessionConfig};
    use crate::sharing::{deal, reconstruct_vector};

    fn dealt(p: &mut Party, dealer: PartyId, v: &[u64], f: u32) -> Result<SecretVector> {
        deal(p, dealer, (p.id() == dealer).then_some(v), v.len(), f)
    }

    fn reconstruct(outs: &[SecretVector; 3]) -> Vec<u64> {
        reconstruct_vector(crate::ring::Ring::R64, &outs.iter().collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn scalar_mul_costs() {
        let out = run_session(&SessionConfig::with_seed(21), |p| {
            let x = dealt(p, PartyId::P1, &[3], 0)?;
            let y = dealt(p, PartyId::P2, &[4], 0)?;
            p.set_phase(Phase::Debug);
            mul(p, &x, &y)
        })
        .unwrap();
        assert_eq!(reconstruct(&out.outputs), vec![12]);
        let c = out.comm();
        assert_eq!(c.phase_messages(Phase::Debug), 3);
        assert_eq!(c.phase_bytes(Phase::Debug), 24);
        assert_eq!(c.phase_rounds(Phase::Debug), 1);
    }

    #[test]
    fn fixed_mul_and_truncate() {
        let cfg = SessionConfig {
            debug_verify: true,
            ..SessionConfig::with_seed(22)
        };
        let out = run_session(&cfg, |p| {
            let fx = p.fixed();
            let a = fx.encode_all(&[1.5, -2.25, 7.0])?;
            let b = fx.encode_all(&[2.0, 3.5, -1.0])?;
            let x = dealt(p, PartyId::P1, &a, 18)?;
            let y = dealt(p, PartyId::P3, &b, 18)?;
            let z = fixed_mul(p, &x, &y)?;
            let t = truncate(p, &x, 1)?;
            Ok((z, t))
        })
        .unwrap();
        let fx = crate::fixed::FixedPoint::default();
        let z = reconstruct(&out.outputs.clone().map(|o| o.0));
        let want = [3.0, -7.875, -7.0];
        for (raw, w) in z.iter().zip(want) {
            assert!((fx.decode(*raw) - w).abs() <= 2f64.powi(-18));
        }
        let t = reconstruct(&out.outputs.map(|o| o.1));
        assert_eq!(t, fx.encode_all(&[0.75, -1.125, 3.5]).unwrap());
    }

    #[test]
    fn matmul_shapes_and_costs() {
        let out = run_session(&SessionConfig::with_seed(23), |p| {
            let a: Vec<u64> = (1..=6).collect();
            let x = [1u64, 0, 2];
            let am = SecretMatrix::new(2, 3, dealt(p, PartyId::P2, &a, 0)?)?;
            let xv = dealt(p, PartyId::P1, &x, 0)?;
            p.set_phase(Phase::Cosine);
            let y = matmul_ring(p, &am, &xv)?;
            p.set_phase(Phase::Detect);
            let g = matmul_t_ring(p, &am, &am)?;
            Ok((y, g.data))
        })
        .unwrap();
        assert_eq!(reconstruct(&out.outputs.clone().map(|o| o.0)), vec![7, 16]);
        assert_eq!(reconstruct(&out.outputs.clone().map(|o| o.1)), vec![14, 32, 32, 77]);
        assert_eq!(out.comm().phase_bytes(Phase::Cosine), 3 * 2 * 8);
        assert_eq!(out.comm().phase_bytes(Phase::Detect), 3 * 4 * 8);
    }

    #[test]
    fn fused_truncation_is_three_elements() {
        let out = run_session(&SessionConfig::with_seed(24), |p| {
            let fx = p.fixed();
            let e = fx.encode_all(&[0.6, 0.8])?;
            let x = dealt(p, PartyId::P1, &e, 18)?;
            p.set_phase(Phase::Debug);
            secure_dot(p, &x, &x)
        })
        .unwrap();
        let v = crate::fixed::FixedPoint::default().decode(reconstruct(&out.outputs)[0]);
        assert!((v - 1.0).abs() < 1e-5, "{v}");
        assert_eq!(out.comm().phase_bytes(Phase::Debug), 24);
        assert_eq!(out.comm().phase_rounds(Phase::Debug), 2);
    }
}
