//! Local share-product kernels.
//!
//! Every interactive product reduces to sums of plaintext products of share
//! components. These kernels compute them with wrapping u64 arithmetic; the
//! caller reduces modulo 2^ℓ. With the `parallel` feature the default entry
//! points split output rows across rayon's pool; the `_seq` variants are
//! always available and produce identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Outputs below this many multiply-adds stay on the calling thread.
#[cfg(feature = "parallel")]
const PAR_THRESHOLD: usize = 1 << 14;

/// Shape of a product of two flattened operands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bilinear {
    /// Elementwise product of two length-n vectors.
    Hadamard { n: usize },
    /// (m×k)·(k×n), both row-major.
    MatMul { m: usize, k: usize, n: usize },
    /// (m×k)·(n×k)ᵀ, both row-major.
    MatMulT { m: usize, k: usize, n: usize },
}

pub type Term<'a> = (&'a [u64], &'a [u64]);

impl Bilinear {
    pub fn lhs_len(self) -> usize {
        match self {
            Bilinear::Hadamard { n } => n,
            Bilinear::MatMul { m, k, .. } | Bilinear::MatMulT { m, k, .. } => m * k,
        }
    }

    pub fn rhs_len(self) -> usize {
        match self {
            Bilinear::Hadamard { n } => n,
            Bilinear::MatMul { k, n, .. } | Bilinear::MatMulT { k, n, .. } => k * n,
        }
    }

    pub fn out_len(self) -> usize {
        match self {
            Bilinear::Hadamard { n } => n,
            Bilinear::MatMul { m, n, .. } | Bilinear::MatMulT { m, n, .. } => m * n,
        }
    }

    fn row_len(self) -> usize {
        match self {
            Bilinear::Hadamard { .. } => 1,
            Bilinear::MatMul { n, .. } | Bilinear::MatMulT { n, .. } => n.max(1),
        }
    }

    #[cfg(feature = "parallel")]
    fn work(self) -> usize {
        match self {
            Bilinear::Hadamard { n } => n,
            Bilinear::MatMul { m, k, n } | Bilinear::MatMulT { m, k, n } => m * k * n,
        }
    }

    /// Σ_t lhs_t ∘ rhs_t for the shape's product ∘.
    pub fn eval(self, terms: &[Term]) -> Vec<u64> {
        #[cfg(feature = "parallel")]
        {
            if self.work() * terms.len() >= PAR_THRESHOLD {
                return self.eval_par(terms);
            }
        }
        self.eval_seq(terms)
    }

    pub fn eval_seq(self, terms: &[Term]) -> Vec<u64> {
        self.check(terms);
        let mut out = vec![0u64; self.out_len()];
        if let Bilinear::Hadamard { .. } = self {
            hadamard_into(terms, 0, &mut out);
        } else {
            for (i, row) in out.chunks_mut(self.row_len()).enumerate() {
                self.row_into(terms, i, row);
            }
        }
        out
    }

    #[cfg(feature = "parallel")]
    pub fn eval_par(self, terms: &[Term]) -> Vec<u64> {
        self.check(terms);
        let mut out = vec![0u64; self.out_len()];
        if let Bilinear::Hadamard { .. } = self {
            out.par_chunks_mut(4096)
                .enumerate()
                .for_each(|(c, chunk)| hadamard_into(terms, c * 4096, chunk));
        } else {
            out.par_chunks_mut(self.row_len())
                .enumerate()
                .for_each(|(i, row)| self.row_into(terms, i, row));
        }
        out
    }

    fn check(self, terms: &[Term]) {
        for (a, b) in terms {
            assert_eq!(a.len(), self.lhs_len(), "lhs operand length");
            assert_eq!(b.len(), self.rhs_len(), "rhs operand length");
        }
    }

    fn row_into(self, terms: &[Term], i: usize, row: &mut [u64]) {
        match self {
            Bilinear::Hadamard { .. } => unreachable!(),
            Bilinear::MatMul { k, n, .. } => {
                for (a, b) in terms {
                    let a_row = &a[i * k..(i + 1) * k];
                    for (kk, &av) in a_row.iter().enumerate() {
                        let b_row = &b[kk * n..(kk + 1) * n];
                        for (o, &bv) in row.iter_mut().zip(b_row) {
                            *o = o.wrapping_add(av.wrapping_mul(bv));
                        }
                    }
                }
            }
            Bilinear::MatMulT { k, .. } => {
                for (a, b) in terms {
                    let a_row = &a[i * k..(i + 1) * k];
                    for (j, o) in row.iter_mut().enumerate() {
                        *o = o.wrapping_add(dot(a_row, &b[j * k..(j + 1) * k]));
                    }
                }
            }
        }
    }
}

fn hadamard_into(terms: &[Term], offset: usize, out: &mut [u64]) {
    for (a, b) in terms {
        let a = &a[offset..offset + out.len()];
        let b = &b[offset..offset + out.len()];
        for ((o, &x), &y) in out.iter_mut().zip(a).zip(b) {
            *o = o.wrapping_add(x.wrapping_mul(y));
        }
    }
}

#[inline]
fn dot(a: &[u64], b: &[u64]) -> u64 {
    a.iter()
        .zip(b)
        .fold(0u64, |acc, (&x, &y)| acc.wrapping_add(x.wrapping_mul(y)))
}

/// Local part of a replicated AND gate: a1·b1 ⊕ a1·b2 ⊕ a2·b1 (bitwise).
pub fn and_cross(a1: &[u64], a2: &[u64], b1: &[u64], b2: &[u64]) -> Vec<u64> {
    #[cfg(feature = "parallel")]
    {
        if a1.len() >= PAR_THRESHOLD {
            return and_cross_par(a1, a2, b1, b2);
        }
    }
    and_cross_seq(a1, a2, b1, b2)
}

pub fn and_cross_seq(a1: &[u64], a2: &[u64], b1: &[u64], b2: &[u64]) -> Vec<u64> {
    (0..a1.len())
        .map(|i| (a1[i] & (b1[i] ^ b2[i])) ^ (a2[i] & b1[i]))
        .collect()
}

#[cfg(feature = "parallel")]
pub fn and_cross_par(a1: &[u64], a2: &[u64], b1: &[u64], b2: &[u64]) -> Vec<u64> {
    (0..a1.len())
        .into_par_iter()
        .map(|i| (a1[i] & (b1[i] ^ b2[i])) ^ (a2[i] & b1[i]))
        .collect()
}
