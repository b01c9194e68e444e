//! Pairwise PRF streams and the zero sharings derived from them.
//!
//! Each adjacent pair of parties shares one 128-bit key. Both holders of a key
//! draw from it in the same order, so the stream position doubles as the
//! synchronized counter.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::ring::Ring;

pub type PrfKey = [u8; 16];

const DOMAIN: &[u8; 16] = b"privmark-prf-v01";

pub struct PrfStream {
    rng: ChaCha12Rng,
    counter: u64,
}

impl PrfStream {
    pub fn new(key: PrfKey) -> Self {
        let mut seed = [0u8; 32];
        seed[..16].copy_from_slice(&key);
        seed[16..].copy_from_slice(DOMAIN);
        PrfStream {
            rng: ChaCha12Rng::from_seed(seed),
            counter: 0,
        }
    }

    /// Evaluate PRF(key, ctr) without touching any stream state.
    pub fn eval(key: PrfKey, ctr: u64) -> u64 {
        let mut s = PrfStream::new(key);
        s.rng.set_word_pos(ctr as u128 * 2);
        s.rng.next_u64()
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }

    pub fn draw(&mut self, ring: Ring, n: usize) -> Vec<u64> {
        self.counter += n as u64;
        (0..n).map(|_| ring.reduce(self.rng.next_u64())).collect()
    }

    pub fn draw_bytes(&mut self, out: &mut [u8]) {
        self.counter += out.len().div_ceil(8) as u64;
        let mut chunk = [0u8; 8];
        for c in out.chunks_mut(8) {
            chunk.copy_from_slice(&self.rng.next_u64().to_le_bytes());
            c.copy_from_slice(&chunk[..c.len()]);
        }
    }
}

/// Correlated randomness owned by one party: the stream shared with its
/// predecessor and the one shared with its successor.
pub struct ZeroShareContext {
    pub(crate) with_prev: PrfStream,
    pub(crate) with_next: PrfStream,
}

impl ZeroShareContext {
    pub fn new(key_with_prev: PrfKey, key_with_next: PrfKey) -> Self {
        ZeroShareContext {
            with_prev: PrfStream::new(key_with_prev),
            with_next: PrfStream::new(key_with_next),
        }
    }

    /// α_p = PRF(k_{prev,p}) − PRF(k_{p,next}); the three parties' masks sum to 0.
    pub fn next_zero_shares(&mut self, ring: Ring, n: usize) -> Vec<u64> {
        let a = self.with_prev.draw(ring, n);
        let b = self.with_next.draw(ring, n);
        a.into_iter().zip(b).map(|(a, b)| ring.sub(a, b)).collect()
    }

    /// XOR analogue used by boolean AND gates.
    pub fn next_bool_zero_shares(&mut self, ring: Ring, n: usize) -> Vec<u64> {
        let a = self.with_prev.draw(ring, n);
        let b = self.with_next.draw(ring, n);
        a.into_iter().zip(b).map(|(a, b)| a ^ b).collect()
    }

    pub fn draw_with_prev(&mut self, ring: Ring, n: usize) -> Vec<u64> {
        self.with_prev.draw(ring, n)
    }

    pub fn draw_with_next(&mut self, ring: Ring, n: usize) -> Vec<u64> {
        self.with_next.draw(ring, n)
    }

    /// (counter shared with prev, counter shared with next)
    pub fn counters(&self) -> (u64, u64) {
        (self.with_prev.counter(), self.with_next.counter())
    }
}
