//! Deterministic sampling. The generator is written out here rather than
//! pulled from a crate so the stream is pinned by this repository alone:
//! a report's (spec, mode, seed) triple must reproduce forever.

use num_bigint::BigUint;

/// splitmix64 (Steele, Lea, Vigna): one 64-bit state word, an additive
/// Weyl step, and two xor-multiply mixes. Small, fast, and well past good
/// enough for drawing test tuples.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Draw below an arbitrary bound: take `ceil(bits(bound) / 64)` output
    /// words, compose them little-endian, reduce modulo the bound. The modulo
    /// bias is at most `bound / 2^64` relative and irrelevant for testing;
    /// the procedure is platform-independent and easy to re-implement.
    pub fn next_below(&mut self, bound: &BigUint) -> BigUint {
        assert!(bound > &BigUint::from(0u32), "bound must be positive");
        let words = bound.bits().div_ceil(64).max(1);
        let mut bytes = Vec::with_capacity(words as usize * 8);
        for _ in 0..words {
            bytes.extend_from_slice(&self.next_u64().to_le_bytes());
        }
        BigUint::from_bytes_le(&bytes) % bound
    }
}
