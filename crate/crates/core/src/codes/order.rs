//! Seeded bijections on `[0, size)` used as visiting orders.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ROUNDS: usize = 4;

/// A keyed balanced Feistel network on `2·half_bits` bits, restricted to
/// `[0, size)` by cycle walking. Constant memory; `apply` is a bijection on
/// the domain.
#[derive(Clone, Debug)]
pub struct FeistelOrder {
    size: u64,
    half_bits: u32,
    keys: [u64; ROUNDS],
}

impl FeistelOrder {
    /// Keys come from ChaCha stream `stream` of `seed`, so distinct streams
    /// give independent orders.
    pub fn new(size: u64, seed: u64, stream: u64) -> Self {
        let bits = 64 - size.saturating_sub(1).leading_zeros();
        let half_bits = bits.div_ceil(2).max(1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let mut keys = [0u64; ROUNDS];
        for k in &mut keys {
            *k = rng.next_u64();
        }
        FeistelOrder {
            size,
            half_bits,
            keys,
        }
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    fn round(x: u64, key: u64) -> u64 {
        // murmur3 finaliser
        let mut h = x ^ key;
        h ^= h >> 33;
        h = h.wrapping_mul(0xff51_afd7_ed55_8ccd);
        h ^= h >> 33;
        h = h.wrapping_mul(0xc4ce_b9fe_1a85_ec53);
        h ^ (h >> 33)
    }

    fn permute(&self, x: u64) -> u64 {
        let mask = (1u64 << self.half_bits) - 1;
        let mut left = x >> self.half_bits;
        let mut right = x & mask;
        for &k in &self.keys {
            let next = left ^ (Self::round(right, k) & mask);
            left = right;
            right = next;
        }
        (left << self.half_bits) | right
    }

    /// Image of `x`, which must be `< size`.
    pub fn apply(&self, x: u64) -> u64 {
        debug_assert!(x < self.size);
        let mut y = self.permute(x);
        while y >= self.size {
            y = self.permute(y);
        }
        y
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.size).map(move |x| self.apply(x))
    }
}
