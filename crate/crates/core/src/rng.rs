//! Seeded, stream-splittable random number generation.
//!
//! Every randomized operation takes an explicit [`RngSeed`]; there is no
//! global generator. A seed is a `(seed, stream)` pair mapped onto a ChaCha12
//! key and stream id, so identical pairs give identical sequences on every
//! platform.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Seed plus sub-stream selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RngSeed {
    pub seed: u64,
    pub stream: u64,
}

impl RngSeed {
    pub const fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// Builds the generator for this seed.
    pub fn rng(&self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    /// Derives the `k`-th child stream. Children of distinct parents or
    /// distinct `k` land on distinct streams with overwhelming probability.
    pub fn substream(&self, k: u64) -> Self {
        Self {
            seed: self.seed,
            stream: splitmix64(self.stream ^ splitmix64(k.wrapping_add(0x9e37_79b9_7f4a_7c15))),
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform variate on the open interval (0, 1): 53 random bits, offset by
/// half an ulp so neither endpoint is reachable.
#[inline]
pub fn open01<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}
