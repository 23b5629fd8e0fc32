//! Deterministic, splittable random streams.
//!
//! Every randomized operation takes an [`RngHandle`] naming one stream of a
//! counter-based generator. Identical `(master_seed, stream_index)` pairs
//! always produce identical draws, so trials can run in any order or in
//! parallel without changing results.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Identifies one reproducible random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngHandle {
    master_seed: u64,
    stream_index: u64,
}

impl RngHandle {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Same master seed, different stream index.
    pub fn with_stream(self, stream_index: u64) -> Self {
        Self {
            master_seed: self.master_seed,
            stream_index,
        }
    }

    /// Child handle derived by hashing this handle's identity. Children of
    /// distinct parents live in disjoint stream families, so nested splits
    /// (per trial, per attempt) never share draws.
    pub fn substream(self, k: u64) -> Self {
        Self {
            master_seed: mix64(self.master_seed ^ mix64(self.stream_index.wrapping_add(GOLDEN))),
            stream_index: k,
        }
    }

    /// Instantiate the generator positioned at this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
