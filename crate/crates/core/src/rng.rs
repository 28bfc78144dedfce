//! Seed derivation.
//!
//! Every randomized operation takes an explicit 64-bit seed. Independent
//! sub-streams are derived with the SplitMix64 finalizer:
//!
//! ```text
//! mix(seed, index) = splitmix64(seed ^ splitmix64(index + GOLDEN))
//! ```
//!
//! and the derived value seeds a ChaCha8 generator. Because a stream depends
//! only on `(seed, index path)`, trials can run in any order or on any thread
//! and still see the same random bits.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator type used for all randomized operations.
pub type StreamRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the seed of sub-stream `index` of `seed`.
#[inline]
pub fn mix(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(GOLDEN)))
}

/// Fold [`mix`] over a path of stream indices, e.g. `(trial, algorithm)`.
pub fn derive(seed: u64, path: &[u64]) -> u64 {
    path.iter().fold(seed, |s, &i| mix(s, i))
}

/// A generator for the given seed.
pub fn stream(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}
