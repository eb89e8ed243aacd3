//! Reproducible random streams.
//!
//! Every random draw in the crate comes from a [`ChaCha8Rng`] seeded by
//! [`derive_seed`], which hashes a master seed together with a path of
//! indices (sweep point, trial, ...). A trial therefore sees the same stream
//! no matter which worker thread runs it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes `master` with an index path into an independent 64-bit seed.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(master), |acc, &i| splitmix64(acc ^ splitmix64(i)))
}

/// The stream for `path` under `master`.
pub fn stream(master: u64, path: &[u64]) -> StreamRng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, path))
}
