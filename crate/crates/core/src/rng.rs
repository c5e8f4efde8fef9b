//! Seed handling.
//!
//! Every randomized operation takes an explicit `u64` seed and builds a
//! [`ChaCha8Rng`] from it. ChaCha8 output is specified independently of
//! platform and crate version, so a seed reproduces the same draws everywhere.
//!
//! Independent streams are split off a parent seed by name with
//! [`derive_seed`]: the label is hashed (FNV-1a) and mixed with the parent
//! through SplitMix64. Generators, augmentation and training therefore draw
//! from unrelated streams even when they share an experiment seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Named child seed of `parent`.
pub fn derive_seed(parent: u64, label: &str) -> u64 {
    splitmix64(parent ^ splitmix64(fnv1a(label)))
}

/// Child seed for the `index`-th member of a named family (e.g. graph #17).
pub fn derive_indexed(parent: u64, label: &str, index: u64) -> u64 {
    splitmix64(derive_seed(parent, label).wrapping_add(splitmix64(index)))
}
