//! Seed derivation for reproducible, schedule-independent randomness.
//!
//! Every random decision in the crate is drawn from a ChaCha stream whose key
//! is derived from a root seed and a short list of labels (phase, iteration,
//! tuple index, ...). Two runs with the same root seed therefore make the same
//! decisions no matter in which order the labelled work items are processed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds `labels` into `root` to obtain an independent-looking child seed.
pub fn derive_seed(root: u64, labels: &[u64]) -> u64 {
    let mut acc = mix64(root ^ 0x9e37_79b9_7f4a_7c15);
    for (i, &label) in labels.iter().enumerate() {
        acc = mix64(acc ^ mix64(label.wrapping_add((i as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15))));
    }
    acc
}

/// A ChaCha8 stream keyed by `root` and `labels`.
pub fn stream(root: u64, labels: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(root, labels))
}

/// Keyed pseudorandom function `(key, x) -> u64`.
#[inline]
pub fn prf(key: u64, x: u64) -> u64 {
    mix64(mix64(key ^ 0xd6e8_feb8_6659_fd93).wrapping_add(x.wrapping_mul(0x9e37_79b9_7f4a_7c15)) ^ key)
}

/// Stream labels used by the estimator; kept here so the namespaces never collide.
pub mod label {
    pub const EXACT: u64 = 1;
    pub const SPARSIFY_HASH: u64 = 2;
    pub const SPARSIFY_COLOR: u64 = 3;
    pub const COARSE: u64 = 4;
    pub const IMPORTANCE: u64 = 5;
    pub const BRUTE: u64 = 6;
    pub const GENERATOR: u64 = 7;
}
