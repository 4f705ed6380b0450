//! Seed derivation for independent, reproducible random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Combine a parent seed with a sequence of stream labels.
pub fn derive(parent: u64, labels: &[u64]) -> u64 {
    labels
        .iter()
        .fold(mix64(parent), |acc, &l| mix64(acc ^ mix64(l)))
}

pub fn rng(parent: u64, labels: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(parent, labels))
}

// Stream labels.
pub const STREAM_SCENARIO: u64 = 1;
pub const STREAM_FADING: u64 = 2;
pub const STREAM_RESTART: u64 = 3;
pub const STREAM_RANDOM_SOLVER: u64 = 4;
pub const STREAM_KMEANS: u64 = 5;
pub const STREAM_TRIAL: u64 = 6;
