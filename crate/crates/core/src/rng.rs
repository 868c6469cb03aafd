//! Seeded random streams.
//!
//! Every sampler in the crate draws from `ChaCha8Rng` seeded with a 64-bit
//! seed and switched to a numbered stream. Monte Carlo loops assign stream
//! `b` to sample batch `b` (batches of [`BATCH`] samples), so results depend
//! only on the seed and the sample count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Samples per stream in batched Monte Carlo loops.
pub const BATCH: u64 = 4096;

pub fn stream(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derives an independent seed from a parent seed and a path of labels
/// (splitmix64 finalizer over each component).
pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    let mut x = seed;
    for &p in path {
        x = mix(x ^ mix(p.wrapping_add(0x9e37_79b9_7f4a_7c15)));
    }
    x
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Batch sizes for `samples` total samples: full batches then a remainder.
pub fn batches(samples: u64) -> impl Iterator<Item = (u64, u64)> {
    let n = samples.div_ceil(BATCH);
    (0..n).map(move |b| (b, BATCH.min(samples - b * BATCH)))
}
