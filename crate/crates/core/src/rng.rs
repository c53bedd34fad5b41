//! Reproducible random streams.
//!
//! Every simulation draws from a ChaCha8 stream. ChaCha is a counter-based
//! generator: the output at position `i` depends only on the key and `i`, so
//! a replica's stream never depends on how replicas were scheduled. Replica
//! `r` of a run with master seed `m` is keyed by [`mix`]`(m, r)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used by all simulators.
pub type WalkRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of replica `replica` from a master seed.
pub fn mix(master_seed: u64, replica: u64) -> u64 {
    splitmix64(master_seed ^ splitmix64(replica.wrapping_mul(GOLDEN).wrapping_add(1)))
}

/// A generator keyed directly by `seed`.
pub fn seeded(seed: u64) -> WalkRng {
    let mut key = [0u8; 32];
    let mut state = seed;
    for chunk in key.chunks_exact_mut(8) {
        state = splitmix64(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    WalkRng::from_seed(key)
}

/// The generator of replica `replica` under `master_seed`.
pub fn replica_rng(master_seed: u64, replica: u64) -> WalkRng {
    seeded(mix(master_seed, replica))
}
