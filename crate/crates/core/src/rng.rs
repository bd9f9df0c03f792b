//! Seeded random streams.
//!
//! Every independent unit of Monte-Carlo work (a channel pair, a transmitted
//! block, a construction worker) gets its own generator derived from the
//! experiment seed and a tuple of tags, so results never depend on how work
//! is scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Derive a generator for the stream identified by `tags` under `seed`.
pub fn stream(seed: u64, tags: &[u64]) -> StreamRng {
    let mut key = [0u8; 32];
    let mut state = splitmix64(seed);
    for &t in tags {
        state = splitmix64(state ^ splitmix64(t.wrapping_add(0x5851_f42d_4c95_7f2d)));
    }
    for chunk in key.chunks_mut(8) {
        state = splitmix64(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}
