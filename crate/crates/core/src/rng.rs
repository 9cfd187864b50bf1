//! Reproducible random streams.
//!
//! Every Monte Carlo draw gets its own ChaCha stream keyed by `(seed, index)`,
//! so a draw can be replayed in isolation and results do not depend on how
//! work is split across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

pub type StreamRng = ChaCha12Rng;

/// Independent stream for draw `index` under master `seed`.
pub fn stream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs `f` once per draw index in parallel and returns results ordered by index.
pub fn par_draws<T, F>(seed: u64, draws: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut StreamRng, usize) -> T + Sync + Send,
{
    (0..draws)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i as u64);
            f(&mut rng, i)
        })
        .collect()
}

/// Derives a sub-seed so that different experiments under one master seed
/// never share streams.
pub fn subseed(seed: u64, tag: &str) -> u64 {
    // FNV-1a over the tag, mixed with the seed through splitmix64.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = seed ^ h;
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
