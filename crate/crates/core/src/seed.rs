//! Counter-based expansion of one master seed into independent streams.
//!
//! Stream `s` of master seed `m` is ChaCha8 keyed by `seed_from_u64(m)` with
//! its 64-bit stream id set to `s`. Trials use `s = trial index`; auxiliary
//! computations (reference estimates, Toeplitz draws) use ids counted down
//! from `u64::MAX` so they never collide with trial indices.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng as StreamRng;

/// Stream id for auxiliary draw `n` (0, 1, …).
pub const fn aux_stream(n: u64) -> u64 {
    u64::MAX - n
}

pub fn stream_rng(master: u64, stream: u64) -> StreamRng {
    let mut rng = StreamRng::seed_from_u64(master);
    rng.set_stream(stream);
    rng
}

/// RNG private to trial `index`; independent of how trials are scheduled.
pub fn trial_rng(master: u64, index: u64) -> StreamRng {
    stream_rng(master, index)
}
