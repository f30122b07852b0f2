//! Counter-based random numbers: every draw is a pure function of
//! `(seed, stream, index)`, so results do not depend on evaluation order or
//! thread scheduling.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uniform sample in `[0, 1)` addressed by `(seed, stream, index)`.
pub fn uniform(seed: u64, stream: u64, index: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(u128::from(index) * 2);
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Index drawn from the probability vector `weights` by inverse CDF.
pub fn categorical(weights: &[f64], seed: u64, stream: u64, index: u64) -> usize {
    let total: f64 = weights.iter().sum();
    let target = uniform(seed, stream, index) * total;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (k, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        last_positive = k;
        acc += w;
        if target < acc {
            return k;
        }
    }
    last_positive
}

/// A sequential generator seeded from the counter space, for algorithms that
/// just need a stream of randomness (restarts, bootstrap resampling).
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
