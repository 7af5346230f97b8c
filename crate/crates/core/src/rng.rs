//! Seeded, counter-based randomness with one independent stream per round.
//!
//! Every round draws from `ChaCha20(seed)` positioned on stream `index`, so a
//! round's randomness depends only on `(seed, index)` and never on which
//! thread executed it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type RoundRng = ChaCha20Rng;

/// Generator for round `index` of a run seeded with `seed`.
pub fn round_rng(seed: u64, index: u64) -> RoundRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
