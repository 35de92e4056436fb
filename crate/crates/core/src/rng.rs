//! Seeding and stream-split rule.
//!
//! Every random run is driven by a ChaCha8 generator. A trial with index `k`
//! under base seed `s` uses seed `s.wrapping_add(k)` on stream 0. Auxiliary
//! randomness that must not perturb the main sequence (for example the choice
//! of tracked vertices) uses the same seed on stream 1.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub const MAIN_STREAM: u64 = 0;
pub const AUX_STREAM: u64 = 1;

pub fn trial_seed(seed_base: u64, trial: u64) -> u64 {
    seed_base.wrapping_add(trial)
}

pub fn main_rng(seed: u64) -> Rng {
    stream_rng(seed, MAIN_STREAM)
}

pub fn stream_rng(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
