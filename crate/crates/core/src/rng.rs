//! Counter-based random streams.
//!
//! Every trial draws from its own ChaCha8 stream, keyed by the base seed and
//! a label (for example the sample size) and selected by the trial number.
//! Nothing is shared between trials, so results do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TrialRng = ChaCha8Rng;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generator for trial `trial` of the stream family `(seed, label)`.
pub fn derive(seed: u64, label: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(mix64(seed ^ mix64(label)));
    rng.set_stream(trial);
    rng
}

/// Generator for a single-shot computation keyed only by the seed.
pub fn from_seed(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}
