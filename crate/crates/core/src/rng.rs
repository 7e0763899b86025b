//! Seeded random streams.
//!
//! Every Monte Carlo task draws from its own ChaCha stream derived from the
//! master seed and a task index, so results do not depend on how tasks are
//! scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

pub const DEFAULT_SEED: u64 = 0x5EED;

pub type Rng = ChaCha12Rng;

pub fn stream(master: u64, task: u64) -> Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(master);
    rng.set_stream(task);
    rng
}

/// Task id for a labelled sub-experiment, stable across builds.
pub fn label_id(label: &str) -> u64 {
    // FNV-1a
    let mut h: u64 = 0xcbf29ce484222325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}
