//! Seeded, splittable random streams.
//!
//! Everything random in the crate draws from ChaCha8, which is counter based:
//! `(seed, stream)` pins the whole sequence, so trial `t` of an experiment
//! sees the same numbers whichever thread runs it and in whatever order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Stream tags separating independent uses of one trial's randomness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Training = 1,
    Test = 2,
    TestLabels = 3,
    Misc = 4,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generator seeded directly from a user seed.
pub fn seeded(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// Independent stream for `(master_seed, trial, purpose)`.
pub fn stream(master_seed: u64, trial: u64, purpose: Purpose) -> Rng {
    let mut rng = Rng::seed_from_u64(splitmix64(master_seed ^ splitmix64(purpose as u64)));
    rng.set_stream(trial);
    rng
}

/// Derives a child seed, e.g. a dataset seed for one trial.
pub fn derive_seed(master_seed: u64, trial: u64, purpose: Purpose) -> u64 {
    splitmix64(splitmix64(master_seed ^ splitmix64(purpose as u64)).wrapping_add(trial))
}
