//! Seeding rules for reproducible Monte Carlo runs.
//!
//! Every game gets its own ChaCha8 stream: the master seed is expanded with
//! `seed_from_u64` and the game index selects the stream via `set_stream`.
//! A game's random numbers therefore depend only on `(master_seed, index)`,
//! never on which worker ran it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used throughout the crate.
pub type GameRng = ChaCha8Rng;

/// Generator for game number `index` under `master_seed`.
pub fn game_rng(master_seed: u64, index: u64) -> GameRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Generator for standalone uses (a single deal, a single verification run).
pub fn seeded(seed: u64) -> GameRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Clamp a worker count request to something usable.
pub(crate) fn effective_workers(requested: usize, jobs: u64) -> usize {
    requested.max(1).min(jobs.max(1) as usize)
}
