//! Shared fixtures for the benchmarks.

use ddtree_core::rng::game_rng;
use ddtree_core::{Deal, GameParams};

/// `n` bridge deals drawn from the same per-game streams the estimators use.
pub fn bridge_deals(n: u64, seed: u64) -> Vec<Deal> {
    let params = GameParams::bridge();
    (0..n).map(|g| Deal::random(&params, &mut game_rng(seed, g))).collect()
}
