//! Exhaustive enumeration for tiny parametrizations: exact leaf counts,
//! reachable-state counts, and a statistical check that the Knuth estimate
//! averages to the exact leaf count.

use std::collections::HashSet;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{frank_lower_bound_for_deal, tree_size_upper_bound};
use crate::count::{ratio_to_f64, BigCount};
use crate::engine::{for_each_deal, run_playout, Deal, EngineError, GameParams, PlayState};
use crate::estimator::degree_product;
use crate::rng::game_rng;
use crate::stats::MomentAccumulator;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Caps on exhaustive work.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationGuard {
    pub max_leaves: BigCount,
    pub max_states: u64,
}

impl Default for EnumerationGuard {
    fn default() -> Self {
        Self {
            max_leaves: BigCount::from(100_000_000u64),
            max_states: 10_000_000,
        }
    }
}

/// Canonical identity of a position. Two keys are equal exactly when the
/// remaining hands, the ordered trick, the leader (hence the player to move)
/// and, if included, the side scores agree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateKey {
    remaining: Vec<u64>,
    trick: Vec<(u8, u8, u8)>,
    leader: u8,
    scores: Option<[u32; 2]>,
}

impl StateKey {
    pub fn of(state: &PlayState, include_scores: bool) -> Self {
        Self {
            remaining: state.remaining().iter().map(|h| h.0).collect(),
            trick: state
                .trick()
                .iter()
                .map(|&(h, c)| (h as u8, c.suit, c.rank))
                .collect(),
            leader: state.leader() as u8,
            scores: include_scores.then(|| state.side_tricks()),
        }
    }
}

/// Number of complete play sequences from the opening position.
///
/// Fails with `GuardExceeded` when the deal's Frank bound or the running
/// count passes `guard.max_leaves`.
pub fn count_leaves(
    deal: &Deal,
    params: &GameParams,
    leader0: usize,
    guard: &EnumerationGuard,
) -> Result<BigCount, OracleError> {
    fn dfs(state: &PlayState, count: &mut u64, cap: u64) -> Result<(), OracleError> {
        if state.is_terminal() {
            *count += 1;
            if *count > cap {
                return Err(OracleError::GuardExceeded(format!("more than {cap} leaves")));
            }
            return Ok(());
        }
        for card in state.legal_moves()? {
            dfs(&state.apply_move(card)?, count, cap)?;
        }
        Ok(())
    }
    let start = PlayState::initial(params, deal, leader0)?;
    // The Frank bound never exceeds the leaf count, so it can reject early.
    if frank_lower_bound_for_deal(deal, params) > guard.max_leaves {
        return Err(OracleError::GuardExceeded(format!("more than {} leaves", guard.max_leaves)));
    }
    let cap = u64::try_from(&guard.max_leaves).unwrap_or(u64::MAX);
    let mut count = 0u64;
    dfs(&start, &mut count, cap)?;
    Ok(BigCount::from(count))
}

/// Whether [`count_leaves`] is guaranteed to finish under `guard` for any
/// deal of `params`.
pub fn leaves_within_guard(params: &GameParams, guard: &EnumerationGuard) -> bool {
    tree_size_upper_bound(params) <= guard.max_leaves
}

/// Distinct positions reachable from the opening position of one deal.
pub fn reachable_states(
    deal: &Deal,
    params: &GameParams,
    leader0: usize,
    include_scores: bool,
    guard: &EnumerationGuard,
) -> Result<HashSet<StateKey>, OracleError> {
    let start = PlayState::initial(params, deal, leader0)?;
    let mut seen = HashSet::new();
    let mut stack = vec![start];
    while let Some(state) = stack.pop() {
        if !seen.insert(StateKey::of(&state, include_scores)) {
            continue;
        }
        if seen.len() as u64 > guard.max_states {
            return Err(OracleError::GuardExceeded(format!(
                "more than {} states",
                guard.max_states
            )));
        }
        if state.is_terminal() {
            continue;
        }
        for card in state.legal_moves()? {
            stack.push(state.apply_move(card)?);
        }
    }
    Ok(seen)
}

/// Reachable-state counts over every deal of a family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReachableStates {
    pub deals: u64,
    pub include_scores: bool,
    /// Largest number of positions reachable from a single opening position.
    pub max_per_deal: u64,
    /// Smallest such number.
    pub min_per_deal: u64,
    /// Size of the union of all deals' reachable sets.
    pub family_union: u64,
}

/// Enumerates all deals of `params` and counts reachable positions.
pub fn count_reachable_states(
    params: &GameParams,
    leader0: usize,
    include_scores: bool,
    guard: &EnumerationGuard,
) -> Result<ReachableStates, OracleError> {
    let mut union: HashSet<StateKey> = HashSet::new();
    let mut out = ReachableStates {
        deals: 0,
        include_scores,
        max_per_deal: 0,
        min_per_deal: u64::MAX,
        family_union: 0,
    };
    let mut failure = None;
    for_each_deal(params, |deal| {
        if failure.is_some() {
            return;
        }
        match reachable_states(&deal, params, leader0, include_scores, guard) {
            Ok(set) => {
                out.deals += 1;
                out.max_per_deal = out.max_per_deal.max(set.len() as u64);
                out.min_per_deal = out.min_per_deal.min(set.len() as u64);
                union.extend(set);
                if union.len() as u64 > guard.max_states {
                    failure = Some(OracleError::GuardExceeded(format!(
                        "family union above {} states",
                        guard.max_states
                    )));
                }
            }
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    out.family_union = union.len() as u64;
    Ok(out)
}

/// Comparison of the mean Knuth estimate with the exact leaf count.
#[derive(Debug, Clone, PartialEq)]
pub struct UnbiasednessReport {
    pub exact_leaves: BigCount,
    pub moments: MomentAccumulator,
    pub sample_mean: f64,
    pub stderr: f64,
    /// `(mean - exact) / stderr`; 0 when both the deviation and the stderr vanish.
    pub z_score: f64,
}

impl UnbiasednessReport {
    pub fn passes(&self, z_max: f64) -> bool {
        self.z_score.abs() <= z_max
    }
}

/// Runs `n_playouts` uniform playouts of `deal` (playout `i` on stream `i`
/// of `seed`) and scores their mean Knuth estimate against [`count_leaves`].
pub fn verify_unbiasedness(
    deal: &Deal,
    params: &GameParams,
    leader0: usize,
    n_playouts: u64,
    seed: u64,
    guard: &EnumerationGuard,
) -> Result<UnbiasednessReport, OracleError> {
    let exact = count_leaves(deal, params, leader0, guard)?;
    let mut moments = MomentAccumulator::new();
    let mut degrees = vec![0u32; params.game_length()];
    for i in 0..n_playouts {
        let mut rng = game_rng(seed, i);
        run_playout(deal.hands(), params, leader0, &mut rng, |j, d, _| degrees[j] = d);
        moments.push(&degree_product(&degrees));
    }
    let n = BigCount::from(moments.n().max(1));
    let sum = moments.sum();
    let target = &exact * &n;
    // mean - exact as an exact fraction over n
    let (dev, negative) = if sum >= target {
        (&sum - &target, false)
    } else {
        (&target - &sum, true)
    };
    let deviation = ratio_to_f64(&dev, &n) * if negative { -1.0 } else { 1.0 };
    let stderr = moments.stderr();
    let z_score = if dev.is_zero() {
        0.0
    } else if stderr == 0.0 || stderr.is_nan() {
        deviation.signum() * f64::INFINITY
    } else {
        deviation / stderr
    };
    Ok(UnbiasednessReport {
        exact_leaves: exact,
        sample_mean: moments.mean(),
        stderr,
        z_score,
        moments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{frank_lower_bound_for_deal, state_space_upper_bound};
    use crate::count::factorial;
    use crate::engine::Card;
    use crate::rng::seeded;

    fn p(r: usize, k: usize, ns: usize, nr: usize) -> GameParams {
        GameParams::new(r, k, ns, nr, None).unwrap()
    }

    #[test]
    fn forced_play_has_one_leaf() {
        let params = p(4, 1, 1, 4);
        let deal = Deal::random(&params, &mut seeded(0));
        let g = EnumerationGuard::default();
        assert_eq!(count_leaves(&deal, &params, 0, &g).unwrap(), BigCount::from(1u32));
    }

    #[test]
    fn single_suit_is_full_tree() {
        for (r, k) in [(2, 3), (3, 2), (4, 3)] {
            let params = p(r, k, 1, r * k);
            let deal = Deal::random(&params, &mut seeded(1));
            let g = EnumerationGuard::default();
            assert_eq!(
                count_leaves(&deal, &params, 0, &g).unwrap(),
                factorial(k).pow(r as u32)
            );
        }
    }

    #[test]
    fn hand_enumerated_tree() {
        // hand 0: {s0r0, s1r0}; hand 1: {s0r1, s1r1}. Each lead forces the reply,
        // and the second trick is forced too: two complete plays when 0 leads.
        let params = p(2, 2, 2, 2);
        let deal = Deal::from_cards(
            &params,
            &[vec![Card::new(0, 0), Card::new(1, 0)], vec![Card::new(0, 1), Card::new(1, 1)]],
        )
        .unwrap();
        let g = EnumerationGuard::default();
        assert_eq!(count_leaves(&deal, &params, 0, &g).unwrap(), BigCount::from(2u32));
    }

    #[test]
    fn leaf_guard() {
        let params = p(4, 3, 1, 12);
        let deal = Deal::random(&params, &mut seeded(2));
        let g = EnumerationGuard {
            max_leaves: BigCount::from(100u32),
            ..Default::default()
        };
        assert!(matches!(count_leaves(&deal, &params, 0, &g), Err(OracleError::GuardExceeded(_))));
        assert!(!leaves_within_guard(&params, &g));
    }

    #[test]
    fn smallest_family_states() {
        // Deck {r0, r1}; either hand may hold the high card. From each opening
        // position: the start, the position after the lead, the end.
        let params = p(2, 1, 1, 2);
        let g = EnumerationGuard::default();
        let scoreless = count_reachable_states(&params, 0, false, &g).unwrap();
        assert_eq!(scoreless.deals, 2);
        assert_eq!(scoreless.max_per_deal, 3);
        // the two end positions differ in who would lead next
        assert_eq!(scoreless.family_union, 6);
        assert!(BigCount::from(scoreless.max_per_deal) <= state_space_upper_bound(&params, false));
        let scored = count_reachable_states(&params, 0, true, &g).unwrap();
        assert!(scoreless.max_per_deal <= scored.max_per_deal);
    }

    #[test]
    fn state_guard() {
        let params = p(4, 2, 2, 4);
        let g = EnumerationGuard {
            max_states: 50,
            ..Default::default()
        };
        assert!(matches!(
            count_reachable_states(&params, 0, true, &g),
            Err(OracleError::GuardExceeded(_))
        ));
    }

    #[test]
    fn sandwich_on_small_family() {
        let params = p(2, 3, 2, 3);
        let g = EnumerationGuard::default();
        let upper = tree_size_upper_bound(&params);
        for_each_deal(&params, |deal| {
            let leaves = count_leaves(&deal, &params, 0, &g).unwrap();
            assert!(frank_lower_bound_for_deal(&deal, &params) <= leaves);
            assert!(leaves <= upper);
        });
    }

    #[test]
    fn degenerate_unbiasedness() {
        let g = EnumerationGuard::default();
        let k1 = p(4, 1, 2, 2);
        let deal = Deal::random(&k1, &mut seeded(3));
        let rep = verify_unbiasedness(&deal, &k1, 0, 100, 1, &g).unwrap();
        assert_eq!(rep.z_score, 0.0);
        assert_eq!(rep.stderr, 0.0);
        assert_eq!(rep.sample_mean, 1.0);

        let single = p(4, 3, 1, 12);
        let deal = Deal::random(&single, &mut seeded(3));
        let rep = verify_unbiasedness(&deal, &single, 0, 100, 1, &g).unwrap();
        assert_eq!(rep.exact_leaves, BigCount::from(1296u32));
        assert_eq!(rep.moments.min(), rep.moments.max());
        assert_eq!(rep.z_score, 0.0);
        assert!(rep.passes(3.0));
    }

    #[test]
    fn keys_distinguish_scores_only_when_asked() {
        let params = p(2, 2, 1, 4);
        let deal = Deal::from_cards(
            &params,
            &[vec![Card::new(0, 0), Card::new(0, 3)], vec![Card::new(0, 1), Card::new(0, 2)]],
        )
        .unwrap();
        let s = PlayState::initial(&params, &deal, 0).unwrap();
        let a = s.apply_move(Card::new(0, 0)).unwrap().apply_move(Card::new(0, 1)).unwrap();
        let b = s.apply_move(Card::new(0, 3)).unwrap().apply_move(Card::new(0, 2)).unwrap();
        // different cards remain, so the keys differ regardless of score
        assert_ne!(StateKey::of(&a, false), StateKey::of(&b, false));
        assert_eq!(StateKey::of(&a, false), StateKey::of(&a.clone(), false));
        assert_ne!(StateKey::of(&a, true).scores, StateKey::of(&a, false).scores);
    }
}
