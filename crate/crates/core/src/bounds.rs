//! Closed-form complexity bounds for open-cards play, computed exactly.
//!
//! With `R` hands of `K` cards:
//!
//! * `f(k) = C(K,k)^R · (1 + R·Σ_{h=1}^{R-1} k^h)` bounds the positions in
//!   which one hand holds `k` cards and every other hand `k` or `k-1`;
//!   `f(0) = 1`.
//! * `f_p(k) = (K-k+1)·f(k)` adds the possible split of tricks already won.
//! * `Σ f_p(k)` bounds the state space; `Σ f(k)` bounds it when positions
//!   differing only in the score are identified.
//! * `K!^R` and `K!` bound the number of complete plays from above and below.
//! * `∏_r ∏_k s_rk!` is the per-deal lower bound from suit lengths.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::count::{binomial, factorial, sci_ratio, BigCount};
use crate::engine::{Deal, GameParams};
use crate::parallel::sharded_fold;
use crate::rng::game_rng;
use crate::stats::{render_ratio, MomentAccumulator};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("k = {k} outside 0..={max}")]
    OutOfRange { k: usize, max: usize },
    #[error("invalid shape table: {0}")]
    BadShape(String),
    #[error("shape enumeration exceeded the cap of {cap} shapes")]
    TooLarge { cap: u64 },
}

/// Default cap on per-hand shapes visited by [`expected_frank_bound_exact`].
pub const DEFAULT_SHAPE_CAP: u64 = 10_000_000;

fn check_k(params: &GameParams, k: usize) -> Result<(), BoundsError> {
    if k > params.cards_per_hand() {
        return Err(BoundsError::OutOfRange {
            k,
            max: params.cards_per_hand(),
        });
    }
    Ok(())
}

/// Positions where one hand holds `k` cards and each other hand `k` or `k-1`.
pub fn f(params: &GameParams, k: usize) -> Result<BigCount, BoundsError> {
    check_k(params, k)?;
    if k == 0 {
        return Ok(BigCount::one());
    }
    let r = params.hands();
    let subsets = binomial(params.cards_per_hand(), k).pow(r as u32);
    let kk = BigCount::from(k);
    let trick_choices: BigCount = (1..r as u32).map(|h| kk.pow(h)).sum();
    Ok(subsets * (BigCount::one() + trick_choices * r))
}

/// [`f`] scaled by the `K-k+1` possible trick splits.
pub fn f_p(params: &GameParams, k: usize) -> Result<BigCount, BoundsError> {
    let base = f(params, k)?;
    Ok(base * (params.cards_per_hand() - k + 1))
}

/// `Σ_{k=0}^{K} f_p(k)` with scores, `Σ f(k)` without.
pub fn state_space_upper_bound(params: &GameParams, with_scores: bool) -> BigCount {
    (0..=params.cards_per_hand())
        .map(|k| {
            if with_scores {
                f_p(params, k)
            } else {
                f(params, k)
            }
            .expect("k in range")
        })
        .sum()
}

/// `K!^R`: every card playable at every turn.
pub fn tree_size_upper_bound(params: &GameParams) -> BigCount {
    factorial(params.cards_per_hand()).pow(params.hands() as u32)
}

/// `K!`: only the leader ever has a choice.
pub fn tree_size_weak_lower_bound(params: &GameParams) -> BigCount {
    factorial(params.cards_per_hand())
}

/// Suit lengths per hand: `rows[r][k]` cards of suit `k` in hand `r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ShapeTable {
    rows: Vec<Vec<usize>>,
}

impl ShapeTable {
    /// Validates row sums against `K` and column sums against `NR`.
    pub fn new(params: &GameParams, rows: Vec<Vec<usize>>) -> Result<Self, BoundsError> {
        if rows.len() != params.hands() {
            return Err(BoundsError::BadShape(format!(
                "{} rows for {} hands",
                rows.len(),
                params.hands()
            )));
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != params.num_suits() {
                return Err(BoundsError::BadShape(format!(
                    "row {r} has {} entries for {} suits",
                    row.len(),
                    params.num_suits()
                )));
            }
            let total: usize = row.iter().sum();
            if total != params.cards_per_hand() {
                return Err(BoundsError::BadShape(format!(
                    "row {r} sums to {total}, expected {}",
                    params.cards_per_hand()
                )));
            }
        }
        for k in 0..params.num_suits() {
            let col: usize = rows.iter().map(|row| row[k]).sum();
            if col != params.ranks_per_suit() {
                return Err(BoundsError::BadShape(format!(
                    "suit {k} sums to {col}, expected {}",
                    params.ranks_per_suit()
                )));
            }
        }
        Ok(Self { rows })
    }

    pub fn from_deal(deal: &Deal, params: &GameParams) -> Self {
        Self {
            rows: deal.shape(params),
        }
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }
}

/// `∏_k s_k!` for one hand.
pub fn frank_hand_factor(lengths: &[usize]) -> BigCount {
    lengths.iter().map(|&s| factorial(s)).product()
}

/// `∏_r ∏_k s_rk!`, the number of plays in which no hand ever gets more
/// choice than following suit allows.
pub fn frank_lower_bound(shape: &ShapeTable) -> BigCount {
    shape.rows.iter().map(|row| frank_hand_factor(row)).product()
}

pub fn frank_lower_bound_for_deal(deal: &Deal, params: &GameParams) -> BigCount {
    frank_lower_bound(&ShapeTable::from_deal(deal, params))
}

/// Frank bound with machine-word arithmetic where it fits.
fn frank_fast(deal: &Deal, params: &GameParams, fact: &[u128]) -> Result<u128, BigCount> {
    let mut acc: u128 = 1;
    for hand in deal.hands() {
        for s in 0..params.num_suits() {
            let len = hand.in_suit(s, params).len();
            match acc.checked_mul(fact[len]) {
                Some(v) => acc = v,
                None => return Err(frank_lower_bound_for_deal(deal, params)),
            }
        }
    }
    Ok(acc)
}

/// An exact rational with a float rendering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactRatio {
    pub num: BigCount,
    pub den: BigCount,
}

impl ExactRatio {
    pub fn to_f64(&self) -> f64 {
        crate::count::ratio_to_f64(&self.num, &self.den)
    }

    pub fn sci(&self, sig: usize) -> String {
        sci_ratio(&self.num, &self.den, sig)
    }

    /// Reduced `p/q`, or `p` when integral.
    pub fn render(&self) -> String {
        render_ratio(&self.num, &self.den)
    }
}

/// Number of distinct deals, `(RK)! / (K!)^R`.
pub fn deal_count(params: &GameParams) -> BigCount {
    factorial(params.deck_size()) / factorial(params.cards_per_hand()).pow(params.hands() as u32)
}

/// Expected Frank bound over uniformly random deals, exactly.
///
/// Hands are filled in turn. For hand `r` with `rem_k` cards of suit `k`
/// still undealt, a suit-length vector `s` covers `∏_k C(rem_k, s_k)` card
/// choices, each contributing `∏_k s_k!`; the product of the two is the
/// falling factorial `rem_k! / (rem_k - s_k)!`. Subproblems depend only on
/// the multiset of remaining suit counts and are memoized on it. The final
/// weighted sum is divided by the number of deals.
///
/// `cap` bounds the number of per-hand shapes visited.
pub fn expected_frank_bound_exact(params: &GameParams, cap: u64) -> Result<ExactRatio, BoundsError> {
    frank_moment_exact(params, 1, cap)
}

/// `E[B^power]` for the Frank bound `B` of a uniformly random deal, exactly.
/// Same enumeration as [`expected_frank_bound_exact`] with each suit-length
/// factor raised to `power`.
pub fn frank_moment_exact(params: &GameParams, power: u32, cap: u64) -> Result<ExactRatio, BoundsError> {
    struct Search<'a> {
        params: &'a GameParams,
        memo: HashMap<(usize, Vec<usize>), BigCount>,
        falling: Vec<Vec<BigCount>>,
        visited: u64,
        cap: u64,
    }

    impl Search<'_> {
        fn weight(&mut self, hand: usize, rem: Vec<usize>) -> Result<BigCount, BoundsError> {
            let r = self.params.hands();
            if hand + 1 == r {
                // the last hand takes whatever is left
                self.tick()?;
                return Ok(rem.iter().map(|&x| self.falling[x][x].clone()).product());
            }
            let key = (hand, rem.clone());
            if let Some(v) = self.memo.get(&key) {
                return Ok(v.clone());
            }
            let mut total = BigCount::zero();
            let mut lengths = vec![0usize; rem.len()];
            self.compositions(hand, &rem, 0, self.params.cards_per_hand(), &mut lengths, &mut total)?;
            self.memo.insert(key, total.clone());
            Ok(total)
        }

        fn compositions(
            &mut self,
            hand: usize,
            rem: &[usize],
            suit: usize,
            left: usize,
            lengths: &mut Vec<usize>,
            total: &mut BigCount,
        ) -> Result<(), BoundsError> {
            if suit == rem.len() {
                if left != 0 {
                    return Ok(());
                }
                self.tick()?;
                let mut factor = BigCount::one();
                let mut next: Vec<usize> = Vec::with_capacity(rem.len());
                for (k, &s) in lengths.iter().enumerate() {
                    factor *= &self.falling[rem[k]][s];
                    next.push(rem[k] - s);
                }
                next.sort_unstable();
                let sub = self.weight(hand + 1, next)?;
                *total += factor * sub;
                return Ok(());
            }
            // suits after this one can absorb at most this many cards
            let room_after: usize = rem[suit + 1..].iter().sum();
            let lo = left.saturating_sub(room_after);
            let hi = rem[suit].min(left);
            for s in lo..=hi {
                lengths[suit] = s;
                self.compositions(hand, rem, suit + 1, left - s, lengths, total)?;
            }
            Ok(())
        }

        fn tick(&mut self) -> Result<(), BoundsError> {
            self.visited += 1;
            if self.visited > self.cap {
                return Err(BoundsError::TooLarge { cap: self.cap });
            }
            Ok(())
        }
    }

    let nr = params.ranks_per_suit();
    // falling[n][s] = C(n, s) * s!^power; for power 1 this is n! / (n - s)!
    let falling = (0..=nr)
        .map(|n| {
            (0..=n)
                .map(|s| binomial(n, s) * factorial(s).pow(power))
                .collect::<Vec<_>>()
        })
        .collect();
    let mut search = Search {
        params,
        memo: HashMap::new(),
        falling,
        visited: 0,
        cap,
    };
    let num = search.weight(0, vec![nr; params.num_suits()])?;
    Ok(ExactRatio {
        num,
        den: deal_count(params),
    })
}

/// Monte Carlo estimate of the expected Frank bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrankEstimate {
    pub seed: u64,
    pub moments: MomentAccumulator,
}

/// Averages the Frank bound over `n_deals` random deals; deal `i` draws from
/// stream `i` of `seed`, so the result is independent of `workers`.
pub fn expected_frank_bound_mc(params: &GameParams, n_deals: u64, seed: u64, workers: usize) -> FrankEstimate {
    let fact: Vec<u128> = (0..=params.ranks_per_suit())
        .map(|n| (1..=n as u128).try_fold(1u128, |a, i| a.checked_mul(i)).unwrap_or(u128::MAX))
        .collect();
    let moments = sharded_fold(
        n_deals,
        workers,
        MomentAccumulator::new,
        |acc, i| {
            let mut rng = game_rng(seed, i);
            let deal = Deal::random(params, &mut rng);
            match frank_fast(&deal, params, &fact) {
                Ok(x) => acc.push_u128(x),
                Err(big) => acc.push(&big),
            }
        },
        |a, b| a.merge(&b),
    );
    FrankEstimate { seed, moments }
}

/// Draws one deal and returns its Frank bound; used where a caller supplies its own generator.
pub fn sample_frank_bound<R: Rng + ?Sized>(params: &GameParams, rng: &mut R) -> BigCount {
    frank_lower_bound_for_deal(&Deal::random(params, rng), params)
}
