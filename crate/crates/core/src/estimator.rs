//! Monte Carlo playout experiments: per-trick branching profiles and
//! unbiased tree-size estimates.
//!
//! One game is one random deal followed by one (or `playouts_per_deal`)
//! uniformly random playouts. Game `g` draws everything from stream `g` of
//! the master seed, see [`crate::rng`].

use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::count::BigCount;
use crate::engine::{run_playout, Deal, EngineError, GameParams, PlayoutTrace};
use crate::parallel::sharded_fold;
use crate::rng::{game_rng, GameRng};
use crate::stats::{MomentAccumulator, MomentSummary};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EstimatorError {
    #[error("trace has {found} of {expected} positions")]
    IncompleteTrace { expected: usize, found: usize },
    #[error("need at least {min} games, got {got}")]
    TooFewGames { min: u64, got: u64 },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Trump setting of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[serde(rename = "nt")]
    NoTrump,
    Trump,
}

impl Mode {
    /// Applies the mode to `params`. Trump games keep an explicit trump suit
    /// from `params` and otherwise use suit 0.
    pub fn apply(self, params: &GameParams) -> GameParams {
        match self {
            Mode::NoTrump => params.with_trump(None),
            Mode::Trump => params.with_trump(Some(params.trump().unwrap_or(0))),
        }
        .expect("suit 0 always exists")
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::NoTrump => "nt",
            Mode::Trump => "trump",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nt" | "notrump" | "no-trump" => Ok(Mode::NoTrump),
            "trump" => Ok(Mode::Trump),
            other => Err(format!("unknown mode '{other}' (expected nt or trump)")),
        }
    }
}

/// Product of all branching degrees along a complete playout: the Knuth
/// estimate of the number of leaves.
pub fn knuth_estimate(trace: &PlayoutTrace, params: &GameParams) -> Result<BigCount, EstimatorError> {
    if trace.degrees.len() != params.game_length() {
        return Err(EstimatorError::IncompleteTrace {
            expected: params.game_length(),
            found: trace.degrees.len(),
        });
    }
    Ok(degree_product(&trace.degrees))
}

/// Exact product of `degrees`, multiplying in machine words between spills.
pub fn degree_product(degrees: &[u32]) -> BigCount {
    match degree_product_u128(degrees) {
        Some(x) => BigCount::from(x),
        None => {
            let mut acc = BigCount::one();
            let mut word: u64 = 1;
            for &d in degrees {
                match word.checked_mul(d as u64) {
                    Some(w) => word = w,
                    None => {
                        acc *= word;
                        word = d as u64;
                    }
                }
            }
            acc * word
        }
    }
}

#[inline]
fn degree_product_u128(degrees: &[u32]) -> Option<u128> {
    degrees.iter().try_fold(1u128, |acc, &d| acc.checked_mul(d as u128))
}

/// Exact per-trick sums of follower branching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct TrickMoments {
    /// Games contributing.
    pub n: u64,
    /// Σ over games of the summed follower degrees in this trick.
    pub sum: u64,
    /// Σ of squares of those per-game sums.
    pub sum_sq: u128,
}

/// Mean follower branching for each trick.
///
/// For game `p` and trick `n`, `deg_p(n)` is the average number of legal
/// moves over the `R-1` positions after the lead. The profile reports the
/// mean of `deg_p(n)` over games with its standard error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchingProfile {
    pub hands: usize,
    pub tricks: Vec<TrickMoments>,
}

/// One rendered profile row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileRow {
    pub trick: usize,
    pub avg_moves: f64,
    pub stderr: f64,
    pub n: u64,
}

impl BranchingProfile {
    pub fn new(params: &GameParams) -> Self {
        Self {
            hands: params.hands(),
            tricks: vec![TrickMoments::default(); params.cards_per_hand()],
        }
    }

    /// Adds one complete degree sequence.
    #[inline]
    pub fn record(&mut self, degrees: &[u32]) {
        let r = self.hands;
        for (trick, chunk) in self.tricks.iter_mut().zip(degrees.chunks_exact(r)) {
            let s: u64 = chunk[1..].iter().map(|&d| d as u64).sum();
            trick.n += 1;
            trick.sum += s;
            trick.sum_sq += (s as u128) * (s as u128);
        }
    }

    pub fn merge(&mut self, other: &BranchingProfile) {
        for (a, b) in self.tricks.iter_mut().zip(&other.tricks) {
            a.n += b.n;
            a.sum += b.sum;
            a.sum_sq += b.sum_sq;
        }
    }

    /// Mean of `deg_p(n)` for trick `n` (1-based).
    pub fn mean(&self, trick: usize) -> f64 {
        let t = &self.tricks[trick - 1];
        t.sum as f64 / (t.n as f64 * (self.hands - 1) as f64)
    }

    /// Standard error of [`BranchingProfile::mean`]; NaN for fewer than two games.
    pub fn stderr(&self, trick: usize) -> f64 {
        let t = &self.tricks[trick - 1];
        if t.n < 2 {
            return f64::NAN;
        }
        let n = t.n as f64;
        // exact numerator n·Σs² − (Σs)² before converting
        let num = (t.n as u128 * t.sum_sq) - (t.sum as u128) * (t.sum as u128);
        let var_sum = num as f64 / (n * (n - 1.0));
        let f = (self.hands - 1) as f64;
        (var_sum / n).sqrt() / f
    }

    pub fn rows(&self) -> Vec<ProfileRow> {
        (1..=self.tricks.len())
            .map(|trick| ProfileRow {
                trick,
                avg_moves: self.mean(trick),
                stderr: self.stderr(trick),
                n: self.tricks[trick - 1].n,
            })
            .collect()
    }
}

/// Shared experiment settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunSpec {
    pub games: u64,
    pub playouts_per_deal: u32,
    pub leader: usize,
    pub seed: u64,
    pub workers: usize,
}

impl RunSpec {
    pub fn new(games: u64, seed: u64) -> Self {
        Self {
            games,
            playouts_per_deal: 1,
            leader: 0,
            seed,
            workers: 1,
        }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn leader(mut self, leader: usize) -> Self {
        self.leader = leader;
        self
    }

    pub fn playouts_per_deal(mut self, n: u32) -> Self {
        self.playouts_per_deal = n.max(1);
        self
    }

    fn check(&self, params: &GameParams) -> Result<(), EstimatorError> {
        if self.leader >= params.hands() {
            return Err(EngineError::BadLeader {
                leader: self.leader,
                hands: params.hands(),
            }
            .into());
        }
        Ok(())
    }
}

/// Runs every playout of game `g`, handing each degree sequence to `visit`.
#[inline]
fn play_game(
    params: &GameParams,
    spec: &RunSpec,
    g: u64,
    degrees: &mut [u32],
    mut visit: impl FnMut(&[u32], &Deal, &GameRng),
) {
    let mut rng = game_rng(spec.seed, g);
    let deal = Deal::random(params, &mut rng);
    for _ in 0..spec.playouts_per_deal {
        run_playout(deal.hands(), params, spec.leader, &mut rng, |i, d, _| degrees[i] = d);
        visit(degrees, &deal, &rng);
    }
}

/// Per-trick branching profile over `spec.games` random games.
pub fn branching_profile(params: &GameParams, spec: &RunSpec) -> Result<BranchingProfile, EstimatorError> {
    spec.check(params)?;
    if spec.games < 1 {
        return Err(EstimatorError::TooFewGames { min: 1, got: spec.games });
    }
    let len = params.game_length();
    Ok(sharded_fold(
        spec.games,
        spec.workers,
        || (BranchingProfile::new(params), vec![0u32; len]),
        |(profile, buf), g| play_game(params, spec, g, buf, |d, _, _| profile.record(d)),
        |(a, _), (b, _)| a.merge(&b),
    )
    .0)
}

/// Branching profiles for no-trump and trump play of the same deals.
///
/// Both modes replay game `g` from identical generator states, so lead and
/// follow choices coincide until the trick winners first differ; trick 1 is
/// always identical.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairedProfile {
    pub nt: BranchingProfile,
    pub trump: BranchingProfile,
}

pub fn paired_trump_nt_profile(params: &GameParams, spec: &RunSpec) -> Result<PairedProfile, EstimatorError> {
    spec.check(params)?;
    if spec.games < 1 {
        return Err(EstimatorError::TooFewGames { min: 1, got: spec.games });
    }
    let nt = Mode::NoTrump.apply(params);
    let tr = Mode::Trump.apply(params);
    let len = params.game_length();
    let (nt_profile, tr_profile, _) = sharded_fold(
        spec.games,
        spec.workers,
        || (BranchingProfile::new(params), BranchingProfile::new(params), vec![0u32; len]),
        |(a, b, buf), g| {
            let mut rng = game_rng(spec.seed, g);
            let deal = Deal::random(params, &mut rng);
            for _ in 0..spec.playouts_per_deal {
                let mut twin = rng.clone();
                run_playout(deal.hands(), &nt, spec.leader, &mut rng, |i, d, _| buf[i] = d);
                a.record(buf);
                run_playout(deal.hands(), &tr, spec.leader, &mut twin, |i, d, _| buf[i] = d);
                b.record(buf);
            }
        },
        |(a, b, _), (c, d, _)| {
            a.merge(&c);
            b.merge(&d);
        },
    );
    Ok(PairedProfile {
        nt: nt_profile,
        trump: tr_profile,
    })
}

/// Tree-size estimate over random games.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeSizeReport {
    pub mode: Option<Mode>,
    pub seed: u64,
    pub workers: usize,
    pub moments: MomentAccumulator,
}

impl TreeSizeReport {
    pub fn summary(&self) -> MomentSummary {
        self.moments.summary()
    }
}

/// Averages the Knuth estimate over `spec.games` games (times playouts per deal).
pub fn estimate_tree_size(params: &GameParams, spec: &RunSpec) -> Result<TreeSizeReport, EstimatorError> {
    spec.check(params)?;
    if spec.games < 2 && spec.playouts_per_deal < 2 {
        return Err(EstimatorError::TooFewGames { min: 2, got: spec.games });
    }
    let len = params.game_length();
    let (moments, _) = sharded_fold(
        spec.games,
        spec.workers,
        || (MomentAccumulator::new(), vec![0u32; len]),
        |(acc, buf), g| {
            play_game(params, spec, g, buf, |d, _, _| match degree_product_u128(d) {
                Some(x) => acc.push_u128(x),
                None => acc.push(&degree_product(d)),
            })
        },
        |(a, _), (b, _)| a.merge(&b),
    );
    Ok(TreeSizeReport {
        mode: Some(if params.trump().is_some() { Mode::Trump } else { Mode::NoTrump }),
        seed: spec.seed,
        workers: spec.workers,
        moments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{tree_size_upper_bound, tree_size_weak_lower_bound};
    use crate::count::factorial;
    use crate::engine::random_playout;
    use crate::rng::seeded;

    #[test]
    fn knuth_estimate_basics() {
        let k1 = GameParams::new(4, 1, 2, 2, None).unwrap();
        let mut rng = seeded(1);
        let deal = Deal::random(&k1, &mut rng);
        let t = random_playout(&deal, &k1, 0, &mut rng);
        assert_eq!(knuth_estimate(&t, &k1).unwrap(), BigCount::one());

        let single = GameParams::new(4, 13, 1, 52, None).unwrap();
        let deal = Deal::random(&single, &mut rng);
        let t = random_playout(&deal, &single, 0, &mut rng);
        assert_eq!(knuth_estimate(&t, &single).unwrap(), factorial(13).pow(4));

        let mut short = t.clone();
        short.degrees.pop();
        assert_eq!(
            knuth_estimate(&short, &single),
            Err(EstimatorError::IncompleteTrace { expected: 52, found: 51 })
        );
    }

    #[test]
    fn bridge_estimates_within_bounds() {
        let p = GameParams::bridge();
        let lo = tree_size_weak_lower_bound(&p);
        let hi = tree_size_upper_bound(&p);
        let mut rng = seeded(17);
        for _ in 0..200 {
            let deal = Deal::random(&p, &mut rng);
            let t = random_playout(&deal, &p, 0, &mut rng);
            let x = knuth_estimate(&t, &p).unwrap();
            assert!(lo <= x && x <= hi);
            let leaders: u64 = t.degrees.iter().step_by(4).map(|&d| d as u64).product();
            assert_eq!(BigCount::from(leaders), lo);
        }
    }

    #[test]
    fn degree_product_spills() {
        let d: Vec<u32> = (0..52).map(|i| 13 - i / 4).collect();
        assert_eq!(degree_product(&d), factorial(13).pow(4));
        assert_eq!(degree_product(&[]), BigCount::one());
    }

    #[test]
    fn profile_tail_and_range() {
        let p = GameParams::bridge();
        let prof = branching_profile(&p, &RunSpec::new(500, 4)).unwrap();
        assert_eq!(prof.mean(13), 1.0);
        assert!(prof.mean(12) <= 2.0);
        for n in 1..=13 {
            assert!(prof.mean(n) >= 1.0 && prof.mean(n) <= (14 - n) as f64);
        }
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let p = GameParams::bridge();
        let a = branching_profile(&p, &RunSpec::new(300, 8).workers(1)).unwrap();
        let b = branching_profile(&p, &RunSpec::new(300, 8).workers(4)).unwrap();
        assert_eq!(a, b);
        let a = estimate_tree_size(&p, &RunSpec::new(300, 8).workers(1)).unwrap();
        let b = estimate_tree_size(&p, &RunSpec::new(300, 8).workers(3)).unwrap();
        assert_eq!(a.moments, b.moments);
    }

    #[test]
    fn paired_profiles_share_trick_one() {
        let p = GameParams::bridge();
        let paired = paired_trump_nt_profile(&p, &RunSpec::new(400, 2)).unwrap();
        assert_eq!(paired.nt.tricks[0], paired.trump.tricks[0]);
        let single = paired_trump_nt_profile(&p, &RunSpec::new(1, 2)).unwrap();
        assert_eq!(single.nt.tricks[0].n, 1);
        assert!(single.nt.stderr(1).is_nan());
        // the paired run matches independent per-mode runs with the same seed
        let nt = branching_profile(&Mode::NoTrump.apply(&p), &RunSpec::new(400, 2)).unwrap();
        let tr = branching_profile(&Mode::Trump.apply(&p), &RunSpec::new(400, 2)).unwrap();
        assert_eq!(paired.nt, nt);
        assert_eq!(paired.trump, tr);
    }

    #[test]
    fn estimate_requires_two_samples() {
        let p = GameParams::bridge();
        assert!(matches!(
            estimate_tree_size(&p, &RunSpec::new(1, 0)),
            Err(EstimatorError::TooFewGames { .. })
        ));
        assert!(estimate_tree_size(&p, &RunSpec::new(1, 0).playouts_per_deal(2)).is_ok());
        assert!(matches!(
            branching_profile(&p, &RunSpec::new(10, 0).leader(4)),
            Err(EstimatorError::Engine(EngineError::BadLeader { .. }))
        ));
    }

    #[test]
    fn stderr_shrinks_with_sample_size() {
        let p = GameParams::bridge();
        let small = branching_profile(&p, &RunSpec::new(20_000, 31)).unwrap();
        let large = branching_profile(&p, &RunSpec::new(40_000, 32)).unwrap();
        for n in 1..=11 {
            let ratio = small.stderr(n) / large.stderr(n);
            assert!((ratio / 2f64.sqrt() - 1.0).abs() < 0.2, "trick {n}: ratio {ratio}");
        }
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("nt".parse::<Mode>(), Ok(Mode::NoTrump));
        assert_eq!("trump".parse::<Mode>(), Ok(Mode::Trump));
        assert!("spades".parse::<Mode>().is_err());
        let with_suit = GameParams::bridge().with_trump(Some(2)).unwrap();
        assert_eq!(Mode::Trump.apply(&with_suit).trump(), Some(2));
        assert_eq!(Mode::NoTrump.apply(&with_suit).trump(), None);
    }
}
