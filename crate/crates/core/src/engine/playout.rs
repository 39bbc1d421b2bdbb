use rand::Rng;

use super::state::beats;
use super::{Card, CardSet, Deal, EngineError, GameParams, PlayState};

/// The record of one uniformly random play of a deal.
///
/// `degrees[i]` is the number of legal moves at position `s_i`, taken before
/// `moves[i]` was played.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PlayoutTrace {
    pub moves: Vec<Card>,
    pub degrees: Vec<u32>,
}

impl PlayoutTrace {
    pub fn with_capacity(n: usize) -> Self {
        Self {
            moves: Vec::with_capacity(n),
            degrees: Vec::with_capacity(n),
        }
    }

    pub fn clear(&mut self) {
        self.moves.clear();
        self.degrees.clear();
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Replays the recorded moves from the opening position and checks that
    /// every move was legal and every recorded degree matches.
    pub fn replay(&self, params: &GameParams, deal: &Deal, leader0: usize) -> Result<PlayState, EngineError> {
        let mut state = PlayState::initial(params, deal, leader0)?;
        for (i, (&card, &deg)) in self.moves.iter().zip(&self.degrees).enumerate() {
            let legal = state.legal_set()?;
            if legal.len() != deg as usize {
                return Err(EngineError::TraceMismatch { position: i });
            }
            state.play(card)?;
        }
        Ok(state)
    }
}

/// Plays `deal` to the end choosing uniformly among legal moves.
pub fn random_playout<R: Rng + ?Sized>(
    deal: &Deal,
    params: &GameParams,
    leader0: usize,
    rng: &mut R,
) -> PlayoutTrace {
    let mut trace = PlayoutTrace::with_capacity(params.game_length());
    random_playout_into(deal, params, leader0, rng, &mut trace);
    trace
}

/// Buffer-reusing form of [`random_playout`].
pub fn random_playout_into<R: Rng + ?Sized>(
    deal: &Deal,
    params: &GameParams,
    leader0: usize,
    rng: &mut R,
    trace: &mut PlayoutTrace,
) {
    trace.clear();
    run_playout(deal.hands(), params, leader0, rng, |_, deg, card| {
        trace.degrees.push(deg);
        trace.moves.push(card);
    });
}

/// The playout kernel. Calls `sink(position, degree, card)` for each of the
/// `R*K` moves and returns the side trick counts.
///
/// Forced moves (degree 1) consume no randomness; otherwise exactly one
/// `random_range(0..degree)` draw selects the move by canonical index.
#[inline]
pub fn run_playout<R: Rng + ?Sized>(
    hands: &[CardSet],
    params: &GameParams,
    leader0: usize,
    rng: &mut R,
    mut sink: impl FnMut(usize, u32, Card),
) -> [u32; 2] {
    let r = params.hands();
    let k = params.cards_per_hand();
    let nr = params.ranks_per_suit();
    let trump = params.trump().map(|t| t as u8);
    let mut remaining = [0u64; 64];
    for (slot, h) in remaining.iter_mut().zip(hands) {
        *slot = h.0;
    }
    let mut leader = leader0;
    let mut score = [0u32; 2];
    let mut pos = 0;
    for _ in 0..k {
        let mut led_mask = 0u64;
        let mut best = Card::new(0, 0);
        let mut best_hand = leader;
        for i in 0..r {
            let seat = (leader + i) % r;
            let hand = remaining[seat];
            let follow = hand & led_mask;
            let legal = CardSet(if follow != 0 { follow } else { hand });
            let deg = legal.len() as u32;
            let pick = if deg > 1 { rng.random_range(0..deg) as usize } else { 0 };
            let card = legal
                .nth_canonical(pick, params)
                .expect("legal set is never empty before the end of the game");
            remaining[seat] &= !(1u64 << (card.suit as usize * nr + card.rank as usize));
            sink(pos, deg, card);
            pos += 1;
            if i == 0 {
                led_mask = params.suit_mask(card.suit as usize);
                best = card;
            } else if beats(card, best, trump) {
                best = card;
                best_hand = seat;
            }
        }
        score[best_hand % 2] += 1;
        leader = best_hand;
    }
    score
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn bridge_trace_shape() {
        let p = GameParams::bridge();
        let mut rng = seeded(3);
        let deal = Deal::random(&p, &mut rng);
        let t = random_playout(&deal, &p, 0, &mut rng);
        assert_eq!(t.len(), 52);
        for n in 0..13 {
            assert_eq!(t.degrees[4 * n], 13 - n as u32);
        }
        let end = t.replay(&p, &deal, 0).unwrap();
        assert!(end.is_terminal());
        assert_eq!(end.side_tricks().iter().sum::<u32>(), 13);
    }

    #[test]
    fn single_suit_degrees_are_full_hands() {
        let p = GameParams::new(4, 13, 1, 52, None).unwrap();
        let mut rng = seeded(11);
        let deal = Deal::random(&p, &mut rng);
        let t = random_playout(&deal, &p, 2, &mut rng);
        for (i, &d) in t.degrees.iter().enumerate() {
            assert_eq!(d as usize, 13 - i / 4);
        }
    }

    #[test]
    fn fixed_seed_fixed_trace() {
        let p = GameParams::bridge().with_trump(Some(0)).unwrap();
        let deal = Deal::random(&p, &mut seeded(5));
        let a = random_playout(&deal, &p, 1, &mut seeded(9));
        let b = random_playout(&deal, &p, 1, &mut seeded(9));
        assert_eq!(a, b);
    }

    #[test]
    fn kernel_agrees_with_state_machine() {
        for trump in [None, Some(0), Some(2)] {
            let p = GameParams::bridge().with_trump(trump).unwrap();
            for seed in 0..50 {
                let mut rng = seeded(seed);
                let deal = Deal::random(&p, &mut rng);
                let mut t = PlayoutTrace::default();
                let leader = (seed % 4) as usize;
                let score = run_playout(deal.hands(), &p, leader, &mut rng, |_, d, c| {
                    t.degrees.push(d);
                    t.moves.push(c);
                });
                let end = t.replay(&p, &deal, leader).unwrap();
                assert_eq!(end.side_tricks(), score);
            }
        }
    }
}
