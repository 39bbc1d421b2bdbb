use rand::seq::SliceRandom;
use rand::Rng;

use super::{Card, CardSet, EngineError, GameParams, MAX_DECK};

/// An initial distribution of the whole deck among the hands.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Deal {
    hands: Vec<CardSet>,
}

impl Deal {
    /// Validates sizes, disjointness and coverage of the deck.
    pub fn new(params: &GameParams, hands: Vec<CardSet>) -> Result<Self, EngineError> {
        if hands.len() != params.hands() {
            return Err(EngineError::WrongHandCount {
                expected: params.hands(),
                found: hands.len(),
            });
        }
        let mut seen = 0u64;
        for (h, set) in hands.iter().enumerate() {
            if set.len() != params.cards_per_hand() {
                return Err(EngineError::WrongHandSize {
                    hand: h,
                    expected: params.cards_per_hand(),
                    found: set.len(),
                });
            }
            if set.0 & !params.full_deck_mask() != 0 {
                return Err(EngineError::CardOutOfRange);
            }
            if seen & set.0 != 0 {
                let dup = Card::from_index((seen & set.0).trailing_zeros() as usize, params);
                return Err(EngineError::DuplicateCard(dup));
            }
            seen |= set.0;
        }
        debug_assert_eq!(seen, params.full_deck_mask());
        Ok(Self { hands })
    }

    /// Builds a deal from explicit card lists, rejecting duplicates and bad sizes.
    pub fn from_cards(params: &GameParams, hands: &[Vec<Card>]) -> Result<Self, EngineError> {
        let mut sets = Vec::with_capacity(hands.len());
        let mut seen = CardSet::EMPTY;
        for (h, cards) in hands.iter().enumerate() {
            let mut set = CardSet::EMPTY;
            for &c in cards {
                if !c.is_valid(params) {
                    return Err(EngineError::CardOutOfRange);
                }
                if seen.contains(c, params) {
                    return Err(EngineError::DuplicateCard(c));
                }
                seen.insert(c, params);
                set.insert(c, params);
            }
            if set.len() != params.cards_per_hand() {
                return Err(EngineError::WrongHandSize {
                    hand: h,
                    expected: params.cards_per_hand(),
                    found: set.len(),
                });
            }
            sets.push(set);
        }
        Self::new(params, sets)
    }

    /// Uniformly random deal: shuffle the deck and cut it into consecutive
    /// blocks of `K` cards, hand 0 first.
    pub fn random<R: Rng + ?Sized>(params: &GameParams, rng: &mut R) -> Self {
        let n = params.deck_size();
        let mut deck = [0u8; MAX_DECK];
        for (i, slot) in deck[..n].iter_mut().enumerate() {
            *slot = i as u8;
        }
        deck[..n].shuffle(rng);
        let k = params.cards_per_hand();
        let hands = deck[..n]
            .chunks_exact(k)
            .map(|block| CardSet(block.iter().fold(0u64, |m, &i| m | 1u64 << i)))
            .collect();
        Self { hands }
    }

    pub fn hands(&self) -> &[CardSet] {
        &self.hands
    }

    pub fn hand(&self, h: usize) -> CardSet {
        self.hands[h]
    }

    /// Suit-length table: `shape[r][k]` cards of suit `k` in hand `r`.
    pub fn shape(&self, params: &GameParams) -> Vec<Vec<usize>> {
        self.hands.iter().map(|h| h.suit_lengths(params)).collect()
    }
}

/// Enumerates every deal of a (small) family in a fixed order.
pub fn for_each_deal(params: &GameParams, mut visit: impl FnMut(Deal)) {
    fn rec(
        params: &GameParams,
        free: u64,
        hands: &mut Vec<CardSet>,
        visit: &mut dyn FnMut(Deal),
    ) {
        let k = params.cards_per_hand();
        if hands.len() + 1 == params.hands() {
            hands.push(CardSet(free));
            visit(Deal { hands: hands.clone() });
            hands.pop();
            return;
        }
        // Choose k cards out of `free`, enumerated as subsets of the set bits.
        let bits: Vec<u32> = (0..64).filter(|i| free >> i & 1 == 1).collect();
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let mask = idx.iter().fold(0u64, |m, &i| m | 1u64 << bits[i]);
            hands.push(CardSet(mask));
            rec(params, free & !mask, hands, visit);
            hands.pop();
            // next k-combination in lexicographic order
            let n = bits.len();
            let mut i = k;
            while i > 0 && idx[i - 1] == i - 1 + n - k {
                i -= 1;
            }
            if i == 0 {
                return;
            }
            idx[i - 1] += 1;
            for j in i..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    let mut hands = Vec::with_capacity(params.hands());
    rec(params, params.full_deck_mask(), &mut hands, &mut visit);
}
