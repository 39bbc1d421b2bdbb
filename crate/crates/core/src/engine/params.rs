use serde::{Deserialize, Serialize};

use super::EngineError;

/// Largest deck the bitboard representation supports.
pub const MAX_DECK: usize = 64;

/// A member of the parametric trick-taking family: `hands` seats each holding
/// `cards_per_hand` cards drawn from a deck of `num_suits * ranks_per_suit`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameParams {
    hands: usize,
    cards_per_hand: usize,
    num_suits: usize,
    ranks_per_suit: usize,
    trump: Option<usize>,
}

impl GameParams {
    pub fn new(
        hands: usize,
        cards_per_hand: usize,
        num_suits: usize,
        ranks_per_suit: usize,
        trump: Option<usize>,
    ) -> Result<Self, EngineError> {
        if hands == 0 || cards_per_hand == 0 || num_suits == 0 || ranks_per_suit == 0 {
            return Err(EngineError::ZeroCount);
        }
        if hands < 2 {
            return Err(EngineError::TooFewHands(hands));
        }
        let deck = num_suits * ranks_per_suit;
        if deck != hands * cards_per_hand {
            return Err(EngineError::DeckMismatch {
                deck,
                dealt: hands * cards_per_hand,
            });
        }
        if deck > MAX_DECK {
            return Err(EngineError::DeckTooLarge(deck));
        }
        if let Some(t) = trump {
            if t >= num_suits {
                return Err(EngineError::BadTrump { trump: t, num_suits });
            }
        }
        Ok(Self {
            hands,
            cards_per_hand,
            num_suits,
            ranks_per_suit,
            trump,
        })
    }

    /// Four hands of thirteen cards, four suits of thirteen ranks, no trump.
    pub fn bridge() -> Self {
        Self {
            hands: 4,
            cards_per_hand: 13,
            num_suits: 4,
            ranks_per_suit: 13,
            trump: None,
        }
    }

    /// Same family with a different trump setting.
    pub fn with_trump(self, trump: Option<usize>) -> Result<Self, EngineError> {
        Self::new(
            self.hands,
            self.cards_per_hand,
            self.num_suits,
            self.ranks_per_suit,
            trump,
        )
    }

    pub fn hands(&self) -> usize {
        self.hands
    }

    pub fn cards_per_hand(&self) -> usize {
        self.cards_per_hand
    }

    pub fn num_suits(&self) -> usize {
        self.num_suits
    }

    pub fn ranks_per_suit(&self) -> usize {
        self.ranks_per_suit
    }

    pub fn trump(&self) -> Option<usize> {
        self.trump
    }

    pub fn deck_size(&self) -> usize {
        self.num_suits * self.ranks_per_suit
    }

    /// Total number of moves in a complete game.
    pub fn game_length(&self) -> usize {
        self.deck_size()
    }

    pub fn is_bridge_shaped(&self) -> bool {
        self.hands == 4 && self.cards_per_hand == 13 && self.num_suits == 4 && self.ranks_per_suit == 13
    }

    /// Bitmask of every card in `suit`.
    #[inline]
    pub(crate) fn suit_mask(&self, suit: usize) -> u64 {
        let width = self.ranks_per_suit;
        let bits = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
        bits << (suit * width)
    }

    pub(crate) fn full_deck_mask(&self) -> u64 {
        let n = self.deck_size();
        if n == 64 {
            u64::MAX
        } else {
            (1u64 << n) - 1
        }
    }
}
