use std::fmt;

use serde::{Deserialize, Serialize};

use super::GameParams;

/// A card identified by suit and rank indices. Higher rank beats lower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Card {
    pub suit: u8,
    pub rank: u8,
}

impl Card {
    pub const fn new(suit: u8, rank: u8) -> Self {
        Self { suit, rank }
    }

    #[inline]
    pub fn index(self, params: &GameParams) -> usize {
        self.suit as usize * params.ranks_per_suit() + self.rank as usize
    }

    #[inline]
    pub fn from_index(index: usize, params: &GameParams) -> Self {
        let nr = params.ranks_per_suit();
        Self {
            suit: (index / nr) as u8,
            rank: (index % nr) as u8,
        }
    }

    pub fn is_valid(self, params: &GameParams) -> bool {
        (self.suit as usize) < params.num_suits() && (self.rank as usize) < params.ranks_per_suit()
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}r{}", self.suit, self.rank)
    }
}

/// A set of cards packed into a 64-bit mask; bit `suit * NR + rank`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct CardSet(pub u64);

impl CardSet {
    pub const EMPTY: CardSet = CardSet(0);

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, card: Card, params: &GameParams) -> bool {
        self.0 >> card.index(params) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, card: Card, params: &GameParams) {
        self.0 |= 1u64 << card.index(params);
    }

    #[inline]
    pub fn remove(&mut self, card: Card, params: &GameParams) {
        self.0 &= !(1u64 << card.index(params));
    }

    #[inline]
    pub fn in_suit(self, suit: usize, params: &GameParams) -> CardSet {
        CardSet(self.0 & params.suit_mask(suit))
    }

    /// Number of cards held in each suit.
    pub fn suit_lengths(self, params: &GameParams) -> Vec<usize> {
        (0..params.num_suits())
            .map(|s| self.in_suit(s, params).len())
            .collect()
    }

    /// Cards in canonical order: suits ascending, ranks descending within a suit.
    pub fn cards(self, params: &GameParams) -> Vec<Card> {
        let mut out = Vec::with_capacity(self.len());
        for suit in 0..params.num_suits() {
            let mut bits = self.0 & params.suit_mask(suit);
            while bits != 0 {
                let top = 63 - bits.leading_zeros() as usize;
                out.push(Card::from_index(top, params));
                bits &= !(1u64 << top);
            }
        }
        out
    }

    /// The `n`-th card of [`CardSet::cards`] without materializing the list.
    #[inline]
    pub fn nth_canonical(self, mut n: usize, params: &GameParams) -> Option<Card> {
        for suit in 0..params.num_suits() {
            let mut bits = self.0 & params.suit_mask(suit);
            let count = bits.count_ones() as usize;
            if n >= count {
                n -= count;
                continue;
            }
            for _ in 0..n {
                bits &= !(1u64 << (63 - bits.leading_zeros()));
            }
            return Some(Card::from_index(63 - bits.leading_zeros() as usize, params));
        }
        None
    }

    pub fn from_cards<'a>(cards: impl IntoIterator<Item = &'a Card>, params: &GameParams) -> CardSet {
        let mut set = CardSet::EMPTY;
        for &c in cards {
            set.insert(c, params);
        }
        set
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_is_suit_major_rank_descending() {
        let p = GameParams::bridge();
        let set = CardSet::from_cards(
            &[Card::new(1, 3), Card::new(0, 2), Card::new(1, 12), Card::new(0, 9)],
            &p,
        );
        assert_eq!(
            set.cards(&p),
            vec![Card::new(0, 9), Card::new(0, 2), Card::new(1, 12), Card::new(1, 3)]
        );
        for (i, c) in set.cards(&p).into_iter().enumerate() {
            assert_eq!(set.nth_canonical(i, &p), Some(c));
        }
        assert_eq!(set.nth_canonical(4, &p), None);
    }

    #[test]
    fn index_round_trip() {
        let p = GameParams::new(4, 3, 2, 6, None).unwrap();
        for i in 0..p.deck_size() {
            assert_eq!(Card::from_index(i, &p).index(&p), i);
        }
    }
}
