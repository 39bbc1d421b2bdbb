//! Generalized trick-taking rules: cards, deals, positions, the successor
//! function and uniformly random playouts.

mod card;
mod deal;
pub mod notation;
mod params;
mod playout;
mod state;

use thiserror::Error;

pub use card::{Card, CardSet};
pub use deal::{for_each_deal, Deal};
pub use params::{GameParams, MAX_DECK};
pub use playout::{random_playout, random_playout_into, run_playout, PlayoutTrace};
pub use state::{side_of, trick_winner, PlayState};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("all counts must be positive")]
    ZeroCount,
    #[error("at least two hands are required, got {0}")]
    TooFewHands(usize),
    #[error("deck of {deck} cards does not match {dealt} dealt cards")]
    DeckMismatch { deck: usize, dealt: usize },
    #[error("deck of {0} cards exceeds the supported maximum of 64")]
    DeckTooLarge(usize),
    #[error("trump suit {trump} out of range for {num_suits} suits")]
    BadTrump { trump: usize, num_suits: usize },
    #[error("leader {leader} out of range for {hands} hands")]
    BadLeader { leader: usize, hands: usize },
    #[error("expected {expected} hands, found {found}")]
    WrongHandCount { expected: usize, found: usize },
    #[error("hand {hand} holds {found} cards, expected {expected}")]
    WrongHandSize {
        hand: usize,
        expected: usize,
        found: usize,
    },
    #[error("duplicate card {0}")]
    DuplicateCard(Card),
    #[error("card outside the deck")]
    CardOutOfRange,
    #[error("no moves in a terminal position")]
    TerminalState,
    #[error("illegal move {0}")]
    IllegalMove(Card),
    #[error("trick has {played} of {hands} cards")]
    IncompleteTrick { played: usize, hands: usize },
    #[error("trace disagrees with replay at position {position}")]
    TraceMismatch { position: usize },
}
