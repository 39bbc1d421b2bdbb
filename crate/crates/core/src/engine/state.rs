use super::{Card, CardSet, Deal, EngineError, GameParams};

/// A position in the play of a deal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlayState {
    params: GameParams,
    remaining: Vec<CardSet>,
    trick: Vec<(usize, Card)>,
    leader: usize,
    side_tricks: [u32; 2],
}

/// Side of a hand for scoring: partnerships alternate around the table.
#[inline]
pub fn side_of(hand: usize) -> usize {
    hand % 2
}

impl PlayState {
    /// Opening position of `deal` with `leader` to lead the first trick.
    pub fn initial(params: &GameParams, deal: &Deal, leader: usize) -> Result<Self, EngineError> {
        if leader >= params.hands() {
            return Err(EngineError::BadLeader {
                leader,
                hands: params.hands(),
            });
        }
        Ok(Self {
            params: *params,
            remaining: deal.hands().to_vec(),
            trick: Vec::with_capacity(params.hands()),
            leader,
            side_tricks: [0, 0],
        })
    }

    pub fn params(&self) -> &GameParams {
        &self.params
    }

    pub fn remaining(&self) -> &[CardSet] {
        &self.remaining
    }

    pub fn trick(&self) -> &[(usize, Card)] {
        &self.trick
    }

    pub fn leader(&self) -> usize {
        self.leader
    }

    pub fn to_move(&self) -> usize {
        (self.leader + self.trick.len()) % self.params.hands()
    }

    pub fn side_tricks(&self) -> [u32; 2] {
        self.side_tricks
    }

    pub fn is_terminal(&self) -> bool {
        self.remaining.iter().all(|h| h.is_empty())
    }

    /// Legal cards for the player to move, as a set.
    pub fn legal_set(&self) -> Result<CardSet, EngineError> {
        if self.is_terminal() {
            return Err(EngineError::TerminalState);
        }
        let hand = self.remaining[self.to_move()];
        Ok(match self.trick.first() {
            None => hand,
            Some(&(_, led)) => {
                let follow = hand.in_suit(led.suit as usize, &self.params);
                if follow.is_empty() {
                    hand
                } else {
                    follow
                }
            }
        })
    }

    /// Legal cards in canonical order (suits ascending, ranks descending).
    pub fn legal_moves(&self) -> Result<Vec<Card>, EngineError> {
        Ok(self.legal_set()?.cards(&self.params))
    }

    /// Returns the successor position after `card` is played.
    pub fn apply_move(&self, card: Card) -> Result<PlayState, EngineError> {
        let mut next = self.clone();
        next.play(card)?;
        Ok(next)
    }

    /// In-place form of [`PlayState::apply_move`].
    pub fn play(&mut self, card: Card) -> Result<(), EngineError> {
        let legal = self.legal_set()?;
        if !card.is_valid(&self.params) || !legal.contains(card, &self.params) {
            return Err(EngineError::IllegalMove(card));
        }
        let hand = self.to_move();
        self.remaining[hand].remove(card, &self.params);
        self.trick.push((hand, card));
        if self.trick.len() == self.params.hands() {
            let cards: Vec<Card> = self.trick.iter().map(|&(_, c)| c).collect();
            let winner = trick_winner(&cards, self.leader, &self.params)?;
            self.side_tricks[side_of(winner)] += 1;
            self.trick.clear();
            self.leader = winner;
        }
        Ok(())
    }

    /// Cards accounted for: in hands, on the table, and in completed tricks.
    pub fn card_count(&self) -> usize {
        let held: usize = self.remaining.iter().map(|h| h.len()).sum();
        let won: u32 = self.side_tricks.iter().sum();
        held + self.trick.len() + self.params.hands() * won as usize
    }
}

/// Winner of a complete trick. `cards` are in play order starting with `leader`.
pub fn trick_winner(cards: &[Card], leader: usize, params: &GameParams) -> Result<usize, EngineError> {
    if cards.len() != params.hands() {
        return Err(EngineError::IncompleteTrick {
            played: cards.len(),
            hands: params.hands(),
        });
    }
    let trump = params.trump().map(|t| t as u8);
    let mut best = 0;
    for (i, c) in cards.iter().enumerate().skip(1) {
        if beats(*c, cards[best], trump) {
            best = i;
        }
    }
    Ok((leader + best) % params.hands())
}

/// Whether `challenger` takes the trick from the card currently winning it.
/// The current winner is always of the led suit or a trump.
#[inline]
pub(crate) fn beats(challenger: Card, holder: Card, trump: Option<u8>) -> bool {
    let holder_trump = Some(holder.suit) == trump;
    let challenger_trump = Some(challenger.suit) == trump;
    match (challenger_trump, holder_trump) {
        (true, false) => true,
        (false, true) => false,
        _ => challenger.suit == holder.suit && challenger.rank > holder.rank,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: u8, r: u8) -> Card {
        Card::new(s, r)
    }

    #[test]
    fn highest_of_led_suit_wins() {
        let p = GameParams::bridge();
        let w = trick_winner(&[c(2, 5), c(2, 9), c(2, 2), c(2, 12)], 1, &p).unwrap();
        assert_eq!(w, (1 + 3) % 4);
        let w = trick_winner(&[c(2, 5), c(3, 12), c(2, 2), c(0, 12)], 0, &p).unwrap();
        assert_eq!(w, 0);
    }

    #[test]
    fn trump_rules() {
        let p = GameParams::bridge().with_trump(Some(1)).unwrap();
        let w = trick_winner(&[c(0, 5), c(0, 9), c(1, 0), c(0, 12)], 0, &p).unwrap();
        assert_eq!(w, 2);
        let w = trick_winner(&[c(0, 5), c(1, 3), c(1, 7), c(0, 12)], 0, &p).unwrap();
        assert_eq!(w, 2);
        let w = trick_winner(&[c(1, 2), c(0, 12), c(1, 1), c(1, 3)], 3, &p).unwrap();
        assert_eq!(w, 2);
    }

    #[test]
    fn incomplete_trick() {
        let p = GameParams::bridge();
        assert_eq!(
            trick_winner(&[c(0, 1)], 0, &p),
            Err(EngineError::IncompleteTrick { played: 1, hands: 4 })
        );
    }

    #[test]
    fn follow_suit_and_void() {
        let p = GameParams::new(2, 2, 2, 2, None).unwrap();
        let deal = Deal::from_cards(&p, &[vec![c(0, 0), c(1, 0)], vec![c(0, 1), c(1, 1)]]).unwrap();
        let s = PlayState::initial(&p, &deal, 0).unwrap();
        assert_eq!(s.legal_moves().unwrap(), vec![c(0, 0), c(1, 0)]);
        let s = s.apply_move(c(0, 0)).unwrap();
        assert_eq!(s.legal_moves().unwrap(), vec![c(0, 1)]);
        assert_eq!(s.apply_move(c(1, 1)), Err(EngineError::IllegalMove(c(1, 1))));

        let deal = Deal::from_cards(&p, &[vec![c(0, 0), c(0, 1)], vec![c(1, 0), c(1, 1)]]).unwrap();
        let s = PlayState::initial(&p, &deal, 0).unwrap().apply_move(c(0, 1)).unwrap();
        assert_eq!(s.legal_moves().unwrap(), vec![c(1, 1), c(1, 0)]);
    }

    #[test]
    fn tiny_game_terminates() {
        let p = GameParams::new(2, 1, 1, 2, None).unwrap();
        let deal = Deal::from_cards(&p, &[vec![c(0, 1)], vec![c(0, 0)]]).unwrap();
        let s = PlayState::initial(&p, &deal, 0).unwrap();
        let s = s.apply_move(c(0, 1)).unwrap();
        assert_eq!(s.to_move(), 1);
        let s = s.apply_move(c(0, 0)).unwrap();
        assert!(s.is_terminal());
        assert_eq!(s.side_tricks(), [1, 0]);
        assert_eq!(s.leader(), 0);
        assert_eq!(s.legal_moves(), Err(EngineError::TerminalState));
        assert_eq!(s.card_count(), 2);
    }

    #[test]
    fn card_not_in_hand_is_illegal() {
        let p = GameParams::new(2, 1, 1, 2, None).unwrap();
        let deal = Deal::from_cards(&p, &[vec![c(0, 1)], vec![c(0, 0)]]).unwrap();
        let s = PlayState::initial(&p, &deal, 0).unwrap();
        assert_eq!(s.apply_move(c(0, 0)), Err(EngineError::IllegalMove(c(0, 0))));
        assert_eq!(s.apply_move(c(3, 0)), Err(EngineError::IllegalMove(c(3, 0))));
    }
}
