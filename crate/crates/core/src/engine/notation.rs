//! Text formats for deals.
//!
//! Bridge deals use four whitespace-separated fields, one per seat:
//!
//! ```text
//! N:AKQJ.T98.765.432 E:... S:... W:...
//! ```
//!
//! Each field lists spades, hearts, diamonds and clubs separated by dots,
//! ranks from `AKQJT98765432` in descending order. Suits map to indices
//! clubs=0, diamonds=1, hearts=2, spades=3; seats to N=0, E=1, S=2, W=3.
//!
//! Any other parametrization uses a JSON document listing `(suit, rank)`
//! pairs per hand:
//!
//! ```text
//! {"hands": [[[0, 1], [1, 0]], [[0, 0], [1, 1]]]}
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Card, Deal, EngineError, GameParams};

pub const SEATS: [char; 4] = ['N', 'E', 'S', 'W'];
const RANKS: &[u8; 13] = b"23456789TJQKA";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DealParseError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate card {0}")]
    DuplicateCard(Card),
    #[error("hand {hand} holds {found} cards, expected {expected}")]
    WrongHandSize {
        hand: usize,
        expected: usize,
        found: usize,
    },
    #[error("invalid deal: {0}")]
    Invalid(EngineError),
}

impl From<EngineError> for DealParseError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::DuplicateCard(c) => DealParseError::DuplicateCard(c),
            EngineError::WrongHandSize { hand, expected, found } => {
                DealParseError::WrongHandSize { hand, expected, found }
            }
            other => DealParseError::Invalid(other),
        }
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn syntax(text: &str, offset: usize, message: impl Into<String>) -> DealParseError {
    let (line, column) = line_col(text, offset);
    DealParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Parses either format, picking JSON when the text starts with `{`.
pub fn parse_deal(text: &str, params: &GameParams) -> Result<Deal, DealParseError> {
    if text.trim_start().starts_with('{') {
        parse_json_deal(text, params)
    } else {
        parse_bridge_deal(text, params)
    }
}

/// Parses the four-seat bridge notation.
pub fn parse_bridge_deal(text: &str, params: &GameParams) -> Result<Deal, DealParseError> {
    if !params.is_bridge_shaped() {
        return Err(syntax(
            text,
            0,
            "seat notation needs 4 hands of 13 cards in 4 suits; use the JSON format",
        ));
    }
    let mut hands: [Option<Vec<Card>>; 4] = Default::default();
    let mut offset = 0;
    for token in text.split_whitespace() {
        let start = offset + text[offset..].find(token).unwrap_or(0);
        offset = start + token.len();
        let mut chars = token.char_indices();
        let seat = match chars.next() {
            Some((_, c)) => SEATS
                .iter()
                .position(|&s| s == c.to_ascii_uppercase())
                .ok_or_else(|| syntax(text, start, format!("unknown seat '{c}'")))?,
            None => continue,
        };
        if token.as_bytes().get(1) != Some(&b':') {
            return Err(syntax(text, start + 1, "expected ':' after seat"));
        }
        if hands[seat].is_some() {
            return Err(syntax(text, start, format!("seat {} given twice", SEATS[seat])));
        }
        let body = &token[2..];
        let suits: Vec<&str> = body.split('.').collect();
        if suits.len() != 4 {
            return Err(syntax(
                text,
                start + 2,
                format!("expected 4 dot-separated suits, found {}", suits.len()),
            ));
        }
        let mut cards = Vec::with_capacity(13);
        let mut pos = start + 2;
        for (i, suit_text) in suits.iter().enumerate() {
            let suit = 3 - i as u8;
            let mut last: Option<u8> = None;
            for (j, ch) in suit_text.bytes().enumerate() {
                let rank = RANKS
                    .iter()
                    .position(|&r| r == ch.to_ascii_uppercase())
                    .ok_or_else(|| syntax(text, pos + j, format!("bad rank '{}'", ch as char)))?
                    as u8;
                if last.is_some_and(|l| rank >= l) {
                    return Err(syntax(text, pos + j, "ranks must be in descending order"));
                }
                last = Some(rank);
                cards.push(Card::new(suit, rank));
            }
            pos += suit_text.len() + 1;
        }
        hands[seat] = Some(cards);
    }
    let mut out = Vec::with_capacity(4);
    for (seat, hand) in hands.into_iter().enumerate() {
        out.push(hand.ok_or_else(|| syntax(text, text.len(), format!("missing seat {}", SEATS[seat])))?);
    }
    Ok(Deal::from_cards(params, &out)?)
}

/// Renders a bridge-shaped deal in seat notation.
pub fn format_bridge_deal(deal: &Deal, params: &GameParams) -> String {
    let mut fields = Vec::with_capacity(4);
    for (seat, hand) in deal.hands().iter().enumerate() {
        let suits: Vec<String> = (0..4)
            .rev()
            .map(|s| {
                let mut cards = hand.in_suit(s, params).cards(params);
                cards.sort_by_key(|c| std::cmp::Reverse(c.rank));
                cards.iter().map(|c| RANKS[c.rank as usize] as char).collect()
            })
            .collect();
        fields.push(format!("{}:{}", SEATS[seat], suits.join(".")));
    }
    fields.join(" ")
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonDeal {
    hands: Vec<Vec<(u8, u8)>>,
}

pub fn parse_json_deal(text: &str, params: &GameParams) -> Result<Deal, DealParseError> {
    let doc: JsonDeal = serde_json::from_str(text).map_err(|e| DealParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let hands: Vec<Vec<Card>> = doc
        .hands
        .iter()
        .map(|h| h.iter().map(|&(s, r)| Card::new(s, r)).collect())
        .collect();
    if hands.len() != params.hands() {
        return Err(DealParseError::Invalid(EngineError::WrongHandCount {
            expected: params.hands(),
            found: hands.len(),
        }));
    }
    Ok(Deal::from_cards(params, &hands)?)
}

/// Renders any deal as the JSON document, cards in canonical order.
pub fn format_json_deal(deal: &Deal, params: &GameParams) -> String {
    let doc = JsonDeal {
        hands: deal
            .hands()
            .iter()
            .map(|h| h.cards(params).iter().map(|c| (c.suit, c.rank)).collect())
            .collect(),
    };
    serde_json::to_string(&doc).expect("deal serializes")
}
