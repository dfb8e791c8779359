//! Moves and the solution text format.
//!
//! Moves name cards rather than column or cell positions: a card occupies
//! exactly one place, so its identity is enough to find the source, and
//! destinations are described by the card they land on. The same move is
//! therefore valid on any column permutation of a state.
//!
//! Solution grammar, one move per line (`#` starts a comment):
//!
//! ```text
//! foundation <card> [forced]     card to its foundation pile
//! cell <card>                    column top to a free cell
//! move <card> onto <card>        card (with any run above it) onto a column top
//! move <card> to-empty           card (with any run above it) into an empty column
//! draw                           turn the next stock card onto the waste
//! recycle                        turn the whole waste back into the stock
//! fill <card> after <card>       Montana: fill the gap right of the named card
//! fill <card> row-start <anchor> Montana: fill a column-0 gap; anchor is the
//!                                first card in that row, or `--` for a row
//!                                holding no cards
//! ```

use std::fmt;
use std::str::FromStr;

use crate::card::Card;
use crate::error::ParseError;

/// Where a Montana gap sits, described without reference to row numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GapPos {
    /// Immediately right of this card.
    After(Card),
    /// Column 0 of the row whose first card is the anchor (`None` when the
    /// row contains only gaps).
    RowStart(Option<Card>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    /// From a column top, cell, reserve, stock or waste to the foundation.
    ToFoundation { card: Card, forced: bool },
    /// Column top into a free cell.
    ToCell { card: Card },
    /// `card` onto the column whose top is `target`. In Klondike `card`
    /// may be the base of a face-up run, which travels with it, or a
    /// foundation top.
    ToCard { card: Card, target: Card },
    /// `card` (and in Klondike any run above it) into an empty column.
    ToEmptyColumn { card: Card },
    StockDraw,
    StockRecycle,
    GapFill { card: Card, gap: GapPos },
}

impl Move {
    /// The card moved, if the move moves a card.
    pub fn card(&self) -> Option<Card> {
        match *self {
            Move::ToFoundation { card, .. }
            | Move::ToCell { card }
            | Move::ToCard { card, .. }
            | Move::ToEmptyColumn { card }
            | Move::GapFill { card, .. } => Some(card),
            Move::StockDraw | Move::StockRecycle => None,
        }
    }

    pub fn is_forced(&self) -> bool {
        matches!(self, Move::ToFoundation { forced: true, .. })
    }

    /// The same move with the forced annotation set or cleared.
    pub fn with_forced(self, forced: bool) -> Move {
        match self {
            Move::ToFoundation { card, .. } => Move::ToFoundation { card, forced },
            other => other,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Move::ToFoundation { card, forced: false } => write!(f, "foundation {card}"),
            Move::ToFoundation { card, forced: true } => write!(f, "foundation {card} forced"),
            Move::ToCell { card } => write!(f, "cell {card}"),
            Move::ToCard { card, target } => write!(f, "move {card} onto {target}"),
            Move::ToEmptyColumn { card } => write!(f, "move {card} to-empty"),
            Move::StockDraw => f.write_str("draw"),
            Move::StockRecycle => f.write_str("recycle"),
            Move::GapFill {
                card,
                gap: GapPos::After(left),
            } => write!(f, "fill {card} after {left}"),
            Move::GapFill {
                card,
                gap: GapPos::RowStart(Some(anchor)),
            } => write!(f, "fill {card} row-start {anchor}"),
            Move::GapFill {
                card,
                gap: GapPos::RowStart(None),
            } => write!(f, "fill {card} row-start --"),
        }
    }
}

impl FromStr for Move {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Move, ParseError> {
        let words: Vec<&str> = s.split_whitespace().collect();
        let card = |w: &str| w.parse::<Card>();
        let mv = match words.as_slice() {
            ["foundation", c] => Move::ToFoundation {
                card: card(c)?,
                forced: false,
            },
            ["foundation", c, "forced"] => Move::ToFoundation {
                card: card(c)?,
                forced: true,
            },
            ["cell", c] => Move::ToCell { card: card(c)? },
            ["move", c, "onto", t] => Move::ToCard {
                card: card(c)?,
                target: card(t)?,
            },
            ["move", c, "to-empty"] => Move::ToEmptyColumn { card: card(c)? },
            ["draw"] => Move::StockDraw,
            ["recycle"] => Move::StockRecycle,
            ["fill", c, "after", l] => Move::GapFill {
                card: card(c)?,
                gap: GapPos::After(card(l)?),
            },
            ["fill", c, "row-start", "--"] => Move::GapFill {
                card: card(c)?,
                gap: GapPos::RowStart(None),
            },
            ["fill", c, "row-start", a] => Move::GapFill {
                card: card(c)?,
                gap: GapPos::RowStart(Some(card(a)?)),
            },
            _ => return Err(ParseError::new(format!("unrecognised move {s:?}"))),
        };
        Ok(mv)
    }
}

/// Parses a solution file: one move per line, blank lines and `#`
/// comments ignored.
pub fn parse_solution(text: &str) -> Result<Vec<Move>, ParseError> {
    let mut moves = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        moves.push(body.parse::<Move>().map_err(|e| e.with_line(i + 1))?);
    }
    Ok(moves)
}

/// Renders a move list in the solution grammar, optionally preceded by
/// `#` comment lines.
pub fn format_solution(moves: &[Move], comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    for m in moves {
        out.push_str(&m.to_string());
        out.push('\n');
    }
    out
}
