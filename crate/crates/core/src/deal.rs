//! Dealt layouts and their text format.
//!
//! ```text
//! game=klondike ranks=13 columns=7
//! 5H
//! #9C 2D
//! ...
//! stock: 7S QH ...
//! ```
//!
//! The header names the game and deck size and may carry `cells=<n>` for
//! Freecell. Each following line is one column (bottom to top) or, for
//! Montana, one row (left to right). Cards are `<rank><suit>` tokens with
//! ranks `A,2..10,J,Q,K` and suits `C,D,H,S`; `--` is a Montana gap, a `#`
//! prefix marks a face-down Klondike card and a lone `.` is an empty
//! column. A trailing `reserve:` (King Albert) or `stock:` (Klondike, in
//! draw order) line lists the remaining cards.

use std::fmt;
use std::str::FromStr;

use crate::card::{Card, MAX_RANKS};
use crate::error::ParseError;
use crate::game::GameId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    Up(Card),
    Down(Card),
    Gap,
}

impl Slot {
    pub fn card(self) -> Option<Card> {
        match self {
            Slot::Up(c) | Slot::Down(c) => Some(c),
            Slot::Gap => None,
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Up(c) => write!(f, "{c}"),
            Slot::Down(c) => write!(f, "#{c}"),
            Slot::Gap => f.write_str("--"),
        }
    }
}

/// A dealt layout, before any move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deal {
    pub game: GameId,
    pub ranks: u8,
    /// Freecell cell count recorded with the deal, if any.
    pub cells: Option<u8>,
    /// Columns bottom to top; Montana rows left to right.
    pub columns: Vec<Vec<Slot>>,
    /// King Albert reserve, or the Klondike stock in draw order.
    pub reserve: Vec<Card>,
}

impl Deal {
    fn extra_label(&self) -> Option<&'static str> {
        match self.game {
            GameId::KingAlbert => Some("reserve"),
            GameId::Klondike => Some("stock"),
            _ => None,
        }
    }

    /// Every card named in the deal, with duplicates preserved.
    pub fn cards(&self) -> Vec<Card> {
        self.columns
            .iter()
            .flatten()
            .filter_map(|s| s.card())
            .chain(self.reserve.iter().copied())
            .collect()
    }

    /// Position of `card` as (column, index from the bottom).
    pub fn find(&self, card: Card) -> Option<(usize, usize)> {
        self.columns.iter().enumerate().find_map(|(i, col)| {
            col.iter()
                .position(|s| s.card() == Some(card))
                .map(|j| (i, j))
        })
    }
}

impl fmt::Display for Deal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "game={} ranks={}", self.game, self.ranks)?;
        if let Some(cells) = self.cells {
            write!(f, " cells={cells}")?;
        }
        writeln!(f, " columns={}", self.columns.len())?;
        for col in &self.columns {
            if col.is_empty() {
                writeln!(f, ".")?;
                continue;
            }
            let tokens: Vec<String> = col.iter().map(Slot::to_string).collect();
            writeln!(f, "{}", tokens.join(" "))?;
        }
        if let Some(label) = self.extra_label() {
            write!(f, "{label}:")?;
            for c in &self.reserve {
                write!(f, " {c}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for Deal {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Deal, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());

        let (hline, header) = lines
            .next()
            .ok_or_else(|| ParseError::new("empty deal file"))?;
        let mut game = None;
        let mut ranks = None;
        let mut cells = None;
        let mut declared_columns = None;
        for field in header.split_whitespace() {
            let (k, v) = field
                .split_once('=')
                .ok_or_else(|| ParseError::at(hline, format!("bad header field {field:?}")))?;
            let num = |v: &str| {
                v.parse::<u8>()
                    .map_err(|_| ParseError::at(hline, format!("bad value for {k}: {v:?}")))
            };
            match k {
                "game" => {
                    game = Some(
                        v.parse::<GameId>()
                            .map_err(|e| ParseError::at(hline, e.to_string()))?,
                    )
                }
                "ranks" => ranks = Some(num(v)?),
                "cells" => cells = Some(num(v)?),
                "columns" => declared_columns = Some(num(v)? as usize),
                _ => return Err(ParseError::at(hline, format!("unknown header field {k:?}"))),
            }
        }
        let game = game.ok_or_else(|| ParseError::at(hline, "header lacks game="))?;
        let ranks = ranks.ok_or_else(|| ParseError::at(hline, "header lacks ranks="))?;
        if !(1..=MAX_RANKS).contains(&ranks) {
            return Err(ParseError::at(hline, format!("ranks {ranks} out of range")));
        }
        if cells.is_some() && game != GameId::Freecell {
            return Err(ParseError::at(hline, "cells= applies to freecell only"));
        }

        let mut deal = Deal {
            game,
            ranks,
            cells,
            columns: Vec::new(),
            reserve: Vec::new(),
        };
        let label = deal.extra_label();
        let mut saw_extra = false;
        for (n, line) in lines {
            if saw_extra {
                return Err(ParseError::at(n, "unexpected line after reserve/stock line"));
            }
            if let Some((l, rest)) = line.split_once(':') {
                if Some(l.trim()) != label {
                    return Err(ParseError::at(n, format!("unexpected label {l:?} for {game}")));
                }
                saw_extra = true;
                for tok in rest.split_whitespace() {
                    deal.reserve.push(tok.parse().map_err(|e: ParseError| e.with_line(n))?);
                }
                continue;
            }
            if line == "." {
                deal.columns.push(Vec::new());
                continue;
            }
            let mut col = Vec::new();
            for tok in line.split_whitespace() {
                let slot = if tok == "--" {
                    if game != GameId::Montana {
                        return Err(ParseError::at(n, "gaps are only valid in montana"));
                    }
                    Slot::Gap
                } else if let Some(rest) = tok.strip_prefix('#') {
                    if game != GameId::Klondike {
                        return Err(ParseError::at(n, "face-down cards are only valid in klondike"));
                    }
                    Slot::Down(rest.parse().map_err(|e: ParseError| e.with_line(n))?)
                } else {
                    Slot::Up(tok.parse().map_err(|e: ParseError| e.with_line(n))?)
                };
                col.push(slot);
            }
            deal.columns.push(col);
        }
        if let Some(d) = declared_columns {
            if d != deal.columns.len() {
                return Err(ParseError::new(format!(
                    "header declares {d} columns, found {}",
                    deal.columns.len()
                )));
            }
        }
        Ok(deal)
    }
}
