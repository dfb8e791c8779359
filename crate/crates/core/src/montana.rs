//! Montana (Gaps) without redeals.
//!
//! Four rows of `ranks` slots hold every card from 2 upward plus four gaps
//! left by the removed aces. A gap in column 0 takes any 2; any other gap
//! takes the same-suit successor of the card to its left, and a gap after
//! a king or another gap is dead. The game is won when each row reads 2 to
//! king of one suit followed by a single gap, in any row order.

use std::fmt;

use arrayvec::ArrayVec;

use crate::card::{Card, Suit};
use crate::deal::{Deal, Slot};
use crate::error::{Error, IllegalMove};
use crate::game::{ForcePolicy, Game, GameId, PruneFlags};
use crate::moves::{GapPos, Move};

pub const ROWS: usize = 4;
pub const MAX_WIDTH: usize = 13;

type Row = [Option<Card>; MAX_WIDTH];

/// Per-card table indexed by suit, then rank.
type CardGrid<T> = [[T; 16]; 4];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MontanaState {
    width: u8,
    grid: [Row; ROWS],
}

impl MontanaState {
    /// Builds a grid from `ROWS` rows of equal width.
    pub fn from_rows(rows: &[Vec<Option<Card>>]) -> Result<MontanaState, String> {
        if rows.len() != ROWS {
            return Err(format!("montana needs {ROWS} rows, got {}", rows.len()));
        }
        let width = rows[0].len();
        if !(2..=MAX_WIDTH).contains(&width) || rows.iter().any(|r| r.len() != width) {
            return Err("montana rows must share a width in 2..=13".into());
        }
        let mut grid = [[None; MAX_WIDTH]; ROWS];
        for (dst, src) in grid.iter_mut().zip(rows) {
            dst[..width].copy_from_slice(src);
        }
        Ok(MontanaState {
            width: width as u8,
            grid,
        })
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn row(&self, r: usize) -> &[Option<Card>] {
        &self.grid[r][..self.width()]
    }

    pub fn get(&self, r: usize, c: usize) -> Option<Card> {
        self.grid[r][c]
    }

    pub fn permuted(&self, perm: &[usize]) -> MontanaState {
        let mut out = self.clone();
        for (dst, &src) in perm.iter().enumerate() {
            out.grid[dst] = self.grid[src];
        }
        out
    }

    fn find(&self, card: Card) -> Option<(usize, usize)> {
        (0..ROWS).find_map(|r| {
            self.row(r)
                .iter()
                .position(|&s| s == Some(card))
                .map(|c| (r, c))
        })
    }

    fn first_card(&self, r: usize) -> Option<Card> {
        self.row(r).iter().flatten().next().copied()
    }

    /// Length of the row's correctly built prefix: 2, 3, ... of one suit
    /// starting in column 0.
    pub fn prefix_len(&self, r: usize) -> usize {
        let row = self.row(r);
        let Some(Some(first)) = row.first() else {
            return 0;
        };
        if first.rank() != 2 {
            return 0;
        }
        let suit = first.suit();
        row.iter()
            .take(row.len() - 1)
            .enumerate()
            .take_while(|&(c, s)| *s == Some(Card::new(suit, c as u8 + 2)))
            .count()
    }

    /// True if `card` is part of a finished row.
    fn frozen(&self, card: Card) -> bool {
        matches!(self.find(card), Some((r, c)) if c < self.prefix_len(r) && self.prefix_len(r) == self.width() - 1)
    }

    /// Cards that can never move again, found by starting from "nothing
    /// moves" and releasing cards until stable, with card positions. With
    /// `frozen_rows`, a 2 heading a finished row counts as fixed.
    fn stuck_cards(&self, frozen_rows: bool) -> (CardGrid<bool>, CardGrid<(usize, usize)>) {
        let w = self.width();
        let mut pos = [[(0, 0); 16]; 4];
        for r in 0..ROWS {
            for (c, slot) in self.row(r).iter().enumerate() {
                if let Some(card) = slot {
                    pos[card.suit().index()][card.rank() as usize] = (r, c);
                }
            }
        }
        let mut stuck = [[true; 16]; 4];
        let is_stuck = |stuck: &CardGrid<bool>, slot: Option<Card>| {
            slot.is_some_and(|c| stuck[c.suit().index()][c.rank() as usize])
        };
        let fixed_two = |su: usize| {
            let (r, c) = pos[su][2];
            frozen_rows && c == 0 && self.prefix_len(r) == w - 1
        };
        loop {
            let mut changed = false;
            for su in 0..4 {
                for rank in 2..=w {
                    if !stuck[su][rank] {
                        continue;
                    }
                    let me = Some(Card::new(Suit::ALL[su], rank as u8));
                    let free = if rank == 2 {
                        !fixed_two(su)
                            && (0..ROWS).any(|r| {
                                let z = self.grid[r][0];
                                z != me && !is_stuck(&stuck, z)
                            })
                    } else {
                        let (r, c) = pos[su][rank - 1];
                        !stuck[su][rank - 1]
                            || (c + 1 < w && {
                                let z = self.grid[r][c + 1];
                                z != me && !is_stuck(&stuck, z)
                            })
                    };
                    if free {
                        stuck[su][rank] = false;
                        changed = true;
                    }
                }
            }
            if !changed {
                return (stuck, pos);
            }
        }
    }

    /// True if no sequence of moves can win from here: some card that
    /// can never move again is not where a won grid needs it, rank k in
    /// column k - 2 with one suit per row.
    pub fn dead_end(&self, frozen_rows: bool) -> bool {
        let (stuck, pos) = self.stuck_cards(frozen_rows);
        self.dead_given(&stuck, &pos)
    }

    fn dead_given(&self, stuck: &CardGrid<bool>, pos: &CardGrid<(usize, usize)>) -> bool {
        let mut row_suit: [Option<usize>; ROWS] = [None; ROWS];
        let mut suit_row: [Option<usize>; 4] = [None; 4];
        for su in 0..4 {
            for rank in 2..=self.width() {
                if !stuck[su][rank] {
                    continue;
                }
                let (r, c) = pos[su][rank];
                if c + 2 != rank || *row_suit[r].get_or_insert(su) != su || *suit_row[su].get_or_insert(r) != r {
                    return true;
                }
            }
        }
        false
    }

    fn gaps(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..ROWS).flat_map(move |r| {
            (0..self.width())
                .filter(move |&c| self.grid[r][c].is_none())
                .map(move |c| (r, c))
        })
    }
}

impl fmt::Display for MontanaState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..ROWS {
            let tokens: Vec<String> = self
                .row(r)
                .iter()
                .map(|s| s.map_or_else(|| "--".to_string(), |c| c.to_string()))
                .collect();
            writeln!(f, "{}", tokens.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Montana {
    ranks: u8,
}

impl Montana {
    pub fn new(ranks: u8) -> Montana {
        Montana { ranks }
    }
}

impl Game for Montana {
    type State = MontanaState;

    fn id(&self) -> GameId {
        GameId::Montana
    }

    fn ranks(&self) -> u8 {
        self.ranks
    }

    /// Accepts rows with aces still present (they are removed here) or
    /// with gaps already in place.
    fn initial_state(&self, deal: &Deal) -> Result<MontanaState, Error> {
        if deal.game != GameId::Montana {
            return Err(Error::InvalidDeal(format!("deal is for {}, not montana", deal.game)));
        }
        if deal.ranks != self.ranks {
            return Err(Error::InvalidDeal(format!(
                "deal has {} ranks, game configured for {}",
                deal.ranks, self.ranks
            )));
        }
        if !deal.reserve.is_empty() {
            return Err(Error::InvalidDeal("montana deals have no reserve".into()));
        }
        let rows: Vec<Vec<Option<Card>>> = deal
            .columns
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| match s {
                        Slot::Up(c) if c.rank() != 1 => Some(*c),
                        _ => None,
                    })
                    .collect()
            })
            .collect();
        if rows.iter().any(|r| r.len() != self.ranks as usize) {
            return Err(Error::InvalidDeal(format!("montana rows must hold {} slots", self.ranks)));
        }
        let state = MontanaState::from_rows(&rows).map_err(Error::InvalidDeal)?;
        self.check(&state).map_err(Error::InvalidDeal)?;
        Ok(state)
    }

    fn legal_moves_into(&self, s: &MontanaState, out: &mut Vec<Move>) {
        let start = out.len();
        let twos: ArrayVec<Card, 4> = Suit::ALL.into_iter().map(|su| Card::new(su, 2)).collect();
        for (r, c) in s.gaps() {
            if c == 0 {
                let gap = GapPos::RowStart(s.first_card(r));
                for &card in &twos {
                    out.push(Move::GapFill { card, gap });
                }
            } else if let Some(left) = s.grid[r][c - 1] {
                if let Some(card) = left.successor(self.ranks) {
                    out.push(Move::GapFill {
                        card,
                        gap: GapPos::After(left),
                    });
                }
            }
        }
        // Depth-first search tries progress first.
        let prefix: [usize; ROWS] = std::array::from_fn(|r| s.prefix_len(r));
        let placed = |card: Card| matches!(s.find(card), Some((r, c)) if c < prefix[r]);
        out[start..].sort_by_key(|m| {
            let Move::GapFill { card, gap } = *m else { return 3 };
            if placed(card) {
                return 3;
            }
            match gap {
                GapPos::After(left) if placed(left) => 0,
                GapPos::RowStart(_) => 1,
                GapPos::After(_) => 2,
            }
        });
    }

    fn apply(&self, s: &MontanaState, mv: &Move) -> Result<MontanaState, IllegalMove> {
        let illegal = |why| Err(IllegalMove::new(mv, why));
        let Move::GapFill { card, gap, .. } = *mv else {
            return illegal("montana moves are gap fills");
        };
        let w = s.width();
        let target = match gap {
            GapPos::After(left) => {
                if left.successor(self.ranks) != Some(card) {
                    return illegal("card does not follow the card left of the gap");
                }
                match s.find(left) {
                    Some((r, c)) if c + 1 < w && s.grid[r][c + 1].is_none() => (r, c + 1),
                    _ => return illegal("no gap after that card"),
                }
            }
            GapPos::RowStart(anchor) => {
                if card.rank() != 2 {
                    return illegal("only a 2 may start a row");
                }
                match (0..ROWS).find(|&r| s.grid[r][0].is_none() && s.first_card(r) == anchor) {
                    Some(r) => (r, 0),
                    None => return illegal("no such row-start gap"),
                }
            }
        };
        let Some((fr, fc)) = s.find(card) else {
            return illegal("card is not on the grid");
        };
        let mut next = s.clone();
        next.grid[fr][fc] = None;
        next.grid[target.0][target.1] = Some(card);
        Ok(next)
    }

    fn forced_moves(&self, _: &MontanaState, _: ForcePolicy) -> Vec<Move> {
        Vec::new()
    }

    fn is_won(&self, s: &MontanaState) -> bool {
        let w = s.width();
        let mut suits = [false; 4];
        for r in 0..ROWS {
            if s.prefix_len(r) != w - 1 || s.grid[r][w - 1].is_some() {
                return false;
            }
            let suit = s.grid[r][0].unwrap().suit().index();
            if std::mem::replace(&mut suits[suit], true) {
                return false;
            }
        }
        true
    }

    /// `[width]` then the four rows, one byte per slot (0 = gap), in the
    /// least form over row orders and suit relabellings. The rules only
    /// ever ask whether two cards share a suit, never which suit it is.
    /// `[width]` then the four rows sorted, one byte per slot (0 = gap).
    fn canonical_key(&self, s: &MontanaState, out: &mut Vec<u8>) {
        let w = s.width();
        let mut rows: [[u8; MAX_WIDTH]; ROWS] = [[0; MAX_WIDTH]; ROWS];
        for (dst, src) in rows.iter_mut().zip(&s.grid) {
            for (d, c) in dst.iter_mut().zip(src) {
                *d = c.map_or(0, Card::to_byte);
            }
        }
        rows.sort_unstable();
        out.push(w as u8);
        for row in &rows {
            out.extend_from_slice(&row[..w]);
        }
    }

    fn decode_key(&self, key: &[u8]) -> MontanaState {
        let w = key[0] as usize;
        let mut grid = [[None; MAX_WIDTH]; ROWS];
        for (r, row) in grid.iter_mut().enumerate() {
            for (c, slot) in row.iter_mut().take(w).enumerate() {
                *slot = Card::from_byte(key[1 + r * w + c]);
            }
        }
        MontanaState {
            width: w as u8,
            grid,
        }
    }

    fn score(&self, s: &MontanaState) -> u32 {
        (0..ROWS).map(|r| s.prefix_len(r) as u32).sum()
    }

    fn max_score(&self) -> u32 {
        4 * (self.ranks as u32 - 1)
    }

    fn cards(&self, s: &MontanaState) -> Vec<Card> {
        (0..ROWS).flat_map(|r| s.row(r).iter().flatten().copied()).collect()
    }

    fn check(&self, s: &MontanaState) -> Result<(), String> {
        if s.width() != self.ranks as usize {
            return Err(format!("grid width {} for {} ranks", s.width(), self.ranks));
        }
        let mut seen = [[false; MAX_WIDTH + 1]; 4];
        let mut gaps = 0;
        for r in 0..ROWS {
            for slot in s.row(r) {
                match slot {
                    None => gaps += 1,
                    Some(c) if c.rank() == 1 || c.rank() > self.ranks => {
                        return Err(format!("card {c} does not belong on the grid"))
                    }
                    Some(c) => {
                        if std::mem::replace(&mut seen[c.suit().index()][c.rank() as usize], true) {
                            return Err(format!("card {c} appears twice"));
                        }
                    }
                }
            }
        }
        if gaps != ROWS {
            return Err(format!("{gaps} gaps, expected {ROWS}"));
        }
        Ok(())
    }

    fn prune(&self, s: &MontanaState, moves: &mut Vec<Move>, flags: &PruneFlags) {
        if flags.montana_won_prefix {
            // Only a finished row is left alone. A 2 heading an unfinished
            // prefix sometimes has to move to another row's first column.
            moves.retain(|m| !m.card().is_some_and(|c| s.frozen(c)));
        }
        if flags.montana_dead_ends && s.dead_end(flags.montana_won_prefix) {
            moves.clear();
        }
    }
}
