//! Shared engine for the open-tableau games: Freecell and King Albert.
//!
//! Both build down in alternating colors, move single cards only, allow
//! any card into an empty column and have no foundation-to-column moves.
//! They differ only in the side pool: Freecell cells accept column tops,
//! the King Albert reserve only ever gives cards out.

use std::fmt;

use arrayvec::ArrayVec;

use crate::card::{check_partition, Card, Foundations};
use crate::deal::{Deal, Slot};
use crate::error::{Error, IllegalMove};
use crate::game::{filter_forced, ForcePolicy, GameId};
use crate::moves::Move;

pub const MAX_COLUMNS: usize = 10;
pub const COLUMN_CAP: usize = 32;
pub const POOL_CAP: usize = 16;

pub type Column = ArrayVec<Card, COLUMN_CAP>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum PoolKind {
    Cells(u8),
    Reserve,
}

/// Columns, a side pool (cells or reserve) and the foundations.
///
/// Columns keep their physical positions; symmetry is handled by the
/// canonical key, which sorts them. The pool is a set, held sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TableauState {
    columns: ArrayVec<Column, MAX_COLUMNS>,
    pool: ArrayVec<Card, POOL_CAP>,
    foundations: Foundations,
}

impl TableauState {
    /// Builds a state from parts. Fails if a capacity is exceeded.
    pub fn from_parts(
        columns: Vec<Vec<Card>>,
        pool: Vec<Card>,
        foundations: Foundations,
    ) -> Result<TableauState, String> {
        if columns.len() > MAX_COLUMNS {
            return Err(format!("at most {MAX_COLUMNS} columns supported"));
        }
        let mut cols = ArrayVec::new();
        for c in columns {
            cols.push(
                Column::try_from(c.as_slice())
                    .map_err(|_| format!("column longer than {COLUMN_CAP} cards"))?,
            );
        }
        let mut pool: ArrayVec<Card, POOL_CAP> = ArrayVec::try_from(pool.as_slice())
            .map_err(|_| format!("pool larger than {POOL_CAP} cards"))?;
        pool.sort_unstable();
        Ok(TableauState {
            columns: cols,
            pool,
            foundations,
        })
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    /// Freecell cells or King Albert reserve, in card order.
    pub fn pool(&self) -> &[Card] {
        &self.pool
    }

    pub fn foundations(&self) -> &Foundations {
        &self.foundations
    }

    /// The same state with its columns reordered by `perm`.
    pub fn permuted(&self, perm: &[usize]) -> TableauState {
        let mut out = self.clone();
        for (dst, &src) in perm.iter().enumerate() {
            out.columns[dst] = self.columns[src].clone();
        }
        out
    }

    fn tops(&self) -> impl Iterator<Item = (usize, Card)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.last().map(|&t| (i, t)))
    }

    fn column_with_top(&self, card: Card) -> Option<usize> {
        self.columns.iter().position(|c| c.last() == Some(&card))
    }

    /// Removes an accessible card: a column top or a pool card.
    fn take(&mut self, card: Card) -> bool {
        if let Some(i) = self.pool.iter().position(|&c| c == card) {
            self.pool.remove(i);
            return true;
        }
        match self.column_with_top(card) {
            Some(i) => {
                self.columns[i].pop();
                true
            }
            None => false,
        }
    }

    fn pool_insert(&mut self, card: Card) {
        let at = self.pool.partition_point(|&c| c < card);
        self.pool.insert(at, card);
    }
}

impl fmt::Display for TableauState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "foundations:")?;
        for s in crate::card::Suit::ALL {
            match self.foundations.top_card(s) {
                Some(c) => write!(f, " {c}")?,
                None => write!(f, " -{}", s.letter())?,
            }
        }
        write!(f, "\npool:")?;
        for c in &self.pool {
            write!(f, " {c}")?;
        }
        writeln!(f)?;
        for col in &self.columns {
            let cards: Vec<String> = col.iter().map(Card::to_string).collect();
            writeln!(f, "| {}", cards.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct TableauRules {
    pub ranks: u8,
    pub pool: PoolKind,
}

impl TableauRules {
    fn game(&self) -> GameId {
        match self.pool {
            PoolKind::Cells(_) => GameId::Freecell,
            PoolKind::Reserve => GameId::KingAlbert,
        }
    }

    pub fn initial_state(&self, deal: &Deal) -> Result<TableauState, Error> {
        let game = self.game();
        if deal.game != game {
            return Err(Error::InvalidDeal(format!("deal is for {}, not {game}", deal.game)));
        }
        if deal.ranks != self.ranks {
            return Err(Error::InvalidDeal(format!(
                "deal has {} ranks, game configured for {}",
                deal.ranks, self.ranks
            )));
        }
        if game == GameId::Freecell && !deal.reserve.is_empty() {
            return Err(Error::InvalidDeal("freecell deals have no reserve".into()));
        }
        let mut columns = Vec::with_capacity(deal.columns.len());
        for col in &deal.columns {
            let mut cards = Vec::with_capacity(col.len());
            for slot in col {
                match *slot {
                    Slot::Up(c) => cards.push(c),
                    _ => return Err(Error::InvalidDeal(format!("{game} columns hold face-up cards only"))),
                }
            }
            if cards.len() + self.ranks as usize > COLUMN_CAP {
                return Err(Error::InvalidDeal(format!("column of {} cards is too long", cards.len())));
            }
            columns.push(cards);
        }
        let state = TableauState::from_parts(columns, deal.reserve.clone(), Foundations::default())
            .map_err(Error::InvalidDeal)?;
        self.check(&state).map_err(Error::InvalidDeal)?;
        Ok(state)
    }

    pub fn legal_moves_into(&self, s: &TableauState, out: &mut Vec<Move>) {
        let f = &s.foundations;
        let pool_sources = s.pool.iter().map(|&c| (None, c));
        let sources: ArrayVec<(Option<usize>, Card), { MAX_COLUMNS + POOL_CAP }> =
            s.tops().map(|(i, c)| (Some(i), c)).chain(pool_sources).collect();

        for &(_, card) in &sources {
            if f.accepts(card) {
                out.push(Move::ToFoundation { card, forced: false });
            }
        }
        for &(from, card) in &sources {
            for (j, target) in s.tops() {
                if Some(j) != from && card.stacks_on(target) {
                    out.push(Move::ToCard { card, target });
                }
            }
        }
        if s.columns.iter().any(|c| c.is_empty()) {
            for &(_, card) in &sources {
                out.push(Move::ToEmptyColumn { card });
            }
        }
        if let PoolKind::Cells(n) = self.pool {
            if s.pool.len() < n as usize {
                for (_, card) in s.tops() {
                    out.push(Move::ToCell { card });
                }
            }
        }
    }

    pub fn apply(&self, s: &TableauState, mv: &Move) -> Result<TableauState, IllegalMove> {
        let illegal = |why| Err(IllegalMove::new(mv, why));
        let mut next = s.clone();
        match *mv {
            Move::ToFoundation { card, .. } => {
                if !s.foundations.accepts(card) {
                    return illegal("foundation does not accept this card");
                }
                if !next.take(card) {
                    return illegal("card is not accessible");
                }
                next.foundations.push(card);
            }
            Move::ToCell { card } => {
                let PoolKind::Cells(n) = self.pool else {
                    return illegal("no cells in this game");
                };
                if s.pool.len() >= n as usize {
                    return illegal("no free cell");
                }
                let Some(i) = s.column_with_top(card) else {
                    return illegal("card is not a column top");
                };
                next.columns[i].pop();
                next.pool_insert(card);
            }
            Move::ToCard { card, target } => {
                if !card.stacks_on(target) {
                    return illegal("card does not build on target");
                }
                let Some(j) = s.column_with_top(target) else {
                    return illegal("target is not a column top");
                };
                if !next.take(card) {
                    return illegal("card is not accessible");
                }
                next.columns[j].push(card);
            }
            Move::ToEmptyColumn { card } => {
                let Some(e) = s.columns.iter().position(|c| c.is_empty()) else {
                    return illegal("no empty column");
                };
                if !next.take(card) {
                    return illegal("card is not accessible");
                }
                next.columns[e].push(card);
            }
            _ => return illegal("move kind not used in this game"),
        }
        Ok(next)
    }

    pub fn forced_moves(&self, s: &TableauState, policy: ForcePolicy) -> Vec<Move> {
        filter_forced(
            s.tops().map(|(_, c)| c).chain(s.pool.iter().copied()),
            &s.foundations,
            policy,
        )
    }

    pub fn is_won(&self, s: &TableauState) -> bool {
        s.foundations.complete(self.ranks)
    }

    /// `[ncols] ([len] cards..)* [npool] pool.. f0 f1 f2 f3`, columns sorted.
    pub fn canonical_key(&self, s: &TableauState, out: &mut Vec<u8>) {
        let mut cols: ArrayVec<&[Card], MAX_COLUMNS> = s.columns.iter().map(|c| c.as_slice()).collect();
        cols.sort_unstable();
        out.push(cols.len() as u8);
        for col in cols {
            out.push(col.len() as u8);
            out.extend(col.iter().map(|c| c.to_byte()));
        }
        let mut pool: ArrayVec<Card, POOL_CAP> = s.pool.clone();
        pool.sort_unstable();
        out.push(pool.len() as u8);
        out.extend(pool.iter().map(|c| c.to_byte()));
        out.extend_from_slice(&s.foundations.0);
    }

    pub fn decode_key(&self, key: &[u8]) -> TableauState {
        let card = |b: u8| Card::from_byte(b).expect("corrupt key");
        let mut pos = 0;
        let mut next = || {
            let b = key[pos];
            pos += 1;
            b
        };
        let ncols = next() as usize;
        let mut columns = ArrayVec::new();
        for _ in 0..ncols {
            let len = next() as usize;
            let mut col = Column::new();
            for _ in 0..len {
                col.push(card(next()));
            }
            columns.push(col);
        }
        let npool = next() as usize;
        let mut pool = ArrayVec::new();
        for _ in 0..npool {
            pool.push(card(next()));
        }
        let foundations = Foundations([next(), next(), next(), next()]);
        TableauState {
            columns,
            pool,
            foundations,
        }
    }

    pub fn cards(&self, s: &TableauState) -> Vec<Card> {
        s.columns
            .iter()
            .flatten()
            .copied()
            .chain(s.pool.iter().copied())
            .chain(s.foundations.cards())
            .collect()
    }

    pub fn check(&self, s: &TableauState) -> Result<(), String> {
        check_partition(self.ranks, self.cards(s))?;
        if s.foundations.0.iter().any(|&v| v > self.ranks) {
            return Err("foundation beyond deck size".into());
        }
        if let PoolKind::Cells(n) = self.pool {
            if s.pool.len() > n as usize {
                return Err(format!("{} cards in {n} cells", s.pool.len()));
            }
        }
        if s.pool.windows(2).any(|w| w[0] >= w[1]) {
            return Err("pool not in card order".into());
        }
        Ok(())
    }
}
