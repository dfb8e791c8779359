//! Klondike with perfect information, single-card draw and unlimited passes.
//!
//! Face-up runs move between columns; only a king-based run may enter an
//! empty column; foundation tops may come back down. A face-down card is
//! turned as part of the move that exposes it.
//!
//! The stock and waste are one cycle of cards with a cursor at the waste
//! top: cards before and at the cursor are the waste, cards after it are
//! still in the stock. Cards leave the cycle but are never added. Under
//! [`StockPolicy::Reserve`] the cycle is a set whose every card is playable
//! and there are no draw moves.

use std::fmt;

use arrayvec::ArrayVec;

use crate::card::{check_partition, Card, Foundations, Suit};
use crate::deal::{Deal, Slot};
use crate::error::{Error, IllegalMove};
use crate::game::{filter_forced, ForcePolicy, Game, GameId, StockPolicy};
use crate::moves::Move;

pub const MAX_COLUMNS: usize = 8;
pub const DOWN_CAP: usize = 12;
pub const UP_CAP: usize = 16;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct KlondikeColumn {
    pub down: ArrayVec<Card, DOWN_CAP>,
    pub up: ArrayVec<Card, UP_CAP>,
}

impl KlondikeColumn {
    pub fn new(down: &[Card], up: &[Card]) -> Result<KlondikeColumn, String> {
        Ok(KlondikeColumn {
            down: ArrayVec::try_from(down).map_err(|_| "too many face-down cards")?,
            up: ArrayVec::try_from(up).map_err(|_| "too many face-up cards")?,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty() && self.down.is_empty()
    }

    fn top(&self) -> Option<Card> {
        self.up.last().copied()
    }

    fn flip(&mut self) {
        if self.up.is_empty() {
            if let Some(c) = self.down.pop() {
                self.up.push(c);
            }
        }
    }

    fn encode(&self, out: &mut ArrayVec<u8, { DOWN_CAP + UP_CAP + 2 }>) {
        out.push(self.down.len() as u8);
        out.extend(self.down.iter().map(|c| c.to_byte()));
        out.push(self.up.len() as u8);
        out.extend(self.up.iter().map(|c| c.to_byte()));
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Source {
    Column(usize, usize),
    Stock(usize),
    Foundation,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KlondikeState {
    columns: ArrayVec<KlondikeColumn, MAX_COLUMNS>,
    stock: ArrayVec<Card, 52>,
    cursor: Option<u8>,
    foundations: Foundations,
}

impl KlondikeState {
    pub fn from_parts(
        columns: Vec<KlondikeColumn>,
        stock: Vec<Card>,
        cursor: Option<u8>,
        foundations: Foundations,
    ) -> Result<KlondikeState, String> {
        if columns.len() > MAX_COLUMNS {
            return Err(format!("at most {MAX_COLUMNS} columns supported"));
        }
        if cursor.is_some_and(|c| c as usize >= stock.len()) {
            return Err("cursor beyond stock".into());
        }
        Ok(KlondikeState {
            columns: columns.into_iter().collect(),
            stock: ArrayVec::try_from(stock.as_slice()).map_err(|_| "stock too large")?,
            cursor,
            foundations,
        })
    }

    pub fn columns(&self) -> &[KlondikeColumn] {
        &self.columns
    }

    /// Remaining stock and waste cards in cycle order.
    pub fn stock_cycle(&self) -> &[Card] {
        &self.stock
    }

    /// Index of the waste top within [`Self::stock_cycle`].
    pub fn cursor(&self) -> Option<usize> {
        self.cursor.map(|c| c as usize)
    }

    pub fn waste_top(&self) -> Option<Card> {
        self.cursor().map(|c| self.stock[c])
    }

    pub fn foundations(&self) -> &Foundations {
        &self.foundations
    }

    pub fn permuted(&self, perm: &[usize]) -> KlondikeState {
        let mut out = self.clone();
        for (dst, &src) in perm.iter().enumerate() {
            out.columns[dst] = self.columns[src].clone();
        }
        out
    }

    fn column_with_top(&self, card: Card) -> Option<usize> {
        self.columns.iter().position(|c| c.top() == Some(card))
    }

    fn locate(&self, card: Card, policy: StockPolicy) -> Option<Source> {
        for (i, col) in self.columns.iter().enumerate() {
            if let Some(k) = col.up.iter().position(|&c| c == card) {
                return Some(Source::Column(i, k));
            }
        }
        match policy {
            StockPolicy::Circular => {
                if let Some(c) = self.cursor().filter(|&c| self.stock[c] == card) {
                    return Some(Source::Stock(c));
                }
            }
            StockPolicy::Reserve => {
                if let Some(c) = self.stock.iter().position(|&s| s == card) {
                    return Some(Source::Stock(c));
                }
            }
        }
        (self.foundations.top_card(card.suit()) == Some(card)).then_some(Source::Foundation)
    }

    /// Removes the cards at `src`, returning them bottom to top.
    fn remove(&mut self, src: Source) -> ArrayVec<Card, UP_CAP> {
        match src {
            Source::Column(i, k) => {
                let col = &mut self.columns[i];
                let run = col.up.drain(k..).collect();
                col.flip();
                run
            }
            Source::Stock(c) => {
                let card = self.stock.remove(c);
                if let Some(cur) = self.cursor {
                    self.cursor = cur.checked_sub(1);
                }
                std::iter::once(card).collect()
            }
            Source::Foundation => unreachable!("foundation cards are popped by suit"),
        }
    }
}

impl fmt::Display for KlondikeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "foundations:")?;
        for s in Suit::ALL {
            match self.foundations.top_card(s) {
                Some(c) => write!(f, " {c}")?,
                None => write!(f, " -{}", s.letter())?,
            }
        }
        write!(f, "\nwaste:")?;
        let split = self.cursor().map_or(0, |c| c + 1);
        for c in &self.stock[..split] {
            write!(f, " {c}")?;
        }
        write!(f, "\nstock:")?;
        for c in &self.stock[split..] {
            write!(f, " {c}")?;
        }
        writeln!(f)?;
        for col in &self.columns {
            let down: Vec<String> = col.down.iter().map(|c| format!("#{c}")).collect();
            let up: Vec<String> = col.up.iter().map(Card::to_string).collect();
            writeln!(f, "| {} {}", down.join(" "), up.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Klondike {
    ranks: u8,
    stock: StockPolicy,
}

impl Klondike {
    pub fn new(ranks: u8, stock: StockPolicy) -> Klondike {
        Klondike { ranks, stock }
    }

    pub fn stock_policy(&self) -> StockPolicy {
        self.stock
    }

    fn stock_sources<'a>(&self, s: &'a KlondikeState) -> impl Iterator<Item = Card> + 'a {
        let (all, waste) = match self.stock {
            StockPolicy::Reserve => (&s.stock[..], None),
            StockPolicy::Circular => (&s.stock[..0], s.waste_top()),
        };
        all.iter().copied().chain(waste)
    }

    fn tops<'a>(s: &'a KlondikeState) -> impl Iterator<Item = (usize, Card)> + 'a {
        s.columns
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.top().map(|t| (i, t)))
    }

    fn check_run(up: &[Card]) -> bool {
        up.windows(2).all(|w| w[1].stacks_on(w[0]))
    }
}

impl Game for Klondike {
    type State = KlondikeState;

    fn id(&self) -> GameId {
        GameId::Klondike
    }

    fn ranks(&self) -> u8 {
        self.ranks
    }

    fn initial_state(&self, deal: &Deal) -> Result<KlondikeState, Error> {
        if deal.game != GameId::Klondike {
            return Err(Error::InvalidDeal(format!("deal is for {}, not klondike", deal.game)));
        }
        if deal.ranks != self.ranks {
            return Err(Error::InvalidDeal(format!(
                "deal has {} ranks, game configured for {}",
                deal.ranks, self.ranks
            )));
        }
        let mut columns = Vec::new();
        for slots in &deal.columns {
            let mut col = KlondikeColumn::default();
            for slot in slots {
                let full = match *slot {
                    Slot::Down(c) if col.up.is_empty() => col.down.try_push(c).is_err(),
                    Slot::Up(c) => col.up.try_push(c).is_err(),
                    _ => {
                        return Err(Error::InvalidDeal(
                            "face-down cards must lie below face-up ones".into(),
                        ))
                    }
                };
                if full {
                    return Err(Error::InvalidDeal("klondike column too long".into()));
                }
            }
            if !Klondike::check_run(&col.up) {
                return Err(Error::InvalidDeal("face-up cards must form a run".into()));
            }
            col.flip();
            columns.push(col);
        }
        let state = KlondikeState::from_parts(columns, deal.reserve.clone(), None, Foundations::default())
            .map_err(Error::InvalidDeal)?;
        self.check(&state).map_err(Error::InvalidDeal)?;
        Ok(state)
    }

    fn legal_moves_into(&self, s: &KlondikeState, out: &mut Vec<Move>) {
        let f = &s.foundations;
        for card in Klondike::tops(s).map(|(_, c)| c).chain(self.stock_sources(s)) {
            if f.accepts(card) {
                out.push(Move::ToFoundation { card, forced: false });
            }
        }
        for (i, col) in s.columns.iter().enumerate() {
            for &card in &col.up {
                for (j, target) in Klondike::tops(s) {
                    if i != j && card.stacks_on(target) {
                        out.push(Move::ToCard { card, target });
                    }
                }
            }
        }
        for card in self.stock_sources(s) {
            for (_, target) in Klondike::tops(s) {
                if card.stacks_on(target) {
                    out.push(Move::ToCard { card, target });
                }
            }
        }
        for suit in Suit::ALL {
            if let Some(card) = f.top_card(suit) {
                for (_, target) in Klondike::tops(s) {
                    if card.stacks_on(target) {
                        out.push(Move::ToCard { card, target });
                    }
                }
            }
        }
        if s.columns.iter().any(KlondikeColumn::is_empty) {
            let kings = s
                .columns
                .iter()
                .flat_map(|c| c.up.iter().copied())
                .chain(self.stock_sources(s))
                .filter(|c| c.rank() == self.ranks);
            for card in kings {
                out.push(Move::ToEmptyColumn { card });
            }
        }
        if self.stock == StockPolicy::Circular {
            let next = s.cursor().map_or(0, |c| c + 1);
            if next < s.stock.len() {
                out.push(Move::StockDraw);
            } else if !s.stock.is_empty() {
                out.push(Move::StockRecycle);
            }
        }
    }

    fn apply(&self, s: &KlondikeState, mv: &Move) -> Result<KlondikeState, IllegalMove> {
        let illegal = |why| Err(IllegalMove::new(mv, why));
        let mut next = s.clone();
        match *mv {
            Move::ToFoundation { card, .. } => {
                if !s.foundations.accepts(card) {
                    return illegal("foundation does not accept this card");
                }
                match s.locate(card, self.stock) {
                    Some(src @ Source::Column(i, k)) if k + 1 == s.columns[i].up.len() => {
                        next.remove(src);
                    }
                    Some(src @ Source::Stock(_)) => {
                        next.remove(src);
                    }
                    _ => return illegal("card is not a column top or playable stock card"),
                }
                next.foundations.push(card);
            }
            Move::ToCard { card, target } => {
                if !card.stacks_on(target) {
                    return illegal("card does not build on target");
                }
                let Some(j) = s.column_with_top(target) else {
                    return illegal("target is not a column top");
                };
                let run = match s.locate(card, self.stock) {
                    Some(Source::Foundation) => {
                        next.foundations.pop(card.suit());
                        std::iter::once(card).collect()
                    }
                    Some(src @ Source::Column(i, _)) if i != j => next.remove(src),
                    Some(src @ Source::Stock(_)) => next.remove(src),
                    _ => return illegal("card is not accessible"),
                };
                next.columns[j].up.extend(run);
            }
            Move::ToEmptyColumn { card } => {
                if card.rank() != self.ranks {
                    return illegal("only a king may enter an empty column");
                }
                let Some(e) = s.columns.iter().position(KlondikeColumn::is_empty) else {
                    return illegal("no empty column");
                };
                let run = match s.locate(card, self.stock) {
                    Some(src @ (Source::Column(..) | Source::Stock(_))) => next.remove(src),
                    _ => return illegal("card is not accessible"),
                };
                next.columns[e].up.extend(run);
            }
            Move::StockDraw => {
                let n = s.cursor().map_or(0, |c| c + 1);
                if self.stock != StockPolicy::Circular || n >= s.stock.len() {
                    return illegal("no card left to draw");
                }
                next.cursor = Some(n as u8);
            }
            Move::StockRecycle => {
                let exhausted = s.cursor().map_or(0, |c| c + 1) >= s.stock.len();
                if self.stock != StockPolicy::Circular || s.stock.is_empty() || !exhausted {
                    return illegal("stock cannot be recycled now");
                }
                next.cursor = None;
            }
            _ => return illegal("move kind not used in klondike"),
        }
        Ok(next)
    }

    fn forced_moves(&self, s: &KlondikeState, policy: ForcePolicy) -> Vec<Move> {
        filter_forced(
            Klondike::tops(s).map(|(_, c)| c).chain(self.stock_sources(s)),
            &s.foundations,
            policy,
        )
    }

    fn is_won(&self, s: &KlondikeState) -> bool {
        s.foundations.complete(self.ranks)
    }

    /// `[ncols] ([ndown] down.. [nup] up..)* [nstock] stock.. [cursor+1] f0..f3`
    /// with columns sorted; under the reserve policy the stock is sorted
    /// and the cursor byte is 0.
    fn canonical_key(&self, s: &KlondikeState, out: &mut Vec<u8>) {
        let mut cols: ArrayVec<ArrayVec<u8, { DOWN_CAP + UP_CAP + 2 }>, MAX_COLUMNS> = s
            .columns
            .iter()
            .map(|c| {
                let mut e = ArrayVec::new();
                c.encode(&mut e);
                e
            })
            .collect();
        cols.sort_unstable();
        out.push(cols.len() as u8);
        for c in &cols {
            out.extend_from_slice(c);
        }
        out.push(s.stock.len() as u8);
        match self.stock {
            StockPolicy::Circular => {
                out.extend(s.stock.iter().map(|c| c.to_byte()));
                out.push(s.cursor.map_or(0, |c| c + 1));
            }
            StockPolicy::Reserve => {
                let mut set = s.stock.clone();
                set.sort_unstable();
                out.extend(set.iter().map(|c| c.to_byte()));
                out.push(0);
            }
        }
        out.extend_from_slice(&s.foundations.0);
    }

    fn decode_key(&self, key: &[u8]) -> KlondikeState {
        let card = |b: u8| Card::from_byte(b).expect("corrupt key");
        let mut it = key.iter().copied();
        let mut next = || it.next().expect("truncated key");
        let ncols = next() as usize;
        let mut columns = ArrayVec::new();
        for _ in 0..ncols {
            let mut col = KlondikeColumn::default();
            for _ in 0..next() {
                col.down.push(card(next()));
            }
            for _ in 0..next() {
                col.up.push(card(next()));
            }
            columns.push(col);
        }
        let mut stock = ArrayVec::new();
        for _ in 0..next() {
            stock.push(card(next()));
        }
        let cursor = next().checked_sub(1);
        let foundations = Foundations([next(), next(), next(), next()]);
        KlondikeState {
            columns,
            stock,
            cursor,
            foundations,
        }
    }

    fn score(&self, s: &KlondikeState) -> u32 {
        s.foundations.count()
    }

    fn cards(&self, s: &KlondikeState) -> Vec<Card> {
        s.columns
            .iter()
            .flat_map(|c| c.down.iter().chain(c.up.iter()).copied())
            .chain(s.stock.iter().copied())
            .chain(s.foundations.cards())
            .collect()
    }

    fn check(&self, s: &KlondikeState) -> Result<(), String> {
        check_partition(self.ranks, self.cards(s))?;
        for col in &s.columns {
            if col.up.is_empty() && !col.down.is_empty() {
                return Err("face-down card left unturned".into());
            }
            if !Klondike::check_run(&col.up) {
                return Err("face-up cards do not form a run".into());
            }
        }
        if self.stock == StockPolicy::Reserve && s.cursor.is_some() {
            return Err("reserve stock has no cursor".into());
        }
        Ok(())
    }
}
