//! The interface every game module implements, and the parameters that
//! select a game and its layout.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use crate::card::Card;
use crate::deal::Deal;
use crate::error::{Error, IllegalMove};
use crate::moves::Move;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GameId {
    Freecell,
    KingAlbert,
    Klondike,
    Montana,
}

impl GameId {
    pub const ALL: [GameId; 4] = [
        GameId::Freecell,
        GameId::KingAlbert,
        GameId::Klondike,
        GameId::Montana,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GameId::Freecell => "freecell",
            GameId::KingAlbert => "kingalbert",
            GameId::Klondike => "klondike",
            GameId::Montana => "montana",
        }
    }
}

impl fmt::Display for GameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GameId {
    type Err = Error;

    fn from_str(s: &str) -> Result<GameId, Error> {
        GameId::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown game {s:?}")))
    }
}

/// How the Klondike stock and waste are modelled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum StockPolicy {
    /// Single-card draw with unlimited passes through the stock.
    #[default]
    Circular,
    /// Every remaining stock card is directly playable.
    Reserve,
}

impl FromStr for StockPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<StockPolicy, Error> {
        match s {
            "circular" => Ok(StockPolicy::Circular),
            "reserve" => Ok(StockPolicy::Reserve),
            _ => Err(Error::Usage(format!("unknown stock policy {s:?}"))),
        }
    }
}

/// Which foundation moves are applied automatically after every move.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ForcePolicy {
    /// Only moves passing the safe-automove criterion.
    #[default]
    Safe,
    /// Every playable foundation move. Can miss solutions.
    Optimistic,
    Off,
}

impl FromStr for ForcePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<ForcePolicy, Error> {
        match s {
            "safe" => Ok(ForcePolicy::Safe),
            "optimistic" => Ok(ForcePolicy::Optimistic),
            "off" => Ok(ForcePolicy::Off),
            _ => Err(Error::Usage(format!("unknown force policy {s:?}"))),
        }
    }
}

/// Game-specific search pruning toggles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PruneFlags {
    /// Montana: never move a card out of a finished row.
    pub montana_won_prefix: bool,
    /// Montana: stop at grids where some card can never reach its place.
    pub montana_dead_ends: bool,
}

impl Default for PruneFlags {
    fn default() -> Self {
        PruneFlags {
            montana_won_prefix: true,
            montana_dead_ends: true,
        }
    }
}

impl PruneFlags {
    pub fn none() -> PruneFlags {
        PruneFlags {
            montana_won_prefix: false,
            montana_dead_ends: false,
        }
    }
}

/// Selects a game and its layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GameParams {
    pub game: GameId,
    pub ranks: u8,
    /// Freecell cells, `0..=7`.
    pub cells: u8,
    pub stock: StockPolicy,
}

pub const MAX_CELLS: u8 = 7;

impl GameParams {
    pub fn new(game: GameId) -> GameParams {
        GameParams {
            game,
            ranks: 13,
            cells: 4,
            stock: StockPolicy::Circular,
        }
    }

    pub fn with_ranks(mut self, ranks: u8) -> GameParams {
        self.ranks = ranks;
        self
    }

    pub fn with_cells(mut self, cells: u8) -> GameParams {
        self.cells = cells;
        self
    }

    pub fn with_stock(mut self, stock: StockPolicy) -> GameParams {
        self.stock = stock;
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(3..=13).contains(&self.ranks) {
            return Err(Error::Usage(format!("ranks must be in 3..=13, got {}", self.ranks)));
        }
        if self.cells > MAX_CELLS {
            return Err(Error::Usage(format!(
                "cells must be in 0..={MAX_CELLS}, got {}",
                self.cells
            )));
        }
        Ok(())
    }
}

/// The contract each game module fulfils.
///
/// States are plain values. `apply` never mutates its input, and
/// `canonical_key` is a deterministic byte string that identifies a state
/// up to the game's symmetries: two states with the same key have the same
/// futures. Keys are decodable, so the search stores keys only.
pub trait Game: Sync {
    type State: Clone + Eq + Hash + fmt::Debug + Send + Sync;

    fn id(&self) -> GameId;

    fn ranks(&self) -> u8;

    fn initial_state(&self, deal: &Deal) -> Result<Self::State, Error>;

    /// Appends every rule-legal move to `out`.
    fn legal_moves_into(&self, state: &Self::State, out: &mut Vec<Move>);

    fn legal_moves(&self, state: &Self::State) -> Vec<Move> {
        let mut out = Vec::new();
        self.legal_moves_into(state, &mut out);
        out
    }

    /// Applies `mv`, checking that it is legal in `state`.
    fn apply(&self, state: &Self::State, mv: &Move) -> Result<Self::State, IllegalMove>;

    /// The foundation moves `policy` forces in this state, in ascending
    /// canonical card order, each annotated `forced`.
    fn forced_moves(&self, state: &Self::State, policy: ForcePolicy) -> Vec<Move>;

    fn is_won(&self, state: &Self::State) -> bool;

    /// Appends the canonical key of `state` to `out`.
    fn canonical_key(&self, state: &Self::State, out: &mut Vec<u8>);

    fn key(&self, state: &Self::State) -> Vec<u8> {
        let mut out = Vec::new();
        self.canonical_key(state, &mut out);
        out
    }

    /// Rebuilds a representative state from its canonical key.
    fn decode_key(&self, key: &[u8]) -> Self::State;

    /// Cards on the foundations (Montana: cards in correctly built row
    /// prefixes). Equals the deck size exactly when the game is won.
    fn score(&self, state: &Self::State) -> u32;

    /// Every card in the state, in no particular order.
    fn cards(&self, state: &Self::State) -> Vec<Card>;

    /// Well-formedness check for the game's state invariants.
    fn check(&self, state: &Self::State) -> Result<(), String>;

    /// Drops moves from `moves`, the full legal list for `state`, that the
    /// search may skip under `flags` without changing the verdict.
    fn prune(&self, _state: &Self::State, _moves: &mut Vec<Move>, _flags: &PruneFlags) {}

    fn max_score(&self) -> u32 {
        4 * self.ranks() as u32
    }
}

/// Foundation-forcing filter shared by the three foundation games: keeps
/// the moves `policy` forces and orders them by card.
pub(crate) fn filter_forced(
    candidates: impl IntoIterator<Item = Card>,
    foundations: &crate::card::Foundations,
    policy: ForcePolicy,
) -> Vec<Move> {
    if policy == ForcePolicy::Off {
        return Vec::new();
    }
    let mut cards: Vec<Card> = candidates
        .into_iter()
        .filter(|&c| foundations.accepts(c))
        .filter(|&c| policy == ForcePolicy::Optimistic || foundations.is_safe(c))
        .collect();
    cards.sort_unstable();
    cards.dedup();
    cards
        .into_iter()
        .map(|card| Move::ToFoundation { card, forced: true })
        .collect()
}
