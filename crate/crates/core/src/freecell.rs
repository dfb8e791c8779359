//! Freecell: eight columns, `cells` single-card cells, single-card moves.

use crate::card::Card;
use crate::deal::Deal;
use crate::error::{Error, IllegalMove};
use crate::game::{ForcePolicy, Game, GameId, MAX_CELLS};
use crate::moves::Move;
use crate::tableau::{PoolKind, TableauRules};

pub use crate::tableau::TableauState as FreecellState;

#[derive(Clone, Copy, Debug)]
pub struct Freecell {
    rules: TableauRules,
}

impl Freecell {
    pub fn new(ranks: u8, cells: u8) -> Freecell {
        assert!(cells <= MAX_CELLS);
        Freecell {
            rules: TableauRules {
                ranks,
                pool: PoolKind::Cells(cells),
            },
        }
    }

    pub fn cells(&self) -> u8 {
        match self.rules.pool {
            PoolKind::Cells(n) => n,
            PoolKind::Reserve => unreachable!(),
        }
    }
}

impl Game for Freecell {
    type State = FreecellState;

    fn id(&self) -> GameId {
        GameId::Freecell
    }

    fn ranks(&self) -> u8 {
        self.rules.ranks
    }

    fn initial_state(&self, deal: &Deal) -> Result<FreecellState, Error> {
        self.rules.initial_state(deal)
    }

    fn legal_moves_into(&self, state: &FreecellState, out: &mut Vec<Move>) {
        self.rules.legal_moves_into(state, out)
    }

    fn apply(&self, state: &FreecellState, mv: &Move) -> Result<FreecellState, IllegalMove> {
        self.rules.apply(state, mv)
    }

    fn forced_moves(&self, state: &FreecellState, policy: ForcePolicy) -> Vec<Move> {
        self.rules.forced_moves(state, policy)
    }

    fn is_won(&self, state: &FreecellState) -> bool {
        self.rules.is_won(state)
    }

    fn canonical_key(&self, state: &FreecellState, out: &mut Vec<u8>) {
        self.rules.canonical_key(state, out)
    }

    fn decode_key(&self, key: &[u8]) -> FreecellState {
        self.rules.decode_key(key)
    }

    fn score(&self, state: &FreecellState) -> u32 {
        state.foundations().count()
    }

    fn cards(&self, state: &FreecellState) -> Vec<Card> {
        self.rules.cards(state)
    }

    fn check(&self, state: &FreecellState) -> Result<(), String> {
        self.rules.check(state)
    }
}
