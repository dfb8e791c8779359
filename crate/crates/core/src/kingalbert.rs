//! King Albert: Freecell without cells, nine columns and a one-way reserve.

use crate::card::Card;
use crate::deal::Deal;
use crate::error::{Error, IllegalMove};
use crate::game::{ForcePolicy, Game, GameId};
use crate::moves::Move;
use crate::tableau::{PoolKind, TableauRules};

pub use crate::tableau::TableauState as KingAlbertState;

#[derive(Clone, Copy, Debug)]
pub struct KingAlbert {
    rules: TableauRules,
}

impl KingAlbert {
    pub fn new(ranks: u8) -> KingAlbert {
        KingAlbert {
            rules: TableauRules {
                ranks,
                pool: PoolKind::Reserve,
            },
        }
    }
}

impl Game for KingAlbert {
    type State = KingAlbertState;

    fn id(&self) -> GameId {
        GameId::KingAlbert
    }

    fn ranks(&self) -> u8 {
        self.rules.ranks
    }

    fn initial_state(&self, deal: &Deal) -> Result<KingAlbertState, Error> {
        self.rules.initial_state(deal)
    }

    fn legal_moves_into(&self, state: &KingAlbertState, out: &mut Vec<Move>) {
        self.rules.legal_moves_into(state, out)
    }

    fn apply(&self, state: &KingAlbertState, mv: &Move) -> Result<KingAlbertState, IllegalMove> {
        self.rules.apply(state, mv)
    }

    fn forced_moves(&self, state: &KingAlbertState, policy: ForcePolicy) -> Vec<Move> {
        self.rules.forced_moves(state, policy)
    }

    fn is_won(&self, state: &KingAlbertState) -> bool {
        self.rules.is_won(state)
    }

    fn canonical_key(&self, state: &KingAlbertState, out: &mut Vec<u8>) {
        self.rules.canonical_key(state, out)
    }

    fn decode_key(&self, key: &[u8]) -> KingAlbertState {
        self.rules.decode_key(key)
    }

    fn score(&self, state: &KingAlbertState) -> u32 {
        state.foundations().count()
    }

    fn cards(&self, state: &KingAlbertState) -> Vec<Card> {
        self.rules.cards(state)
    }

    fn check(&self, state: &KingAlbertState) -> Result<(), String> {
        self.rules.check(state)
    }
}
