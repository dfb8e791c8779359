//! Runs the solver on a deal, choosing the game from its parameters.

use thiserror::Error;

use crate::deal::Deal;
use crate::error::{Error, IllegalMove};
use crate::freecell::Freecell;
use crate::game::{Game, GameId, GameParams};
use crate::kingalbert::KingAlbert;
use crate::klondike::Klondike;
use crate::montana::Montana;
use crate::moves::Move;
use crate::solver::{self, MaxScoreOutcome, SearchConfig, SearchOutcome};

macro_rules! with_game {
    ($params:expr, |$g:ident| $body:expr) => {{
        let p: &GameParams = $params;
        match p.game {
            GameId::Freecell => {
                let $g = Freecell::new(p.ranks, p.cells);
                $body
            }
            GameId::KingAlbert => {
                let $g = KingAlbert::new(p.ranks);
                $body
            }
            GameId::Klondike => {
                let $g = Klondike::new(p.ranks, p.stock);
                $body
            }
            GameId::Montana => {
                let $g = Montana::new(p.ranks);
                $body
            }
        }
    }};
}

fn prepare(params: &GameParams, config: &SearchConfig) -> Result<(), Error> {
    params.validate()?;
    config.validate()
}

/// Solves `deal`. Limits that cut the search short give a
/// `ResourceExhausted` verdict, not an error.
pub fn solve_deal(deal: &Deal, params: &GameParams, config: &SearchConfig) -> Result<SearchOutcome, Error> {
    prepare(params, config)?;
    with_game!(params, |g| {
        let initial = g.initial_state(deal)?;
        Ok(solver::solve(&g, &initial, config))
    })
}

/// Highest score reachable from `deal`; Klondike only.
pub fn max_score_deal(deal: &Deal, params: &GameParams, config: &SearchConfig) -> Result<MaxScoreOutcome, Error> {
    prepare(params, config)?;
    if params.game != GameId::Klondike {
        return Err(Error::Usage(format!("max score is defined for klondike, not {}", params.game)));
    }
    let g = Klondike::new(params.ranks, params.stock);
    let initial = g.initial_state(deal)?;
    Ok(solver::max_score(&g, &initial, config))
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Deal(#[from] Error),
    #[error("move {index}: {source}")]
    Illegal { index: usize, source: IllegalMove },
    #[error("solution ends before the game is won (score {score})")]
    NotWon { score: u32 },
}

/// Replays `moves` from the initial layout of `deal` with no automatic
/// moves and checks that the game ends won.
pub fn verify_solution(deal: &Deal, params: &GameParams, moves: &[Move]) -> Result<(), VerifyError> {
    params.validate()?;
    with_game!(params, |g| {
        let mut state = g.initial_state(deal)?;
        for (index, mv) in moves.iter().enumerate() {
            state = g
                .apply(&state, mv)
                .map_err(|source| VerifyError::Illegal { index, source })?;
        }
        if g.is_won(&state) {
            Ok(())
        } else {
            Err(VerifyError::NotWon { score: g.score(&state) })
        }
    })
}
