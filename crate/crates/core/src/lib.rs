//! Exhaustive solvability search for patience games.
//!
//! Four games share one search engine: Freecell, King Albert, Klondike and
//! Montana. Each game supplies its move rules, a safe-automove rule and a
//! canonical key that forgets column, row and cell order. The solver runs
//! breadth- or depth-first over closure-normalized canonical states and
//! stores every key exactly, so an unsolvable verdict is a proof.
//!
//! ```
//! use patience::{dealers, solve_deal, GameId, GameParams, SearchConfig, Verdict};
//!
//! let params = GameParams::new(GameId::Freecell).with_ranks(5);
//! let deal = dealers::seeded_deal(&params, 3).unwrap();
//! let outcome = solve_deal(&deal, &params, &SearchConfig::default()).unwrap();
//! assert_ne!(outcome.verdict, Verdict::ResourceExhausted);
//! ```

pub mod batch;
pub mod card;
pub mod deal;
pub mod dealers;
mod driver;
pub mod error;
pub mod freecell;
pub mod game;
pub mod kingalbert;
pub mod klondike;
pub mod montana;
pub mod moves;
pub mod solver;
pub mod tableau;

pub use card::{Card, Color, Deck, Foundations, Suit};
pub use deal::{Deal, Slot};
pub use driver::{max_score_deal, solve_deal, verify_solution, VerifyError};
pub use error::{Error, IllegalMove, ParseError};
pub use game::{ForcePolicy, Game, GameId, GameParams, PruneFlags, StockPolicy};
pub use moves::{GapPos, Move};
pub use solver::{MaxScoreOutcome, SearchConfig, SearchOutcome, SearchStats, Strategy, Verdict};
