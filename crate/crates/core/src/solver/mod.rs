//! Game-generic search over closure-normalized canonical states.

mod search;
mod table;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

pub use search::{forced_closure, max_score, reachable, solve, MaxScoreOutcome};
pub use table::{EntryId, Insert, TranspositionTable};

use crate::error::Error;
use crate::game::{ForcePolicy, PruneFlags};
use crate::moves::Move;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Strategy {
    Bfs,
    #[default]
    Dfs,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Strategy, Error> {
        match s {
            "bfs" => Ok(Strategy::Bfs),
            "dfs" => Ok(Strategy::Dfs),
            _ => Err(Error::Usage(format!("unknown strategy {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchConfig {
    pub strategy: Strategy,
    pub force: ForcePolicy,
    /// Most canonical states the table may hold.
    pub max_states: u64,
    pub max_seconds: f64,
    pub workers: usize,
    pub prune: PruneFlags,
    /// Keep predecessor links so the solution can be read back directly;
    /// without them a solvable verdict triggers a second, bounded search.
    pub keep_parents: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            strategy: Strategy::Dfs,
            force: ForcePolicy::Safe,
            max_states: 500_000_000,
            max_seconds: 600.0,
            workers: 1,
            prune: PruneFlags::default(),
            keep_parents: true,
        }
    }
}

impl SearchConfig {
    pub fn bfs() -> SearchConfig {
        SearchConfig {
            strategy: Strategy::Bfs,
            ..SearchConfig::default()
        }
    }

    pub fn with_force(mut self, force: ForcePolicy) -> SearchConfig {
        self.force = force;
        self
    }

    pub fn with_max_states(mut self, n: u64) -> SearchConfig {
        self.max_states = n;
        self
    }

    pub fn with_workers(mut self, n: usize) -> SearchConfig {
        self.workers = n;
        self
    }

    pub fn with_prune(mut self, prune: PruneFlags) -> SearchConfig {
        self.prune = prune;
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.max_states == 0 || !(self.max_seconds > 0.0) {
            return Err(Error::Usage("search limits must be positive".into()));
        }
        if self.workers == 0 {
            return Err(Error::Usage("need at least one worker".into()));
        }
        if self.workers > 1 && self.strategy == Strategy::Dfs {
            return Err(Error::Usage("depth-first search runs on a single worker".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Solvable,
    Unsolvable,
    ResourceExhausted,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Solvable => "solvable",
            Verdict::Unsolvable => "unsolvable",
            Verdict::ResourceExhausted => "exhausted",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SearchStats {
    pub states_stored: u64,
    pub states_expanded: u64,
    pub max_frontier: u64,
    pub elapsed: Duration,
    /// Player moves in the solution, forced moves excluded.
    pub solution_ply: Option<usize>,
}

impl SearchStats {
    /// `key=value` pairs on one line.
    pub fn to_kv(&self) -> String {
        let mut s = format!(
            "states_stored={} states_expanded={} max_frontier={} seconds={:.3}",
            self.states_stored,
            self.states_expanded,
            self.max_frontier,
            self.elapsed.as_secs_f64()
        );
        if let Some(p) = self.solution_ply {
            s.push_str(&format!(" ply={p}"));
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub verdict: Verdict,
    /// Replayable from the initial state; forced moves are annotated.
    pub solution: Option<Vec<Move>>,
    pub stats: SearchStats,
}
