//! Solvability statistics over a range of seeded deals.

use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use crate::dealers::seeded_deal;
use crate::driver::{solve_deal, verify_solution};
use crate::error::Error;
use crate::game::{GameId, GameParams};
use crate::solver::{SearchConfig, SearchStats, Verdict};

#[derive(Clone, Debug, PartialEq)]
pub struct DealResult {
    pub seed: u64,
    pub verdict: Verdict,
    pub stats: SearchStats,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BatchReport {
    pub game: GameId,
    pub ranks: u8,
    pub seeds: RangeInclusive<u64>,
    pub deals: Vec<DealResult>,
    pub elapsed: Duration,
}

impl BatchReport {
    fn count(&self, v: Verdict) -> usize {
        self.deals.iter().filter(|d| d.verdict == v).count()
    }

    pub fn solvable(&self) -> usize {
        self.count(Verdict::Solvable)
    }

    pub fn unsolvable(&self) -> usize {
        self.count(Verdict::Unsolvable)
    }

    pub fn exhausted(&self) -> usize {
        self.count(Verdict::ResourceExhausted)
    }

    /// Solvable deals over all deals; exhausted deals count against it.
    pub fn solvable_fraction(&self) -> f64 {
        self.solvable() as f64 / self.deals.len() as f64
    }

    /// Everything except timings, so single-worker runs reproduce it.
    pub fn body(&self) -> String {
        let mut s = String::new();
        for d in &self.deals {
            let ply = d.stats.solution_ply.map_or_else(|| "-".to_string(), |p| p.to_string());
            writeln!(
                s,
                "seed {:>6}  {:<10}  stored {:>10}  expanded {:>10}  ply {}",
                d.seed, d.verdict, d.stats.states_stored, d.stats.states_expanded, ply
            )
            .unwrap();
        }
        writeln!(
            s,
            "{} ranks={} seeds={}..{}: {} solvable, {} unsolvable, {} exhausted of {} ({:.1}% solvable)",
            self.game,
            self.ranks,
            self.seeds.start(),
            self.seeds.end(),
            self.solvable(),
            self.unsolvable(),
            self.exhausted(),
            self.deals.len(),
            100.0 * self.solvable_fraction()
        )
        .unwrap();
        s
    }

    pub fn to_text(&self) -> String {
        format!("{}total {:.2}s\n", self.body(), self.elapsed.as_secs_f64())
    }

    /// One `key=value` line per deal and a summary line.
    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        for d in &self.deals {
            writeln!(s, "seed={} verdict={} {}", d.seed, d.verdict, d.stats.to_kv()).unwrap();
        }
        writeln!(
            s,
            "game={} ranks={} deals={} solvable={} unsolvable={} exhausted={} fraction={:.4} seconds={:.3}",
            self.game,
            self.ranks,
            self.deals.len(),
            self.solvable(),
            self.unsolvable(),
            self.exhausted(),
            self.solvable_fraction(),
            self.elapsed.as_secs_f64()
        )
        .unwrap();
        s
    }
}

/// Parses an inclusive `A..B` seed range.
pub fn parse_seed_range(s: &str) -> Result<RangeInclusive<u64>, Error> {
    let bad = || Error::Usage(format!("bad seed range {s:?} (want A..B)"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let (a, b): (u64, u64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
    if a > b {
        return Err(Error::Usage(format!("seed range {s:?} is empty")));
    }
    Ok(a..=b)
}

/// Solves the seeded deal for every seed in `seeds`, one after another.
/// Each solution is replayed before it is counted.
pub fn run_batch(params: &GameParams, seeds: RangeInclusive<u64>, config: &SearchConfig) -> Result<BatchReport, Error> {
    if seeds.is_empty() {
        return Err(Error::Usage("empty seed range".into()));
    }
    let start = Instant::now();
    let mut deals = Vec::new();
    for seed in seeds.clone() {
        let deal = seeded_deal(params, seed)?;
        let out = solve_deal(&deal, params, config)?;
        if let Some(sol) = &out.solution {
            verify_solution(&deal, params, sol)
                .map_err(|e| Error::Internal(format!("seed {seed}: solution does not verify: {e}")))?;
        }
        deals.push(DealResult {
            seed,
            verdict: out.verdict,
            stats: out.stats,
        });
    }
    Ok(BatchReport {
        game: params.game,
        ranks: params.ranks,
        seeds,
        deals,
        elapsed: start.elapsed(),
    })
}
