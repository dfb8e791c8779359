use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use parking_lot::Mutex;
use rayon::prelude::*;

use super::table::{EntryId, Insert, TranspositionTable};
use super::{SearchConfig, SearchOutcome, SearchStats, Strategy, Verdict};
use crate::game::{ForcePolicy, Game};
use crate::moves::Move;

/// Applies forced moves, lowest card first, until none remain. Returns the
/// resulting state and the moves applied.
pub fn forced_closure<G: Game>(game: &G, state: &G::State, policy: ForcePolicy) -> (G::State, Vec<Move>) {
    let mut log = Vec::new();
    let s = close(game, state.clone(), policy, Some(&mut log));
    (s, log)
}

fn close<G: Game>(game: &G, mut s: G::State, policy: ForcePolicy, mut log: Option<&mut Vec<Move>>) -> G::State {
    if policy == ForcePolicy::Off {
        return s;
    }
    loop {
        let forced = game.forced_moves(&s, policy);
        let Some(m) = forced.first() else {
            return s;
        };
        s = game.apply(&s, m).expect("forced move must be legal");
        if let Some(l) = log.as_deref_mut() {
            l.push(*m);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum End {
    Stopped(EntryId),
    Exhausted,
    Complete,
}

struct Ctx<'a, G: Game> {
    game: &'a G,
    config: &'a SearchConfig,
    start: Instant,
}

impl<G: Game> Ctx<'_, G> {
    /// Calls `each` with every closure-normalized successor until it
    /// returns false.
    fn successors(&self, state: &G::State, moves: &mut Vec<Move>, mut each: impl FnMut(G::State) -> bool) {
        moves.clear();
        self.game.legal_moves_into(state, moves);
        self.game.prune(state, moves, &self.config.prune);
        for m in moves.iter() {
            let child = self.game.apply(state, m).expect("generated move must be legal");
            if !each(close(self.game, child, self.config.force, None)) {
                return;
            }
        }
    }

    fn out_of_time(&self) -> bool {
        self.start.elapsed().as_secs_f64() > self.config.max_seconds
    }
}

struct Run {
    table: TranspositionTable,
    end: End,
    stats: SearchStats,
    root_forced: Vec<Move>,
}

/// Breadth-first over a single-shard table: entry ids are insertion order,
/// so the table itself is the queue.
fn seq_bfs<G: Game>(
    ctx: &Ctx<'_, G>,
    table: &TranspositionTable,
    stats: &mut SearchStats,
    mut on_new: impl FnMut(&G::State, EntryId) -> bool,
) -> End {
    let game = ctx.game;
    let (mut key, mut ckey, mut moves) = (Vec::new(), Vec::new(), Vec::new());
    let mut stored = table.len();
    let mut next = 0u64;
    while next < stored {
        if stats.states_expanded % 1024 == 0 && ctx.out_of_time() {
            return End::Exhausted;
        }
        let id = EntryId::new(0, next as u32);
        next += 1;
        table.key_into(id, &mut key);
        let state = game.decode_key(&key);
        stats.states_expanded += 1;
        let mut end = None;
        ctx.successors(&state, &mut moves, |child| {
            ckey.clear();
            game.canonical_key(&child, &mut ckey);
            if let Insert::New(cid) = table.insert(&ckey, Some(id)) {
                stored += 1;
                if on_new(&child, cid) {
                    end = Some(End::Stopped(cid));
                } else if stored > ctx.config.max_states {
                    end = Some(End::Exhausted);
                }
            }
            end.is_none()
        });
        if let Some(e) = end {
            return e;
        }
        stats.max_frontier = stats.max_frontier.max(stored - next);
    }
    End::Complete
}

fn dfs<G: Game>(
    ctx: &Ctx<'_, G>,
    table: &TranspositionTable,
    root: EntryId,
    stats: &mut SearchStats,
    mut on_new: impl FnMut(&G::State, EntryId) -> bool,
) -> End {
    let game = ctx.game;
    let (mut key, mut ckey, mut moves) = (Vec::new(), Vec::new(), Vec::new());
    let mut stored = table.len();
    let mut stack = vec![root];
    while let Some(id) = stack.pop() {
        if stats.states_expanded % 1024 == 0 && ctx.out_of_time() {
            return End::Exhausted;
        }
        table.key_into(id, &mut key);
        let state = game.decode_key(&key);
        stats.states_expanded += 1;
        let mark = stack.len();
        let mut end = None;
        ctx.successors(&state, &mut moves, |child| {
            ckey.clear();
            game.canonical_key(&child, &mut ckey);
            if let Insert::New(cid) = table.insert(&ckey, Some(id)) {
                stored += 1;
                if on_new(&child, cid) {
                    end = Some(End::Stopped(cid));
                } else if stored > ctx.config.max_states {
                    end = Some(End::Exhausted);
                }
                stack.push(cid);
            }
            end.is_none()
        });
        if let Some(e) = end {
            return e;
        }
        // First generated child is explored first.
        stack[mark..].reverse();
        stats.max_frontier = stats.max_frontier.max(stack.len() as u64);
    }
    End::Complete
}

/// Level-synchronous breadth-first search on a rayon pool; the sharded
/// table's atomic insert-if-absent is the only shared state.
fn par_bfs<G: Game>(
    ctx: &Ctx<'_, G>,
    table: &TranspositionTable,
    root: EntryId,
    stats: &mut SearchStats,
    on_new: impl Fn(&G::State, EntryId) -> bool + Sync,
) -> End {
    let game = ctx.game;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(ctx.config.workers)
        .build()
        .expect("failed to start worker pool");
    let stored = AtomicU64::new(table.len());
    let expanded = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let exhausted = AtomicBool::new(false);
    let stopped_at: Mutex<Option<EntryId>> = Mutex::new(None);
    let mut frontier = vec![root];
    while !frontier.is_empty() {
        if ctx.out_of_time() {
            return End::Exhausted;
        }
        let next: Vec<Vec<EntryId>> = pool.install(|| {
            frontier
                .par_chunks(64)
                .map(|chunk| {
                    let (mut key, mut ckey, mut moves) = (Vec::new(), Vec::new(), Vec::new());
                    let mut local = Vec::new();
                    for &id in chunk {
                        if stop.load(Ordering::Relaxed) {
                            break;
                        }
                        table.key_into(id, &mut key);
                        let state = game.decode_key(&key);
                        expanded.fetch_add(1, Ordering::Relaxed);
                        ctx.successors(&state, &mut moves, |child| {
                            ckey.clear();
                            game.canonical_key(&child, &mut ckey);
                            if let Insert::New(cid) = table.insert(&ckey, Some(id)) {
                                let n = stored.fetch_add(1, Ordering::Relaxed) + 1;
                                if on_new(&child, cid) {
                                    stopped_at.lock().get_or_insert(cid);
                                    stop.store(true, Ordering::Relaxed);
                                    return false;
                                }
                                if n > ctx.config.max_states {
                                    exhausted.store(true, Ordering::Relaxed);
                                    stop.store(true, Ordering::Relaxed);
                                    return false;
                                }
                                local.push(cid);
                            }
                            true
                        });
                    }
                    local
                })
                .collect()
        });
        stats.states_expanded = expanded.load(Ordering::Relaxed);
        if let Some(id) = *stopped_at.lock() {
            return End::Stopped(id);
        }
        if exhausted.load(Ordering::Relaxed) {
            return End::Exhausted;
        }
        frontier = next.concat();
        stats.max_frontier = stats.max_frontier.max(frontier.len() as u64);
    }
    End::Complete
}

fn run_search<G: Game>(
    game: &G,
    initial: &G::State,
    config: &SearchConfig,
    parents: bool,
    on_new: impl Fn(&G::State, EntryId) -> bool + Sync,
) -> Run {
    let ctx = Ctx {
        game,
        config,
        start: Instant::now(),
    };
    let (root, root_forced) = forced_closure(game, initial, config.force);
    let parallel = config.workers > 1 && config.strategy == Strategy::Bfs;
    let table = TranspositionTable::new(if parallel { config.workers * 16 } else { 1 }, parents);
    let Insert::New(root_id) = table.insert(&game.key(&root), None) else {
        unreachable!("fresh table")
    };
    let mut stats = SearchStats::default();
    let end = if on_new(&root, root_id) {
        End::Stopped(root_id)
    } else if parallel {
        par_bfs(&ctx, &table, root_id, &mut stats, &on_new)
    } else if config.strategy == Strategy::Bfs {
        seq_bfs(&ctx, &table, &mut stats, &on_new)
    } else {
        dfs(&ctx, &table, root_id, &mut stats, &on_new)
    };
    stats.states_stored = table.len();
    stats.elapsed = ctx.start.elapsed();
    Run {
        table,
        end,
        stats,
        root_forced,
    }
}

/// Recovers the move sequence that leads from the root to `target` along
/// the table's parent links.
/// Replays the parent chain forward from the real initial state, at each
/// step taking a move whose closed child has the next key. Keys may merge
/// positions that differ by more than placement, so the chain's decoded
/// states are not used for the moves.
fn reconstruct<G: Game>(game: &G, initial: &G::State, config: &SearchConfig, run: &Run, target: EntryId) -> Vec<Move> {
    let table = &run.table;
    let mut chain = vec![target];
    while let Some(p) = table.parent(*chain.last().unwrap()) {
        chain.push(p);
    }
    chain.reverse();
    let mut out = run.root_forced.clone();
    let (mut state, _) = forced_closure(game, initial, config.force);
    let (mut want, mut moves) = (Vec::new(), Vec::new());
    for &id in &chain[1..] {
        table.key_into(id, &mut want);
        moves.clear();
        game.legal_moves_into(&state, &mut moves);
        let step = moves.iter().find_map(|m| {
            let child = game.apply(&state, m).ok()?;
            let (child, forced) = forced_closure(game, &child, config.force);
            (game.key(&child) == want).then(|| (*m, forced, child))
        });
        let (m, forced, child) = step.expect("parent link without a connecting move");
        out.push(m);
        out.extend(forced);
        state = child;
    }
    out
}

/// Decides whether `initial` can be won.
///
/// Every state explored is closed under the forced moves of
/// `config.force` and deduplicated by canonical key. A solvable verdict
/// carries a solution that replays from `initial`.
pub fn solve<G: Game>(game: &G, initial: &G::State, config: &SearchConfig) -> SearchOutcome {
    let won = |s: &G::State, _: EntryId| game.is_won(s);
    let run = run_search(game, initial, config, config.keep_parents, won);
    let mut stats = run.stats.clone();
    match run.end {
        End::Complete => SearchOutcome {
            verdict: Verdict::Unsolvable,
            solution: None,
            stats,
        },
        End::Exhausted => SearchOutcome {
            verdict: Verdict::ResourceExhausted,
            solution: None,
            stats,
        },
        End::Stopped(id) => {
            let solution = if config.keep_parents {
                reconstruct(game, initial, config, &run, id)
            } else {
                drop(run);
                // The first run is deterministic on one worker, so the same
                // number of states suffices; otherwise fall back to the
                // configured limit.
                let bound = if config.workers == 1 {
                    stats.states_stored
                } else {
                    config.max_states
                };
                let again = SearchConfig {
                    keep_parents: true,
                    workers: 1,
                    max_states: bound,
                    ..*config
                };
                let rerun = run_search(game, initial, &again, true, won);
                let End::Stopped(id) = rerun.end else {
                    panic!("solution re-derivation failed to reach a won state");
                };
                reconstruct(game, initial, &again, &rerun, id)
            };
            stats.solution_ply = Some(solution.iter().filter(|m| !m.is_forced()).count());
            SearchOutcome {
                verdict: Verdict::Solvable,
                solution: Some(solution),
                stats,
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaxScoreOutcome {
    pub score: u32,
    /// False when limits cut the search short: the score is a lower bound.
    pub exact: bool,
    pub stats: SearchStats,
}

/// Highest score over every reachable state.
pub fn max_score<G: Game>(game: &G, initial: &G::State, config: &SearchConfig) -> MaxScoreOutcome {
    let best = AtomicU64::new(0);
    let top = game.max_score() as u64;
    let config = SearchConfig {
        keep_parents: false,
        ..*config
    };
    let run = run_search(game, initial, &config, false, |s, _| {
        let score = game.score(s) as u64;
        best.fetch_max(score, Ordering::Relaxed).max(score) >= top
    });
    MaxScoreOutcome {
        score: best.load(Ordering::Relaxed) as u32,
        exact: run.end != End::Exhausted,
        stats: run.stats,
    }
}

/// Every canonical key reachable from `initial`, root first, or `None` if
/// the limits were hit.
pub fn reachable<G: Game>(game: &G, initial: &G::State, config: &SearchConfig) -> Option<Vec<Vec<u8>>> {
    let config = SearchConfig {
        strategy: Strategy::Bfs,
        workers: 1,
        keep_parents: false,
        ..*config
    };
    let run = run_search(game, initial, &config, false, |_, _| false);
    if run.end != End::Complete {
        return None;
    }
    let mut out = Vec::with_capacity(run.table.len() as usize);
    for i in 0..run.table.len() {
        let mut k = Vec::new();
        run.table.key_into(EntryId::new(0, i as u32), &mut k);
        out.push(k);
    }
    Some(out)
}
