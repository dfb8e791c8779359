//! Comparisons between the library and the naive models. Each check
//! returns how many cases it examined, or a description of the first
//! disagreement.

use std::collections::{HashMap, HashSet, VecDeque};

use patience::dealers::{seeded_deal, SplitMix64};
use patience::solver::{self, SearchConfig};
use patience::{verify_solution, Deal, ForcePolicy, Game, GameParams, Move, PruneFlags, Verdict};

use super::{max_reach_score, min_ply, random_walk, reach_upto, solvable, Model};

pub type Check = Result<usize, String>;

fn plain(mv: &Move) -> Move {
    mv.with_forced(false)
}

/// Library and model agree on the legal moves of `s` and on where each
/// move leads.
pub fn same_moves<M: Model>(m: &M, s: &M::S) -> Result<(), String> {
    let g = m.lib();
    let ls = m.to_lib(s);
    g.check(&ls).map_err(|e| format!("{s:?}: {e}"))?;
    let lib: Vec<Move> = g.legal_moves(&ls);
    let lib_set: HashSet<Move> = lib.iter().map(plain).collect();
    if lib_set.len() != lib.len() {
        return Err(format!("{s:?}: duplicate moves in {lib:?}"));
    }
    let succ = m.successors(s);
    let oracle_set: HashSet<Move> = succ.iter().map(|(mv, _)| *mv).collect();
    if lib_set != oracle_set {
        let extra: Vec<_> = lib_set.difference(&oracle_set).collect();
        let missing: Vec<_> = oracle_set.difference(&lib_set).collect();
        return Err(format!("{s:?}: library extra {extra:?}, missing {missing:?}"));
    }
    for (mv, child) in &succ {
        let got = g.apply(&ls, mv).map_err(|e| format!("{s:?}: {e}"))?;
        if g.key(&got) != g.key(&m.to_lib(child)) {
            return Err(format!("{s:?}: `{mv}` leads elsewhere"));
        }
    }
    let key = g.key(&ls);
    if g.key(&g.decode_key(&key)) != key {
        return Err(format!("{s:?}: key does not round-trip"));
    }
    Ok(())
}

/// [`same_moves`] along random walks from the given deals.
pub fn legality_scan<M: Model>(m: &M, deals: &[Deal], walks: usize, steps: usize, seed: u64) -> Check {
    let mut rng = SplitMix64::new(seed);
    let mut n = 0;
    for deal in deals {
        let init = m.initial(deal);
        for _ in 0..walks {
            for s in random_walk(m, &init, steps, &mut rng) {
                same_moves(m, &s)?;
                n += 1;
            }
        }
    }
    Ok(n)
}

/// Verdicts of the naive search, the library with safe forcing, with no
/// forcing, and depth- and breadth-first, all agree; optimistic forcing
/// never claims a win the naive search cannot find; every solution
/// replays. Returns the number of solvable deals.
pub fn verdicts_agree<M: Model>(m: &M, params: &GameParams, seeds: impl Iterator<Item = u64>, limit: usize) -> Check {
    let g = m.lib();
    let mut solvable_deals = 0;
    for seed in seeds {
        let deal = seeded_deal(params, seed).map_err(|e| e.to_string())?;
        let init = m.initial(&deal);
        let naive = solvable(m, &init, limit).ok_or_else(|| format!("seed {seed}: naive search too large"))?;
        let li = g.initial_state(&deal).map_err(|e| e.to_string())?;
        if g.key(&li) != g.key(&m.to_lib(&init)) {
            return Err(format!("seed {seed}: initial states differ"));
        }
        let configs = [
            SearchConfig::default().with_force(ForcePolicy::Safe),
            SearchConfig::default().with_force(ForcePolicy::Off),
            SearchConfig::bfs().with_force(ForcePolicy::Safe),
            SearchConfig::default().with_force(ForcePolicy::Safe).with_prune(PruneFlags::none()),
        ];
        for config in &configs {
            let out = solver::solve(&g, &li, config);
            let want = if naive { Verdict::Solvable } else { Verdict::Unsolvable };
            if out.verdict != want {
                return Err(format!("seed {seed}: {config:?} says {}, naive says {want}", out.verdict));
            }
            if let Some(sol) = &out.solution {
                verify_solution(&deal, params, sol).map_err(|e| format!("seed {seed}: {e}"))?;
            }
        }
        let opt = solver::solve(&g, &li, &SearchConfig::default().with_force(ForcePolicy::Optimistic));
        if opt.verdict == Verdict::Solvable && !naive {
            return Err(format!("seed {seed}: optimistic forcing won an unsolvable deal"));
        }
        solvable_deals += naive as usize;
    }
    Ok(solvable_deals)
}

fn full_graph<G: Game>(g: &G, root: &G::State, limit: u64) -> Result<Vec<Vec<u8>>, String> {
    let config = SearchConfig::bfs()
        .with_force(ForcePolicy::Off)
        .with_prune(PruneFlags::none())
        .with_max_states(limit);
    solver::reachable(g, root, &config).ok_or_else(|| "reachable set too large".to_string())
}

/// Every maximal sequence of safe forced moves, taken in any order, ends
/// at the same key, the one [`solver::forced_closure`] reaches. Checked
/// from every reachable state.
pub fn confluence<G: Game>(g: &G, root: &G::State, limit: u64) -> Check {
    let keys = full_graph(g, root, limit)?;
    for key in &keys {
        let s = g.decode_key(key);
        // With at most one forced move the closure is that of the only
        // successor, itself one of the reachable states checked here.
        if g.forced_moves(&s, ForcePolicy::Safe).len() < 2 {
            continue;
        }
        let mut finals = HashSet::new();
        let mut seen = HashSet::new();
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            let forced = g.forced_moves(&x, ForcePolicy::Safe);
            if forced.is_empty() {
                finals.insert(g.key(&x));
                continue;
            }
            for mv in &forced {
                let y = g.apply(&x, mv).map_err(|e| e.to_string())?;
                if seen.insert(g.key(&y)) {
                    stack.push(y);
                }
            }
        }
        if finals.len() != 1 {
            return Err(format!("{} different closures from {:?}", finals.len(), g.decode_key(key)));
        }
        let (closed, _) = solver::forced_closure(g, &g.decode_key(key), ForcePolicy::Safe);
        if !finals.contains(&g.key(&closed)) {
            return Err("forced_closure disagrees with exhaustive ordering".into());
        }
    }
    Ok(keys.len())
}

/// Solvability computed backwards over the whole reachable graph (no
/// forcing, no pruning). Returns the keys, their winning flags and the
/// key index.
fn winning_set<G: Game>(g: &G, root: &G::State, limit: u64) -> Result<(Vec<Vec<u8>>, Vec<bool>, HashMap<Vec<u8>, usize>), String> {
    let keys = full_graph(g, root, limit)?;
    let index: HashMap<Vec<u8>, usize> = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); keys.len()];
    let mut win = vec![false; keys.len()];
    let mut queue = VecDeque::new();
    for (i, key) in keys.iter().enumerate() {
        let s = g.decode_key(key);
        if g.is_won(&s) {
            win[i] = true;
            queue.push_back(i);
        }
        for mv in g.legal_moves(&s) {
            let child = g.apply(&s, &mv).map_err(|e| e.to_string())?;
            let j = *index.get(&g.key(&child)).ok_or("successor outside reachable set")?;
            preds[j].push(i);
        }
    }
    while let Some(j) = queue.pop_front() {
        for &i in &preds[j] {
            if !win[i] {
                win[i] = true;
                queue.push_back(i);
            }
        }
    }
    Ok((keys, win, index))
}

/// Playing a safe move never changes whether a state is solvable.
pub fn safe_moves_preserve<G: Game>(g: &G, root: &G::State, limit: u64) -> Check {
    let (keys, win, index) = winning_set(g, root, limit)?;
    let mut n = 0;
    for (i, key) in keys.iter().enumerate() {
        let s = g.decode_key(key);
        for mv in g.forced_moves(&s, ForcePolicy::Safe) {
            let child = g.apply(&s, &mv).map_err(|e| e.to_string())?;
            if win[index[&g.key(&child)]] != win[i] {
                return Err(format!("safe move `{mv}` changes solvability of {s:?}"));
            }
            n += 1;
        }
    }
    Ok(n)
}

/// Library keys identify exactly the positions the model's independent
/// sort-based canonical form identifies, and equal keys have equal sets
/// of successor keys. With `complete` the whole positional reachable set
/// must fit in `limit`; otherwise the first `limit` states are sampled.
pub fn keys_match_canon<M: Model>(m: &M, init: &M::S, limit: usize, complete: bool) -> Check {
    let g = m.lib();
    let (all, done) = reach_upto(m, init, limit);
    if complete && !done {
        return Err("positional reachable set too large".into());
    }
    let mut by_key: HashMap<Vec<u8>, (M::S, HashSet<Vec<u8>>)> = HashMap::new();
    let mut by_canon: HashMap<M::S, Vec<u8>> = HashMap::new();
    for s in &all {
        let key = g.key(&m.to_lib(s));
        let canon = m.canon(s);
        let succ: HashSet<Vec<u8>> = m.successors(s).iter().map(|(_, c)| g.key(&m.to_lib(c))).collect();
        match by_key.get(&key) {
            Some((c, ss)) => {
                if *c != canon {
                    return Err(format!("equal keys for inequivalent {c:?} and {canon:?}"));
                }
                if *ss != succ {
                    return Err(format!("equal keys, different successors at {s:?}"));
                }
            }
            None => {
                by_key.insert(key.clone(), (canon.clone(), succ));
            }
        }
        if let Some(k) = by_canon.insert(canon, key.clone()) {
            if k != key {
                return Err(format!("equivalent positions with different keys at {s:?}"));
            }
        }
    }
    Ok(all.len())
}

/// Single-worker breadth-first solutions are as short as the model's own
/// breadth-first search over move-then-closure steps allows.
pub fn bfs_ply_minimal<M: Model>(m: &M, params: &GameParams, seeds: impl Iterator<Item = u64>, limit: usize) -> Check {
    let g = m.lib();
    let config = SearchConfig::bfs().with_prune(PruneFlags::none());
    let mut n = 0;
    for seed in seeds {
        let deal = seeded_deal(params, seed).map_err(|e| e.to_string())?;
        let want = min_ply(m, &m.initial(&deal), limit).ok_or_else(|| format!("seed {seed}: too large"))?;
        let li = g.initial_state(&deal).map_err(|e| e.to_string())?;
        let out = solver::solve(&g, &li, &config);
        if out.stats.solution_ply != want {
            return Err(format!("seed {seed}: ply {:?}, oracle {want:?}", out.stats.solution_ply));
        }
        if let Some(sol) = &out.solution {
            verify_solution(&deal, params, sol).map_err(|e| format!("seed {seed}: {e}"))?;
        }
        n += want.is_some() as usize;
    }
    Ok(n)
}

/// The library's maximum score equals the best score over the model's
/// reachable positions.
pub fn max_score_matches<M: Model>(m: &M, params: &GameParams, seeds: impl Iterator<Item = u64>, limit: usize) -> Check {
    let g = m.lib();
    let mut n = 0;
    for seed in seeds {
        let deal = seeded_deal(params, seed).map_err(|e| e.to_string())?;
        let want = max_reach_score(m, &m.initial(&deal), limit).ok_or_else(|| format!("seed {seed}: too large"))?;
        let li = g.initial_state(&deal).map_err(|e| e.to_string())?;
        let got = solver::max_score(&g, &li, &SearchConfig::default());
        if !got.exact || got.score != want {
            return Err(format!("seed {seed}: max score {} (exact {}), oracle {want}", got.score, got.exact));
        }
        let won = solver::solve(&g, &li, &SearchConfig::default()).verdict == Verdict::Solvable;
        if won != (got.score == g.max_score()) {
            return Err(format!("seed {seed}: max score {} but solvable = {won}", got.score));
        }
        n += 1;
    }
    Ok(n)
}
