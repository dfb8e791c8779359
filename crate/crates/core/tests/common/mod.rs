//! Random play and permutation helpers shared by the property suites.

#![allow(dead_code)]

use patience::card::check_partition;
use patience::dealers::{seeded_deal, SplitMix64};
use patience::freecell::Freecell;
use patience::kingalbert::KingAlbert;
use patience::klondike::{Klondike, KlondikeState};
use patience::montana::{Montana, MontanaState};
use patience::tableau::TableauState;
use patience::{Card, Game, GameId, GameParams, StockPolicy, Suit};

/// A random permutation of `0..n`.
pub fn permutation(n: usize, rng: &mut SplitMix64) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.below(i as u64 + 1) as usize);
    }
    p
}

/// Plays `steps` uniformly random legal moves, re-dealing from a fresh
/// seed whenever play gets stuck or the game is won. After each move
/// applies `check(before, after)`.
pub fn random_play<G: Game>(
    g: &G,
    params: &GameParams,
    seed: u64,
    steps: usize,
    mut check: impl FnMut(&G::State, &G::State) -> Result<(), String>,
) -> Result<usize, String> {
    let mut rng = SplitMix64::new(seed);
    let mut deal_no = seed.wrapping_mul(1000);
    let fresh = |n: u64| g.initial_state(&seeded_deal(params, n).unwrap()).unwrap();
    let mut s = fresh(deal_no);
    let mut moves = Vec::new();
    for _ in 0..steps {
        moves.clear();
        g.legal_moves_into(&s, &mut moves);
        if moves.is_empty() || g.is_won(&s) {
            deal_no += 1;
            s = fresh(deal_no);
            continue;
        }
        let mv = moves[rng.below(moves.len() as u64) as usize];
        let next = g.apply(&s, &mv).map_err(|e| e.to_string())?;
        check(&s, &next).map_err(|e| format!("after `{mv}`: {e}"))?;
        s = next;
    }
    Ok(steps)
}

/// Every card of the deck is in exactly one place and the game's own
/// well-formedness check passes. Montana's aces leave the deal, so they
/// count as placed.
pub fn conserved<G: Game>(g: &G, s: &G::State) -> Result<(), String> {
    let mut cards = g.cards(s);
    if g.id() == GameId::Montana {
        if cards.iter().any(|c| c.rank() == 1) {
            return Err("ace on a Montana grid".into());
        }
        cards.extend(Suit::ALL.map(|s| Card::new(s, 1)));
    }
    check_partition(g.ranks(), cards)?;
    g.check(s)
}

/// A state with the same content as `s` but its interchangeable parts
/// shuffled: columns for the tableau games, rows for Montana, and the
/// stock order too for reserve-policy Klondike.
pub trait Shuffle: Game {
    fn shuffled(&self, s: &Self::State, rng: &mut SplitMix64) -> Self::State;
}

impl Shuffle for Freecell {
    fn shuffled(&self, s: &TableauState, rng: &mut SplitMix64) -> TableauState {
        s.permuted(&permutation(s.columns().len(), rng))
    }
}

impl Shuffle for KingAlbert {
    fn shuffled(&self, s: &TableauState, rng: &mut SplitMix64) -> TableauState {
        s.permuted(&permutation(s.columns().len(), rng))
    }
}

impl Shuffle for Montana {
    fn shuffled(&self, s: &MontanaState, rng: &mut SplitMix64) -> MontanaState {
        s.permuted(&permutation(4, rng))
    }
}

impl Shuffle for Klondike {
    fn shuffled(&self, s: &KlondikeState, rng: &mut SplitMix64) -> KlondikeState {
        let p = s.permuted(&permutation(s.columns().len(), rng));
        if self.stock_policy() != StockPolicy::Reserve {
            return p;
        }
        let order = permutation(p.stock_cycle().len(), rng);
        let stock = order.iter().map(|&i| p.stock_cycle()[i]).collect();
        KlondikeState::from_parts(p.columns().to_vec(), stock, None, *p.foundations()).unwrap()
    }
}

/// Visits random states reached by play and checks that shuffling their
/// symmetric parts leaves the key unchanged and that keys decode back to
/// a state with the same key.
pub fn key_invariance<G: Shuffle>(g: &G, params: &GameParams, seed: u64, perms: usize) -> Result<usize, String> {
    let mut rng = SplitMix64::new(seed ^ 0x5eed);
    let mut done = 0;
    random_play(g, params, seed, perms, |_, s| {
        let key = g.key(s);
        let t = g.shuffled(s, &mut rng);
        if g.key(&t) != key {
            return Err(format!("key changed under shuffling:\n{s:?}\n{t:?}"));
        }
        if g.key(&g.decode_key(&key)) != key {
            return Err("key does not survive decoding".into());
        }
        done += 1;
        Ok(())
    })?;
    Ok(done)
}

pub fn full(game: GameId) -> GameParams {
    GameParams::new(game)
}
