//! Naive reference models of the four games.
//!
//! Every state is positional: columns, cells and rows keep their places,
//! nothing is sorted and nothing moves automatically. Legality is decided
//! by scanning every (card, destination) pair from scratch. Each model
//! move is labelled with the library move that should have the same
//! effect, so the two implementations can be compared move for move.

#![allow(dead_code)]

pub mod checks;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use patience::card::Foundations;
use patience::freecell::Freecell;
use patience::kingalbert::KingAlbert;
use patience::klondike::{Klondike, KlondikeColumn, KlondikeState};
use patience::montana::{Montana, MontanaState};
use patience::tableau::TableauState;
use patience::{Card, Deal, Game, GameId, GameParams, GapPos, Move, Slot, StockPolicy, Suit};

/// A card as the oracle sees it: suit 0..4 (clubs, diamonds, hearts,
/// spades) and rank 1..=R.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct C {
    pub suit: u8,
    pub rank: u8,
}

impl C {
    pub fn of(c: Card) -> C {
        let suit = match c.suit() {
            Suit::Clubs => 0,
            Suit::Diamonds => 1,
            Suit::Hearts => 2,
            Suit::Spades => 3,
        };
        C { suit, rank: c.rank() }
    }

    pub fn card(self) -> Card {
        Card::new(Suit::ALL[self.suit as usize], self.rank)
    }

    fn red(self) -> bool {
        self.suit == 1 || self.suit == 2
    }

    /// May `self` be placed on `below` in a tableau column?
    pub fn builds_on(self, below: C) -> bool {
        self.red() != below.red() && self.rank + 1 == below.rank
    }
}

/// The automove rule restated: `c` may go up when both opposite-colour
/// cards one rank lower are up, or both opposite-colour cards two lower
/// and the same-colour other-suit card three lower are up. Ranks below 1
/// count as present.
pub fn safe(c: C, found: &[u8; 4]) -> bool {
    let v = c.rank as i32;
    let has = |s: u8, r: i32| r <= 0 || found[s as usize] as i32 >= r;
    let opp: Vec<u8> = (0..4).filter(|&s| (s == 1 || s == 2) != c.red()).collect();
    let partner = (0..4).find(|&s| s != c.suit && (s == 1 || s == 2) == c.red()).unwrap();
    (has(opp[0], v - 1) && has(opp[1], v - 1)) || (has(opp[0], v - 2) && has(opp[1], v - 2) && has(partner, v - 3))
}

/// A positional game model.
pub trait Model {
    type S: Clone + Eq + Hash + Debug;
    type Lib: Game;

    fn initial(&self, deal: &Deal) -> Self::S;
    /// Every legal move with its resulting state.
    fn successors(&self, s: &Self::S) -> Vec<(Move, Self::S)>;
    fn won(&self, s: &Self::S) -> bool;
    fn foundations(&self, s: &Self::S) -> [u8; 4];
    fn score(&self, s: &Self::S) -> u32;
    /// The library game with matching parameters.
    fn lib(&self) -> Self::Lib;
    /// The same position as a library state.
    fn to_lib(&self, s: &Self::S) -> <Self::Lib as Game>::State;
    /// A representative of the position's symmetry class, computed by
    /// sorting whatever the game treats as interchangeable.
    fn canon(&self, s: &Self::S) -> Self::S;
}

fn shift(found: &mut [u8; 4], c: C) {
    assert_eq!(found[c.suit as usize] + 1, c.rank);
    found[c.suit as usize] = c.rank;
}

// ---------------------------------------------------------------- tableau

/// Freecell (with `cells`) or King Albert (with a reserve).
#[derive(Clone, Copy, Debug)]
pub struct Tableau {
    pub ranks: u8,
    /// `None` for King Albert.
    pub cells: Option<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TabState {
    pub cols: Vec<Vec<C>>,
    pub cells: Vec<Option<C>>,
    pub reserve: Vec<C>,
    pub found: [u8; 4],
}

#[derive(Clone, Copy)]
enum TabSrc {
    Col(usize),
    Cell(usize),
    Res(usize),
}

impl Tableau {
    fn take(s: &TabState, src: TabSrc) -> (C, TabState) {
        let mut n = s.clone();
        let c = match src {
            TabSrc::Col(i) => n.cols[i].pop().unwrap(),
            TabSrc::Cell(k) => n.cells[k].take().unwrap(),
            TabSrc::Res(k) => n.reserve.remove(k),
        };
        (c, n)
    }
}

impl Model for Tableau {
    type S = TabState;
    type Lib = TabGame;

    fn initial(&self, deal: &Deal) -> TabState {
        TabState {
            cols: deal
                .columns
                .iter()
                .map(|col| col.iter().map(|s| C::of(s.card().unwrap())).collect())
                .collect(),
            cells: vec![None; self.cells.unwrap_or(0) as usize],
            reserve: deal.reserve.iter().map(|&c| C::of(c)).collect(),
            found: [0; 4],
        }
    }

    fn successors(&self, s: &TabState) -> Vec<(Move, TabState)> {
        let mut srcs = Vec::new();
        for (i, col) in s.cols.iter().enumerate() {
            if !col.is_empty() {
                srcs.push(TabSrc::Col(i));
            }
        }
        for (k, cell) in s.cells.iter().enumerate() {
            if cell.is_some() {
                srcs.push(TabSrc::Cell(k));
            }
        }
        for k in 0..s.reserve.len() {
            srcs.push(TabSrc::Res(k));
        }
        let mut out = Vec::new();
        for src in srcs {
            let (c, rest) = Tableau::take(s, src);
            let card = c.card();
            if rest.found[c.suit as usize] + 1 == c.rank {
                let mut n = rest.clone();
                shift(&mut n.found, c);
                out.push((Move::ToFoundation { card, forced: false }, n));
            }
            for j in 0..rest.cols.len() {
                if matches!(src, TabSrc::Col(i) if i == j) {
                    continue;
                }
                let mv = match rest.cols[j].last() {
                    None => Move::ToEmptyColumn { card },
                    Some(&t) if c.builds_on(t) => Move::ToCard { card, target: t.card() },
                    Some(_) => continue,
                };
                let mut n = rest.clone();
                n.cols[j].push(c);
                out.push((mv, n));
            }
            if let TabSrc::Col(_) = src {
                for k in 0..rest.cells.len() {
                    if rest.cells[k].is_none() {
                        let mut n = rest.clone();
                        n.cells[k] = Some(c);
                        out.push((Move::ToCell { card }, n));
                    }
                }
            }
        }
        out
    }

    fn won(&self, s: &TabState) -> bool {
        s.found.iter().all(|&f| f == self.ranks)
    }

    fn foundations(&self, s: &TabState) -> [u8; 4] {
        s.found
    }

    fn score(&self, s: &TabState) -> u32 {
        s.found.iter().map(|&f| f as u32).sum()
    }

    fn lib(&self) -> TabGame {
        match self.cells {
            Some(n) => TabGame::Freecell(Freecell::new(self.ranks, n)),
            None => TabGame::KingAlbert(KingAlbert::new(self.ranks)),
        }
    }

    fn to_lib(&self, s: &TabState) -> TableauState {
        let pool = s.cells.iter().flatten().chain(&s.reserve).map(|c| c.card()).collect();
        TableauState::from_parts(
            s.cols.iter().map(|c| c.iter().map(|x| x.card()).collect()).collect(),
            pool,
            Foundations(s.found),
        )
        .unwrap()
    }

    fn canon(&self, s: &TabState) -> TabState {
        let mut n = s.clone();
        n.cols.sort();
        // Occupied cells first, in card order.
        n.cells.sort_by_key(|c| (c.is_none(), *c));
        n.reserve.sort();
        n
    }
}

/// Freecell or King Albert behind one type, so [`Tableau`] can name its
/// library counterpart.
#[derive(Clone, Copy, Debug)]
pub enum TabGame {
    Freecell(Freecell),
    KingAlbert(KingAlbert),
}

macro_rules! delegate {
    ($self:ident, |$g:ident| $e:expr) => {
        match $self {
            TabGame::Freecell($g) => $e,
            TabGame::KingAlbert($g) => $e,
        }
    };
}

impl Game for TabGame {
    type State = TableauState;

    fn id(&self) -> GameId {
        delegate!(self, |g| g.id())
    }
    fn ranks(&self) -> u8 {
        delegate!(self, |g| g.ranks())
    }
    fn initial_state(&self, deal: &Deal) -> Result<TableauState, patience::Error> {
        delegate!(self, |g| g.initial_state(deal))
    }
    fn legal_moves_into(&self, s: &TableauState, out: &mut Vec<Move>) {
        delegate!(self, |g| g.legal_moves_into(s, out))
    }
    fn apply(&self, s: &TableauState, mv: &Move) -> Result<TableauState, patience::IllegalMove> {
        delegate!(self, |g| g.apply(s, mv))
    }
    fn forced_moves(&self, s: &TableauState, p: patience::ForcePolicy) -> Vec<Move> {
        delegate!(self, |g| g.forced_moves(s, p))
    }
    fn is_won(&self, s: &TableauState) -> bool {
        delegate!(self, |g| g.is_won(s))
    }
    fn canonical_key(&self, s: &TableauState, out: &mut Vec<u8>) {
        delegate!(self, |g| g.canonical_key(s, out))
    }
    fn decode_key(&self, key: &[u8]) -> TableauState {
        delegate!(self, |g| g.decode_key(key))
    }
    fn score(&self, s: &TableauState) -> u32 {
        delegate!(self, |g| g.score(s))
    }
    fn cards(&self, s: &TableauState) -> Vec<Card> {
        delegate!(self, |g| g.cards(s))
    }
    fn check(&self, s: &TableauState) -> Result<(), String> {
        delegate!(self, |g| g.check(s))
    }
}

// --------------------------------------------------------------- klondike

#[derive(Clone, Copy, Debug)]
pub struct Klon {
    pub ranks: u8,
    pub stock: StockPolicy,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KlonState {
    /// (face down, face up), bottom to top.
    pub cols: Vec<(Vec<C>, Vec<C>)>,
    /// Stock and waste in dealing order; the waste is `stock[..=cursor]`.
    pub stock: Vec<C>,
    pub cursor: Option<usize>,
    pub found: [u8; 4],
}

fn is_run(cards: &[C]) -> bool {
    cards.windows(2).all(|w| w[1].builds_on(w[0]))
}

impl Klon {
    fn turn(col: &mut (Vec<C>, Vec<C>)) {
        if col.1.is_empty() {
            if let Some(c) = col.0.pop() {
                col.1.push(c);
            }
        }
    }

    /// Indices of stock cards that may be played.
    fn playable_stock(&self, s: &KlonState) -> Vec<usize> {
        match self.stock {
            StockPolicy::Reserve => (0..s.stock.len()).collect(),
            StockPolicy::Circular => s.cursor.into_iter().collect(),
        }
    }

    fn take_stock(&self, s: &KlonState, k: usize) -> (C, KlonState) {
        let mut n = s.clone();
        let c = n.stock.remove(k);
        if self.stock == StockPolicy::Circular {
            // The card under the played waste top becomes the new top.
            n.cursor = k.checked_sub(1);
        }
        (c, n)
    }

    /// Places a single card or run on every column that accepts it.
    fn place(&self, run: &[C], rest: &KlonState, skip: Option<usize>, out: &mut Vec<(Move, KlonState)>) {
        let card = run[0].card();
        for j in 0..rest.cols.len() {
            if skip == Some(j) {
                continue;
            }
            let col = &rest.cols[j];
            let mv = match col.1.last() {
                None if col.0.is_empty() => {
                    if run[0].rank != self.ranks {
                        continue;
                    }
                    Move::ToEmptyColumn { card }
                }
                None => unreachable!("unturned card"),
                Some(&t) if run[0].builds_on(t) => Move::ToCard { card, target: t.card() },
                Some(_) => continue,
            };
            let mut n = rest.clone();
            n.cols[j].1.extend_from_slice(run);
            out.push((mv, n));
        }
    }
}

impl Model for Klon {
    type S = KlonState;
    type Lib = Klondike;

    fn initial(&self, deal: &Deal) -> KlonState {
        let cols = deal
            .columns
            .iter()
            .map(|col| {
                let mut c = (Vec::new(), Vec::new());
                for slot in col {
                    match *slot {
                        Slot::Down(x) => c.0.push(C::of(x)),
                        Slot::Up(x) => c.1.push(C::of(x)),
                        Slot::Gap => panic!("gap in klondike"),
                    }
                }
                Klon::turn(&mut c);
                c
            })
            .collect();
        KlonState {
            cols,
            stock: deal.reserve.iter().map(|&c| C::of(c)).collect(),
            cursor: None,
            found: [0; 4],
        }
    }

    fn successors(&self, s: &KlonState) -> Vec<(Move, KlonState)> {
        let mut out = Vec::new();
        // Runs and single cards from columns.
        for i in 0..s.cols.len() {
            let up = &s.cols[i].1;
            for k in 0..up.len() {
                let run = &up[k..];
                if !is_run(run) {
                    continue;
                }
                let mut rest = s.clone();
                rest.cols[i].1.truncate(k);
                Klon::turn(&mut rest.cols[i]);
                if run.len() == 1 && rest.found[run[0].suit as usize] + 1 == run[0].rank {
                    let mut n = rest.clone();
                    shift(&mut n.found, run[0]);
                    out.push((
                        Move::ToFoundation {
                            card: run[0].card(),
                            forced: false,
                        },
                        n,
                    ));
                }
                self.place(run, &rest, Some(i), &mut out);
            }
        }
        // Stock cards.
        for k in self.playable_stock(s) {
            let (c, rest) = self.take_stock(s, k);
            if rest.found[c.suit as usize] + 1 == c.rank {
                let mut n = rest.clone();
                shift(&mut n.found, c);
                out.push((
                    Move::ToFoundation {
                        card: c.card(),
                        forced: false,
                    },
                    n,
                ));
            }
            self.place(&[c], &rest, None, &mut out);
        }
        // Foundation tops back onto a column (never into an empty one).
        for suit in 0..4u8 {
            let r = s.found[suit as usize];
            if r == 0 {
                continue;
            }
            let c = C { suit, rank: r };
            let mut rest = s.clone();
            rest.found[suit as usize] -= 1;
            for j in 0..rest.cols.len() {
                if let Some(&t) = rest.cols[j].1.last() {
                    if c.builds_on(t) {
                        let mut n = rest.clone();
                        n.cols[j].1.push(c);
                        out.push((
                            Move::ToCard {
                                card: c.card(),
                                target: t.card(),
                            },
                            n,
                        ));
                    }
                }
            }
        }
        if self.stock == StockPolicy::Circular {
            let next = s.cursor.map_or(0, |c| c + 1);
            if next < s.stock.len() {
                let mut n = s.clone();
                n.cursor = Some(next);
                out.push((Move::StockDraw, n));
            } else if !s.stock.is_empty() {
                let mut n = s.clone();
                n.cursor = None;
                out.push((Move::StockRecycle, n));
            }
        }
        out
    }

    fn won(&self, s: &KlonState) -> bool {
        s.found.iter().all(|&f| f == self.ranks)
    }

    fn foundations(&self, s: &KlonState) -> [u8; 4] {
        s.found
    }

    fn score(&self, s: &KlonState) -> u32 {
        s.found.iter().map(|&f| f as u32).sum()
    }

    fn lib(&self) -> Klondike {
        Klondike::new(self.ranks, self.stock)
    }

    fn to_lib(&self, s: &KlonState) -> KlondikeState {
        let cards = |v: &[C]| v.iter().map(|c| c.card()).collect::<Vec<_>>();
        KlondikeState::from_parts(
            s.cols
                .iter()
                .map(|(d, u)| KlondikeColumn::new(&cards(d), &cards(u)).unwrap())
                .collect(),
            cards(&s.stock),
            s.cursor.map(|c| c as u8),
            Foundations(s.found),
        )
        .unwrap()
    }

    fn canon(&self, s: &KlonState) -> KlonState {
        let mut n = s.clone();
        n.cols.sort();
        if self.stock == StockPolicy::Reserve {
            n.stock.sort();
        }
        n
    }
}

// ---------------------------------------------------------------- montana

#[derive(Clone, Copy, Debug)]
pub struct Mont {
    pub ranks: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MontState {
    pub rows: Vec<Vec<Option<C>>>,
}

impl Mont {
    /// Each row is 2..R of one suit then a gap, and the suits differ.
    pub fn won_predicate(&self, s: &MontState) -> bool {
        let mut suits = HashSet::new();
        for row in &s.rows {
            let Some(Some(first)) = row.first() else {
                return false;
            };
            for (c, slot) in row.iter().enumerate() {
                let want = (c + 1 < row.len()).then(|| C {
                    suit: first.suit,
                    rank: c as u8 + 2,
                });
                if *slot != want {
                    return false;
                }
            }
            suits.insert(first.suit);
        }
        suits.len() == 4
    }

    fn find(s: &MontState, c: C) -> (usize, usize) {
        for (r, row) in s.rows.iter().enumerate() {
            if let Some(k) = row.iter().position(|&x| x == Some(c)) {
                return (r, k);
            }
        }
        panic!("{c:?} not on the grid")
    }
}

impl Model for Mont {
    type S = MontState;
    type Lib = Montana;

    fn initial(&self, deal: &Deal) -> MontState {
        MontState {
            rows: deal
                .columns
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|s| s.card().filter(|c| c.rank() != 1).map(C::of))
                        .collect()
                })
                .collect(),
        }
    }

    fn successors(&self, s: &MontState) -> Vec<(Move, MontState)> {
        let mut out = Vec::new();
        for r in 0..s.rows.len() {
            for k in 0..s.rows[r].len() {
                if s.rows[r][k].is_some() {
                    continue;
                }
                let (cands, gap): (Vec<C>, GapPos) = if k == 0 {
                    let anchor = s.rows[r].iter().flatten().next().map(|c| c.card());
                    ((0..4).map(|suit| C { suit, rank: 2 }).collect(), GapPos::RowStart(anchor))
                } else {
                    match s.rows[r][k - 1] {
                        Some(left) if left.rank < self.ranks => (
                            vec![C {
                                suit: left.suit,
                                rank: left.rank + 1,
                            }],
                            GapPos::After(left.card()),
                        ),
                        _ => continue,
                    }
                };
                for c in cands {
                    let (fr, fk) = Mont::find(s, c);
                    let mut n = s.clone();
                    n.rows[fr][fk] = None;
                    n.rows[r][k] = Some(c);
                    out.push((Move::GapFill { card: c.card(), gap }, n));
                }
            }
        }
        out
    }

    fn won(&self, s: &MontState) -> bool {
        self.won_predicate(s)
    }

    fn foundations(&self, _: &MontState) -> [u8; 4] {
        [0; 4]
    }

    fn score(&self, s: &MontState) -> u32 {
        s.rows
            .iter()
            .map(|row| {
                let Some(Some(first)) = row.first() else { return 0 };
                if first.rank != 2 {
                    return 0;
                }
                row.iter()
                    .enumerate()
                    .take_while(|(c, x)| {
                        **x == Some(C {
                            suit: first.suit,
                            rank: *c as u8 + 2,
                        })
                    })
                    .count() as u32
            })
            .sum()
    }

    fn lib(&self) -> Montana {
        Montana::new(self.ranks)
    }

    fn to_lib(&self, s: &MontState) -> MontanaState {
        let rows: Vec<Vec<Option<Card>>> = s
            .rows
            .iter()
            .map(|row| row.iter().map(|x| x.map(C::card)).collect())
            .collect();
        MontanaState::from_rows(&rows).unwrap()
    }

    fn canon(&self, s: &MontState) -> MontState {
        let mut n = s.clone();
        n.rows.sort();
        n
    }
}

// -------------------------------------------------------------- searches

/// Applies safe foundation moves until none is left.
pub fn closure<M: Model>(m: &M, mut s: M::S) -> M::S {
    loop {
        let found = m.foundations(&s);
        let next = m.successors(&s).into_iter().find(|(mv, _)| match mv {
            Move::ToFoundation { card, .. } => safe(C::of(*card), &found),
            _ => false,
        });
        match next {
            Some((_, n)) => s = n,
            None => return s,
        }
    }
}

/// Every state reachable from `s`, or `None` past `limit` states.
pub fn reach<M: Model>(m: &M, s: &M::S, limit: usize) -> Option<Vec<M::S>> {
    let mut seen: HashSet<M::S> = HashSet::new();
    let mut order = Vec::new();
    let mut stack = vec![s.clone()];
    seen.insert(s.clone());
    while let Some(x) = stack.pop() {
        for (_, n) in m.successors(&x) {
            if seen.insert(n.clone()) {
                if seen.len() > limit {
                    return None;
                }
                stack.push(n);
            }
        }
        order.push(x);
    }
    Some(order)
}

/// Breadth-first from `s`, stopping after `limit` states. The flag says
/// whether the reachable set was exhausted.
pub fn reach_upto<M: Model>(m: &M, s: &M::S, limit: usize) -> (Vec<M::S>, bool) {
    let mut seen: HashSet<M::S> = HashSet::new();
    let mut order = vec![s.clone()];
    seen.insert(s.clone());
    let mut next = 0;
    while next < order.len() {
        let x = order[next].clone();
        next += 1;
        for (_, n) in m.successors(&x) {
            if seen.insert(n.clone()) {
                if order.len() == limit {
                    return (order, false);
                }
                order.push(n);
            }
        }
    }
    (order, true)
}

/// Memoized depth-first search for any won state.
pub fn solvable<M: Model>(m: &M, s: &M::S, limit: usize) -> Option<bool> {
    let mut seen: HashSet<M::S> = HashSet::new();
    let mut stack = vec![s.clone()];
    seen.insert(s.clone());
    while let Some(x) = stack.pop() {
        if m.won(&x) {
            return Some(true);
        }
        for (_, n) in m.successors(&x) {
            if seen.insert(n.clone()) {
                if seen.len() > limit {
                    return None;
                }
                stack.push(n);
            }
        }
    }
    Some(false)
}

/// Fewest moves to a won state when every step is a move followed by the
/// safe closure, `None` if unsolvable.
pub fn min_ply<M: Model>(m: &M, s: &M::S, limit: usize) -> Option<Option<usize>> {
    let root = closure(m, s.clone());
    let mut dist: HashMap<M::S, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    dist.insert(root.clone(), 0);
    queue.push_back(root);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if m.won(&x) {
            return Some(Some(d));
        }
        for (_, n) in m.successors(&x) {
            let n = closure(m, n);
            if !dist.contains_key(&n) {
                if dist.len() > limit {
                    return None;
                }
                dist.insert(n.clone(), d + 1);
                queue.push_back(n);
            }
        }
    }
    Some(None)
}

/// Highest score over every reachable state.
pub fn max_reach_score<M: Model>(m: &M, s: &M::S, limit: usize) -> Option<u32> {
    reach(m, s, limit).map(|all| all.iter().map(|x| m.score(x)).max().unwrap())
}

/// Oracle model for `params`.
pub fn tableau(params: &GameParams) -> Tableau {
    Tableau {
        ranks: params.ranks,
        cells: (params.game == GameId::Freecell).then_some(params.cells),
    }
}

/// Random positions reached by walking `steps` random moves in the model.
pub fn random_walk<M: Model>(m: &M, s: &M::S, steps: usize, rng: &mut patience::dealers::SplitMix64) -> Vec<M::S> {
    let mut out = vec![s.clone()];
    let mut cur = s.clone();
    for _ in 0..steps {
        let succ = m.successors(&cur);
        if succ.is_empty() {
            break;
        }
        cur = succ[rng.below(succ.len() as u64) as usize].1.clone();
        out.push(cur.clone());
    }
    out
}
