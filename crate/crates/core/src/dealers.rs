//! Deterministic deal generation.
//!
//! Numbered Freecell deals use the widely published Microsoft C runtime
//! generator: `state = (state * 214013 + 2531011) mod 2^31`, output
//! `state >> 16`, over a deck ordered `AC AD AH AS 2C ... KS`. The
//! numbering is validated end to end by the solvability of deal 11982
//! (unsolvable with four cells, solvable with five).
//!
//! Everything else is dealt from [`seeded_shuffle`], a Fisher-Yates shuffle
//! driven by SplitMix64 with the standard constants
//! (`0x9E3779B97F4A7C15`, `0xBF58476D1CE4E5B9`, `0x94D049BB133111EB`).

use std::path::PathBuf;
use std::str::FromStr;

use crate::card::{Card, Deck, Suit};
use crate::deal::{Deal, Slot};
use crate::error::{Error, ParseError};
use crate::game::{GameId, GameParams};

/// A Microsoft Freecell deal number, `1..2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MsDealNumber(u32);

impl MsDealNumber {
    pub fn new(n: u32) -> Result<MsDealNumber, Error> {
        if n == 0 || n >= 1 << 31 {
            return Err(Error::Usage(format!("ms deal number must be in 1..2^31, got {n}")));
        }
        Ok(MsDealNumber(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

struct MsRand(u32);

impl MsRand {
    fn next(&mut self) -> u32 {
        self.0 = (self.0.wrapping_mul(214013).wrapping_add(2531011)) & 0x7fff_ffff;
        self.0 >> 16
    }
}

/// The numbered Microsoft Freecell deal: 8 columns, the first four of 7
/// cards, the rest of 6.
pub fn ms_freecell_deal(n: MsDealNumber) -> Deal {
    let mut deck: Vec<Card> = (0..52)
        .map(|i| Card::new(Suit::from_index(i % 4), (i / 4) as u8 + 1))
        .collect();
    let mut rng = MsRand(n.get());
    let mut columns = vec![Vec::with_capacity(7); 8];
    for i in 0..52 {
        let remaining = deck.len() as u32;
        let j = (rng.next() % remaining) as usize;
        columns[i % 8].push(Slot::Up(deck[j]));
        deck.swap_remove(j);
    }
    Deal {
        game: GameId::Freecell,
        ranks: 13,
        cells: Some(4),
        columns,
        reserve: Vec::new(),
    }
}

/// SplitMix64 generator.
#[derive(Clone, Debug)]
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-enough value in `0..bound` by 128-bit multiply-shift.
    pub fn below(&mut self, bound: u64) -> u64 {
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }
}

/// Fisher-Yates shuffle of `deck`, a pure function of `seed`.
pub fn seeded_shuffle(seed: u64, deck: &Deck) -> Deck {
    let mut out = deck.clone();
    let mut rng = SplitMix64::new(seed);
    let cards = out.cards_mut();
    for i in (1..cards.len()).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        cards.swap(i, j);
    }
    out
}

/// Number of cells in each King Albert column block and the reserve size.
pub(crate) fn king_albert_layout(ranks: u8) -> (Vec<usize>, usize) {
    if ranks == 13 {
        ((1..=9).collect(), 7)
    } else {
        // Reduced decks: 4 round-robin columns and a 3-card reserve.
        let tableau = 4 * ranks as usize - 3;
        let sizes = (0..4).map(|c| (tableau + 3 - c) / 4).collect();
        (sizes, 3)
    }
}

pub(crate) fn freecell_columns(ranks: u8) -> usize {
    if ranks == 13 {
        8
    } else {
        4
    }
}

pub(crate) fn klondike_columns(ranks: u8) -> usize {
    if ranks == 13 {
        7
    } else {
        4
    }
}

/// Lays out an ordered deck in `params.game`'s starting pattern.
///
/// * Freecell: round-robin into 8 columns, or 4 for reduced decks.
/// * King Albert: column `j` takes the next `j + 1` cards, then the last 7
///   form the reserve. Reduced decks deal round-robin into 4 columns with a
///   3-card reserve.
/// * Klondike: column `j` takes the next `j + 1` cards with only the top
///   one face up; the rest is the stock in draw order. Reduced decks use 4
///   such columns.
/// * Montana: 4 rows of `ranks` cards in order, aces replaced by gaps.
pub fn deal_for_game(params: &GameParams, cards: &Deck) -> Result<Deal, Error> {
    let ranks = params.ranks;
    if cards.ranks_per_suit() != ranks {
        return Err(Error::InvalidDeal(format!(
            "deck has {} ranks per suit, game wants {ranks}",
            cards.ranks_per_suit()
        )));
    }
    let cs = cards.cards();
    let mut deal = Deal {
        game: params.game,
        ranks,
        cells: None,
        columns: Vec::new(),
        reserve: Vec::new(),
    };
    match params.game {
        GameId::Freecell => {
            deal.cells = Some(params.cells);
            let n = freecell_columns(ranks);
            deal.columns = vec![Vec::new(); n];
            for (i, &c) in cs.iter().enumerate() {
                deal.columns[i % n].push(Slot::Up(c));
            }
        }
        GameId::KingAlbert => {
            let (sizes, reserve) = king_albert_layout(ranks);
            let tableau = cs.len() - reserve;
            if ranks == 13 {
                let mut rest = &cs[..tableau];
                for n in sizes {
                    let (col, tail) = rest.split_at(n);
                    deal.columns.push(col.iter().map(|&c| Slot::Up(c)).collect());
                    rest = tail;
                }
            } else {
                deal.columns = vec![Vec::new(); sizes.len()];
                for (i, &c) in cs[..tableau].iter().enumerate() {
                    deal.columns[i % sizes.len()].push(Slot::Up(c));
                }
            }
            deal.reserve = cs[tableau..].to_vec();
        }
        GameId::Klondike => {
            let mut rest = cs;
            for j in 0..klondike_columns(ranks) {
                let (col, tail) = rest.split_at(j + 1);
                let mut slots: Vec<Slot> = col.iter().map(|&c| Slot::Down(c)).collect();
                if let Some(top) = slots.last_mut() {
                    *top = Slot::Up(top.card().unwrap());
                }
                deal.columns.push(slots);
                rest = tail;
            }
            deal.reserve = rest.to_vec();
        }
        GameId::Montana => {
            deal.columns = cs
                .chunks(ranks as usize)
                .map(|row| {
                    row.iter()
                        .map(|&c| if c.rank() == 1 { Slot::Gap } else { Slot::Up(c) })
                        .collect()
                })
                .collect();
        }
    }
    Ok(deal)
}

/// A `ms:<n>`, `seed:<u64>` or `file:<path>` deal specifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DealSpec {
    Ms(u32),
    Seed(u64),
    File(PathBuf),
}

impl FromStr for DealSpec {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<DealSpec, ParseError> {
        let bad = || ParseError::new(format!("bad deal spec {s:?} (want ms:N, seed:N or file:PATH)"));
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "ms" => arg.parse().map(DealSpec::Ms).map_err(|_| bad()),
            "seed" => arg.parse().map(DealSpec::Seed).map_err(|_| bad()),
            "file" if !arg.is_empty() => Ok(DealSpec::File(arg.into())),
            _ => Err(bad()),
        }
    }
}

/// The deal dealt for `seed` under `params`.
pub fn seeded_deal(params: &GameParams, seed: u64) -> Result<Deal, Error> {
    deal_for_game(params, &seeded_shuffle(seed, &Deck::new(params.ranks)))
}

/// Resolves a deal specifier. File deals must name the same game.
pub fn resolve_deal(spec: &DealSpec, params: &GameParams) -> Result<Deal, Error> {
    match spec {
        DealSpec::Ms(n) => {
            if params.game != GameId::Freecell || params.ranks != 13 {
                return Err(Error::Usage("ms: deals are full-deck freecell only".into()));
            }
            let mut deal = ms_freecell_deal(MsDealNumber::new(*n)?);
            deal.cells = Some(params.cells);
            Ok(deal)
        }
        DealSpec::Seed(seed) => seeded_deal(params, *seed),
        DealSpec::File(path) => {
            let text = std::fs::read_to_string(path)?;
            let deal: Deal = text.parse()?;
            if deal.game != params.game {
                return Err(Error::Usage(format!(
                    "deal file is for {}, not {}",
                    deal.game, params.game
                )));
            }
            Ok(deal)
        }
    }
}
