//! Cards, suits, ranks and decks.

use std::fmt;
use std::num::NonZeroU8;
use std::str::FromStr;

use crate::error::ParseError;

/// Largest supported ranks-per-suit.
pub const MAX_RANKS: u8 = 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Suit {
    Clubs = 0,
    Diamonds = 1,
    Hearts = 2,
    Spades = 3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    Black,
    Red,
}

impl Suit {
    pub const ALL: [Suit; 4] = [Suit::Clubs, Suit::Diamonds, Suit::Hearts, Suit::Spades];

    pub fn from_index(i: usize) -> Suit {
        Suit::ALL[i & 3]
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn color(self) -> Color {
        match self {
            Suit::Clubs | Suit::Spades => Color::Black,
            Suit::Diamonds | Suit::Hearts => Color::Red,
        }
    }

    /// The two suits of the other color.
    pub fn opposite(self) -> [Suit; 2] {
        match self.color() {
            Color::Black => [Suit::Diamonds, Suit::Hearts],
            Color::Red => [Suit::Clubs, Suit::Spades],
        }
    }

    /// The other suit of the same color.
    pub fn partner(self) -> Suit {
        match self {
            Suit::Clubs => Suit::Spades,
            Suit::Spades => Suit::Clubs,
            Suit::Diamonds => Suit::Hearts,
            Suit::Hearts => Suit::Diamonds,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Suit::Clubs => 'C',
            Suit::Diamonds => 'D',
            Suit::Hearts => 'H',
            Suit::Spades => 'S',
        }
    }
}

/// A playing card.
///
/// Packed as `suit << 4 | rank`, so the byte is never zero and the natural
/// ordering of the packed byte is the canonical card order (suit-major,
/// Clubs < Diamonds < Hearts < Spades, then ascending rank).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Card(NonZeroU8);

impl Card {
    /// Panics if `rank` is outside `1..=13`.
    pub fn new(suit: Suit, rank: u8) -> Card {
        assert!((1..=MAX_RANKS).contains(&rank), "rank {rank} out of range");
        Card(NonZeroU8::new(((suit as u8) << 4) | rank).unwrap())
    }

    pub fn suit(self) -> Suit {
        Suit::from_index((self.0.get() >> 4) as usize)
    }

    pub fn rank(self) -> u8 {
        self.0.get() & 0x0f
    }

    pub fn color(self) -> Color {
        self.suit().color()
    }

    /// Canonical index `ord(suit) * ranks + (rank - 1)`, a bijection onto
    /// `0..4 * ranks` for a deck of `ranks` ranks per suit.
    pub fn index(self, ranks: u8) -> usize {
        self.suit().index() * ranks as usize + (self.rank() as usize - 1)
    }

    pub fn from_index(index: usize, ranks: u8) -> Card {
        let r = ranks as usize;
        Card::new(Suit::from_index(index / r), (index % r) as u8 + 1)
    }

    /// The single-byte canonical encoding used inside state keys.
    pub fn to_byte(self) -> u8 {
        self.0.get()
    }

    pub fn from_byte(b: u8) -> Option<Card> {
        let rank = b & 0x0f;
        if b >> 6 != 0 || !(1..=MAX_RANKS).contains(&rank) {
            return None;
        }
        NonZeroU8::new(b).map(Card)
    }

    /// True if `self` may be placed on `below` in an alternating
    /// descending build.
    pub fn stacks_on(self, below: Card) -> bool {
        self.color() != below.color() && self.rank() + 1 == below.rank()
    }

    /// Same-suit card one rank higher, if any.
    pub fn successor(self, ranks: u8) -> Option<Card> {
        (self.rank() < ranks).then(|| Card::new(self.suit(), self.rank() + 1))
    }
}

fn rank_token(rank: u8) -> &'static str {
    const NAMES: [&str; 14] = [
        "?", "A", "2", "3", "4", "5", "6", "7", "8", "9", "10", "J", "Q", "K",
    ];
    NAMES[rank as usize]
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", rank_token(self.rank()), self.suit().letter())
    }
}

impl fmt::Debug for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Card {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Card, ParseError> {
        let bad = || ParseError::new(format!("bad card token {s:?}"));
        let (rank, suit) = s.split_at(s.len().checked_sub(1).ok_or_else(bad)?);
        let suit = match suit {
            "C" => Suit::Clubs,
            "D" => Suit::Diamonds,
            "H" => Suit::Hearts,
            "S" => Suit::Spades,
            _ => return Err(bad()),
        };
        let rank = match rank {
            "A" => 1,
            "J" => 11,
            "Q" => 12,
            "K" => 13,
            n => match n.parse::<u8>() {
                Ok(v @ 2..=10) if !n.starts_with('0') => v,
                _ => return Err(bad()),
            },
        };
        Ok(Card::new(suit, rank))
    }
}

/// An ordered pack of `4 * ranks_per_suit` distinct cards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deck {
    ranks_per_suit: u8,
    cards: Vec<Card>,
}

impl Deck {
    /// The full deck in canonical index order.
    pub fn new(ranks_per_suit: u8) -> Deck {
        assert!((1..=MAX_RANKS).contains(&ranks_per_suit));
        let cards = (0..4 * ranks_per_suit as usize)
            .map(|i| Card::from_index(i, ranks_per_suit))
            .collect();
        Deck {
            ranks_per_suit,
            cards,
        }
    }

    /// Builds a deck from an explicit ordering; fails unless every card of
    /// the `ranks_per_suit` deck appears exactly once.
    pub fn from_cards(ranks_per_suit: u8, cards: Vec<Card>) -> Result<Deck, ParseError> {
        if !(1..=MAX_RANKS).contains(&ranks_per_suit) {
            return Err(ParseError::new(format!("ranks {ranks_per_suit} out of range")));
        }
        check_partition(ranks_per_suit, cards.iter().copied()).map_err(ParseError::new)?;
        Ok(Deck {
            ranks_per_suit,
            cards,
        })
    }

    pub fn ranks_per_suit(&self) -> u8 {
        self.ranks_per_suit
    }

    pub fn cards(&self) -> &[Card] {
        &self.cards
    }

    pub fn len(&self) -> usize {
        self.cards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cards.is_empty()
    }

    pub(crate) fn cards_mut(&mut self) -> &mut [Card] {
        &mut self.cards
    }
}

/// Checks that `cards` contains each card of the `ranks` deck exactly once.
pub fn check_partition(ranks: u8, cards: impl IntoIterator<Item = Card>) -> Result<(), String> {
    let total = 4 * ranks as usize;
    let mut seen = vec![false; total];
    let mut count = 0;
    for c in cards {
        if c.rank() > ranks {
            return Err(format!("card {c} exceeds {ranks} ranks"));
        }
        let i = c.index(ranks);
        if seen[i] {
            return Err(format!("card {c} appears twice"));
        }
        seen[i] = true;
        count += 1;
    }
    if count != total {
        let missing = (0..total)
            .filter(|&i| !seen[i])
            .map(|i| Card::from_index(i, ranks).to_string())
            .collect::<Vec<_>>();
        return Err(format!("missing cards: {}", missing.join(" ")));
    }
    Ok(())
}

/// Per-suit foundation tops: `0` is empty, `ranks` is complete.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Foundations(pub [u8; 4]);

impl Foundations {
    pub fn top(&self, suit: Suit) -> u8 {
        self.0[suit.index()]
    }

    pub fn accepts(&self, card: Card) -> bool {
        self.top(card.suit()) + 1 == card.rank()
    }

    pub fn push(&mut self, card: Card) {
        debug_assert!(self.accepts(card));
        self.0[card.suit().index()] += 1;
    }

    pub fn pop(&mut self, suit: Suit) -> Option<Card> {
        let top = self.top(suit);
        (top > 0).then(|| {
            self.0[suit.index()] -= 1;
            Card::new(suit, top)
        })
    }

    /// The card currently on top of `suit`'s pile.
    pub fn top_card(&self, suit: Suit) -> Option<Card> {
        let top = self.top(suit);
        (top > 0).then(|| Card::new(suit, top))
    }

    pub fn count(&self) -> u32 {
        self.0.iter().map(|&v| v as u32).sum()
    }

    pub fn complete(&self, ranks: u8) -> bool {
        self.0.iter().all(|&v| v == ranks)
    }

    pub fn cards(&self) -> impl Iterator<Item = Card> + '_ {
        Suit::ALL
            .into_iter()
            .flat_map(move |s| (1..=self.top(s)).map(move |r| Card::new(s, r)))
    }

    /// True if every ranked requirement is met: `suit` has at least `rank`
    /// on its pile. Ranks at or below zero are vacuous.
    fn has(&self, suit: Suit, rank: i32) -> bool {
        rank <= 0 || self.top(suit) as i32 >= rank
    }

    /// Whether moving `card` to its foundation can never hurt: either both
    /// opposite-color cards one rank lower are already up, or both
    /// opposite-color cards two lower and the same-color other-suit card
    /// three lower are up.
    pub fn is_safe(&self, card: Card) -> bool {
        let v = card.rank() as i32;
        let [a, b] = card.suit().opposite();
        (self.has(a, v - 1) && self.has(b, v - 1))
            || (self.has(a, v - 2) && self.has(b, v - 2) && self.has(card.suit().partner(), v - 3))
    }
}
