//! Words over Z_5, the typewriter distance, and codes.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Alphabet size of the channel.
pub const Q: u8 = 5;

/// A distance or weight taking values in `{0, 1, 2, ...} ∪ {∞}`.
///
/// Addition saturates at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtendedWeight {
    Finite(u32),
    Infinite,
}

impl ExtendedWeight {
    pub const ZERO: ExtendedWeight = ExtendedWeight::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedWeight::Finite(_))
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            ExtendedWeight::Finite(w) => Some(w),
            ExtendedWeight::Infinite => None,
        }
    }
}

impl Add for ExtendedWeight {
    type Output = ExtendedWeight;

    fn add(self, rhs: ExtendedWeight) -> ExtendedWeight {
        match (self, rhs) {
            (ExtendedWeight::Finite(a), ExtendedWeight::Finite(b)) => ExtendedWeight::Finite(a + b),
            _ => ExtendedWeight::Infinite,
        }
    }
}

impl std::iter::Sum for ExtendedWeight {
    fn sum<I: Iterator<Item = ExtendedWeight>>(iter: I) -> Self {
        iter.fold(ExtendedWeight::ZERO, Add::add)
    }
}

impl fmt::Display for ExtendedWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedWeight::Finite(w) => write!(f, "{w}"),
            ExtendedWeight::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtendedWeight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" => Ok(ExtendedWeight::Infinite),
            t => t
                .parse::<u32>()
                .map(ExtendedWeight::Finite)
                .map_err(|e| Error::Parse(format!("weight {t:?}: {e}"))),
        }
    }
}

/// Typewriter distance between two symbols: 0 if equal, 1 if they differ by
/// ±1 mod 5, infinite otherwise.
pub fn symbol_distance(a: u8, b: u8) -> ExtendedWeight {
    match (a + Q - b) % Q {
        0 => ExtendedWeight::Finite(0),
        1 | 4 => ExtendedWeight::Finite(1),
        _ => ExtendedWeight::Infinite,
    }
}

/// A word over Z_5 stored as symbols in `0..5`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn new(symbols: Vec<u8>) -> Result<Self> {
        if let Some(&s) = symbols.iter().find(|&&s| s >= Q) {
            return Err(Error::Domain(format!("symbol {s} not in Z_5")));
        }
        Ok(Word(symbols))
    }

    pub fn zeros(n: usize) -> Self {
        Word(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    /// The word whose base-5 digits (most significant first) spell `index`.
    pub fn from_index(mut index: usize, n: usize) -> Self {
        let mut symbols = vec![0u8; n];
        for slot in symbols.iter_mut().rev() {
            *slot = (index % Q as usize) as u8;
            index /= Q as usize;
        }
        Word(symbols)
    }

    pub fn index(&self) -> usize {
        self.0
            .iter()
            .fold(0usize, |acc, &s| acc * Q as usize + s as usize)
    }

    /// Typewriter weight, the distance to the zero word.
    pub fn weight(&self) -> ExtendedWeight {
        self.0.iter().map(|&s| symbol_distance(s, 0)).sum()
    }

    pub fn hamming_weight(&self) -> usize {
        self.0.iter().filter(|&&s| s != 0).count()
    }

    pub fn sub(&self, other: &Word) -> Result<Word> {
        check_lengths(self, other)?;
        Ok(Word(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| (a + Q - b) % Q)
                .collect(),
        ))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let symbols = s
            .trim()
            .chars()
            .map(|c| match c.to_digit(10) {
                Some(d) if d < Q as u32 => Ok(d as u8),
                _ => Err(Error::Parse(format!("{c:?} is not a base-5 digit"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Word(symbols))
    }
}

fn check_lengths(x: &Word, y: &Word) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(())
}

/// Additive extension of [`symbol_distance`] to words.
pub fn seq_distance(x: &Word, y: &Word) -> Result<ExtendedWeight> {
    check_lengths(x, y)?;
    Ok(x.0
        .iter()
        .zip(&y.0)
        .map(|(&a, &b)| symbol_distance(a, b))
        .sum())
}

/// Number of coordinates in which `x` and `y` differ.
pub fn hamming_distance(x: &Word, y: &Word) -> Result<usize> {
    check_lengths(x, y)?;
    Ok(x.0.iter().zip(&y.0).filter(|(a, b)| a != b).count())
}

/// An ordered list of words of a common length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    length: usize,
    words: Vec<Word>,
}

impl Code {
    pub fn new(words: Vec<Word>) -> Result<Self> {
        let length = match words.first() {
            Some(w) => w.len(),
            None => return Err(Error::Precondition("a code needs at least one word".into())),
        };
        if let Some(w) = words.iter().find(|w| w.len() != length) {
            return Err(Error::LengthMismatch {
                left: length,
                right: w.len(),
            });
        }
        Ok(Code { length, words })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn size(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// One codeword per line as base-5 digit strings.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for w in &self.words {
            out.push_str(&w.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the one-word-per-line format; `#` lines and blank lines are
    /// ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::parse)
            .collect::<Result<Vec<Word>>>()?;
        Code::new(words)
    }
}
