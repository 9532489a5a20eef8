//! The free monoid of replacement words over the alphabet {1, 2, 3}.
//!
//! Letter `j` means "replace member j of the triple by the inscribed disk".
//! Words serialize as digit strings like `"11123"`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the three member positions.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter(u8);

impl Letter {
    pub const L1: Letter = Letter(1);
    pub const L2: Letter = Letter(2);
    pub const L3: Letter = Letter(3);
    pub const ALL: [Letter; 3] = [Letter(1), Letter(2), Letter(3)];

    pub fn new(v: u8) -> Result<Self> {
        if (1..=3).contains(&v) {
            Ok(Letter(v))
        } else {
            Err(Error::InvalidArgument(format!(
                "letter must be 1, 2 or 3, got {v}"
            )))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// 0-based position index.
    pub fn index(self) -> usize {
        (self.0 - 1) as usize
    }

    /// The two letters other than `self`, in increasing order.
    pub fn others(self) -> [Letter; 2] {
        match self.0 {
            1 => [Letter(2), Letter(3)],
            2 => [Letter(1), Letter(3)],
            _ => [Letter(1), Letter(2)],
        }
    }
}

impl std::fmt::Display for Letter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite word; the empty word is the monoid unit.
///
/// The derived `Ord` is lexicographic with prefixes first, which is the
/// deterministic emission order used by streaming and rendering.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        Word(letters.into_iter().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The power `j^n` (empty when `n = 0`).
    pub fn power(j: Letter, n: usize) -> Word {
        Word(vec![j; n])
    }

    /// Whether `self` extends `other`, i.e. `self = other · tail`. In the
    /// cylinder-set order this is `self <= other` (deeper words are smaller).
    pub fn extends(&self, other: &Word) -> bool {
        self.0.len() >= other.0.len() && self.0[..other.0.len()] == other.0[..]
    }

    /// Whether the two words are comparable in the prefix order.
    pub fn comparable(&self, other: &Word) -> bool {
        self.extends(other) || other.extends(self)
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            // an unambiguous spelling for the empty word in CSV output
            return write!(f, "e");
        }
        for l in &self.0 {
            write!(f, "{}", l.value())?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "e" || s.is_empty() {
            return Ok(Word::empty());
        }
        s.bytes()
            .map(|b| {
                if b.is_ascii_digit() {
                    Letter::new(b - b'0')
                } else {
                    Err(Error::InvalidArgument(format!(
                        "invalid word character {:?}",
                        b as char
                    )))
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A word of the form `j^n k` with `j != k` and `n >= 1`.
///
/// These words index the decomposition of the gasket minus its boundary
/// vertices; any two distinct ones are incomparable in the prefix order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct IndexWord {
    j: Letter,
    n: u32,
    k: Letter,
}

impl IndexWord {
    pub fn new(j: Letter, n: u32, k: Letter) -> Result<Self> {
        if j == k {
            return Err(Error::InvalidArgument(
                "index word requires distinct letters".into(),
            ));
        }
        if n == 0 {
            return Err(Error::InvalidArgument(
                "index word requires n >= 1".into(),
            ));
        }
        Ok(Self { j, n, k })
    }

    pub fn j(&self) -> Letter {
        self.j
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> Letter {
        self.k
    }

    pub fn to_word(&self) -> Word {
        let mut w = Word::power(self.j, self.n as usize);
        w.push(self.k);
        w
    }

    pub fn len(&self) -> usize {
        self.n as usize + 1
    }
}

impl std::fmt::Display for IndexWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_word())
    }
}

impl Serialize for IndexWord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// All index words `j^n k` with `n <= n_max`, in `(n, j, k)` lexicographic
/// order: six per value of `n`.
pub fn enumerate_index_set(n_max: u32) -> Vec<IndexWord> {
    let mut out = Vec::with_capacity(6 * n_max as usize);
    for n in 1..=n_max {
        for j in Letter::ALL {
            for k in Letter::ALL {
                if j != k {
                    out.push(IndexWord { j, n, k });
                }
            }
        }
    }
    out
}
