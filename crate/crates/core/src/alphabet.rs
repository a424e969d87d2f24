//! Graded letters and the standard alphabets.
//!
//! A [`Letter`] stores twice its numeric value so that barred, integer and
//! half-integer letters share one total order:
//! `bar(m) < ... < bar(1) < 1/2 < 1 < 3/2 < 2 < ...`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A letter of a graded alphabet.
///
/// Barred letters `bar(k)` have key `-2k`, integers `k` have key `2k` and
/// half-integers `k - 1/2` have key `2k - 1`. Odd keys are the parity-1 letters.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(i32);

impl Letter {
    pub fn bar(k: u32) -> Letter {
        assert!(k >= 1, "barred letters start at 1");
        Letter(-2 * k as i32)
    }

    pub fn int(k: u32) -> Letter {
        assert!(k >= 1, "integer letters start at 1");
        Letter(2 * k as i32)
    }

    /// The half-integer `j - 1/2`, so `half(1)` is `1/2`.
    pub fn half(j: u32) -> Letter {
        assert!(j >= 1, "half-integer letters start at 1/2");
        Letter(2 * j as i32 - 1)
    }

    pub fn key(self) -> i32 {
        self.0
    }

    pub fn from_key(key: i32) -> Option<Letter> {
        (key != 0).then_some(Letter(key))
    }

    /// 0 for barred and integer letters, 1 for half-integers.
    pub fn parity(self) -> u8 {
        (self.0.rem_euclid(2)) as u8
    }

    pub fn is_even(self) -> bool {
        self.parity() == 0
    }

    pub fn is_barred(self) -> bool {
        self.0 < 0
    }

    /// `k` for `bar(k)`.
    pub fn bar_index(self) -> Option<u32> {
        self.is_barred().then(|| (-self.0 / 2) as u32)
    }

    /// `k` for the integer letter `k`.
    pub fn int_value(self) -> Option<u32> {
        (self.0 > 0 && self.0 % 2 == 0).then_some((self.0 / 2) as u32)
    }

    /// `j` for the half-integer `j - 1/2`.
    pub fn half_index(self) -> Option<u32> {
        (self.0 > 0 && self.0 % 2 == 1).then(|| ((self.0 + 1) / 2) as u32)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(k) = self.bar_index() {
            write!(f, "b{k}")
        } else if let Some(k) = self.int_value() {
            write!(f, "{k}")
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Letter> {
        let bad = || Error::Parse(format!("bad letter `{s}`"));
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('b') {
            let k: u32 = rest.parse().map_err(|_| bad())?;
            return if k == 0 { Err(bad()) } else { Ok(Letter::bar(k)) };
        }
        if let Some(num) = s.strip_suffix("/2") {
            let n: u32 = num.parse().map_err(|_| bad())?;
            return if n % 2 == 1 { Ok(Letter::half(n.div_ceil(2))) } else { Err(bad()) };
        }
        let k: u32 = s.parse().map_err(|_| bad())?;
        if k == 0 {
            Err(bad())
        } else {
            Ok(Letter::int(k))
        }
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Letter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Letter, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn compare(a: Letter, b: Letter) -> Ordering {
    a.cmp(&b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphabetKind {
    /// `bar(m) .. bar(1), 1 .. n`, all even.
    Plus,
    /// `bar(m) .. bar(1), 1/2 .. n - 1/2`, the half-integers odd.
    Super,
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<Letter>,
    kind: AlphabetKind,
    m: u32,
    n: u32,
}

impl Alphabet {
    pub fn standard(kind: AlphabetKind, m: u32, n: u32) -> Result<Alphabet> {
        if m == 0 {
            return Err(Error::InvalidSpec("alphabet needs m >= 1".into()));
        }
        let mut letters: Vec<Letter> = (1..=m).rev().map(Letter::bar).collect();
        match kind {
            AlphabetKind::Plus => letters.extend((1..=n).map(Letter::int)),
            AlphabetKind::Super => letters.extend((1..=n).map(Letter::half)),
            AlphabetKind::Custom => {
                return Err(Error::InvalidSpec("custom alphabets use Alphabet::custom".into()))
            }
        }
        Ok(Alphabet { letters, kind, m, n })
    }

    pub fn plus(m: u32, n: u32) -> Alphabet {
        Alphabet::standard(AlphabetKind::Plus, m, n).expect("m >= 1")
    }

    pub fn sup(m: u32, n: u32) -> Alphabet {
        Alphabet::standard(AlphabetKind::Super, m, n).expect("m >= 1")
    }

    pub fn custom(mut letters: Vec<Letter>) -> Alphabet {
        letters.sort();
        letters.dedup();
        let m = letters.iter().filter(|l| l.is_barred()).count() as u32;
        let n = letters.len() as u32 - m;
        Alphabet { letters, kind: AlphabetKind::Custom, m, n }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn kind(&self) -> AlphabetKind {
        self.kind
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn contains(&self, a: Letter) -> bool {
        self.letters.binary_search(&a).is_ok()
    }

    pub fn position(&self, a: Letter) -> Option<usize> {
        self.letters.binary_search(&a).ok()
    }

    pub fn even_count(&self) -> usize {
        self.letters.iter().filter(|l| l.is_even()).count()
    }

    pub fn has_odd(&self) -> bool {
        self.letters.iter().any(|l| !l.is_even())
    }

    /// The smallest letter, `bar(m)` for the standard families.
    pub fn bottom(&self) -> Letter {
        self.letters[0]
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            AlphabetKind::Plus => write!(f, "J({}+{})", self.m, self.n),
            AlphabetKind::Super => write!(f, "J({}|{})", self.m, self.n),
            AlphabetKind::Custom => {
                let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
        }
    }
}

impl Serialize for Alphabet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.letters.serialize(s)
    }
}
