use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::limits::MAX_AUTOMATA;

/// A global network state: one bit per automaton, automaton `0` in the
/// least significant position.
///
/// The text rendering lists `x_0 x_1 ... x_{n-1}` left to right without
/// separators, so `(1,0,1)` renders as `"101"` and has integer value `5`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    bits: u64,
    len: u8,
}

impl Configuration {
    pub fn new(bits: u64, n: usize) -> Self {
        assert!(n <= MAX_AUTOMATA, "at most {MAX_AUTOMATA} automata");
        Configuration {
            bits: bits & mask(n),
            len: n as u8,
        }
    }

    pub fn zeros(n: usize) -> Self {
        Configuration::new(0, n)
    }

    pub fn from_bools(values: &[bool]) -> Self {
        let bits = values
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i));
        Configuration::new(bits, values.len())
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    /// Integer rendering, usable as a table index.
    #[inline]
    pub fn index(self) -> usize {
        self.bits as usize
    }

    #[inline]
    pub fn len(self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(self, i: usize) -> bool {
        (self.bits >> i) & 1 == 1
    }

    pub fn with(self, i: usize, value: bool) -> Self {
        let bits = if value {
            self.bits | (1 << i)
        } else {
            self.bits & !(1 << i)
        };
        Configuration { bits, ..self }
    }

    /// Negates exactly the automata in `w`.
    pub fn flip(self, w: AutomataSet) -> Result<Self> {
        if let Some(i) = w.max_index() {
            if i >= self.len() {
                return Err(Error::IndexOutOfRange { index: i, n: self.len() });
            }
        }
        Ok(self.flip_unchecked(w))
    }

    #[inline]
    pub(crate) fn flip_unchecked(self, w: AutomataSet) -> Self {
        Configuration {
            bits: self.bits ^ w.bits(),
            len: self.len,
        }
    }

    /// `D(x, y)`: automata whose states differ.
    pub fn difference(self, other: Configuration) -> AutomataSet {
        AutomataSet::from_bits(self.bits ^ other.bits)
    }

    pub fn hamming(self, other: Configuration) -> usize {
        (self.bits ^ other.bits).count_ones() as usize
    }

    pub fn to_bools(self) -> Vec<bool> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    /// Every configuration of `B^n` in ascending integer order.
    pub fn all(n: usize) -> impl Iterator<Item = Configuration> + Clone {
        (0..1u64 << n).map(move |b| Configuration::new(b, n))
    }

    /// Tuple form `(x_0,...,x_{n-1})`.
    pub fn tuple(self) -> String {
        let parts: Vec<&str> = (0..self.len())
            .map(|i| if self.get(i) { "1" } else { "0" })
            .collect();
        format!("({})", parts.join(","))
    }
}

#[inline]
pub(crate) fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tuple())
    }
}

impl FromStr for Configuration {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err("empty configuration".into());
        }
        if s.len() > MAX_AUTOMATA {
            return Err(format!("configuration longer than {MAX_AUTOMATA} bits"));
        }
        let mut bits = 0u64;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << i,
                other => return Err(format!("invalid bit '{other}' in configuration '{s}'")),
            }
        }
        Ok(Configuration::new(bits, s.len()))
    }
}

impl Serialize for Configuration {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A subset of automata `W ⊆ V`, stored as a bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AutomataSet(u64);

impl AutomataSet {
    pub const EMPTY: AutomataSet = AutomataSet(0);

    pub fn from_bits(bits: u64) -> Self {
        AutomataSet(bits)
    }

    /// `V = {0, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        AutomataSet(mask(n))
    }

    pub fn singleton(i: usize) -> Self {
        AutomataSet(1 << i)
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        i < 64 && (self.0 >> i) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn max_index(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    #[inline]
    pub fn union(self, other: AutomataSet) -> Self {
        AutomataSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: AutomataSet) -> Self {
        AutomataSet(self.0 & other.0)
    }

    #[inline]
    pub fn minus(self, other: AutomataSet) -> Self {
        AutomataSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset(self, other: AutomataSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    /// All subsets of `self`, the empty set first.
    pub fn subsets(self) -> impl Iterator<Item = AutomataSet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let current = next?;
            next = if current == full {
                None
            } else {
                Some((current.wrapping_sub(full)) & full)
            };
            Some(AutomataSet(current))
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for AutomataSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut set = AutomataSet::EMPTY;
        for i in iter {
            set.insert(i);
        }
        set
    }
}

impl fmt::Display for AutomataSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for AutomataSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for AutomataSet {
    type Err = String;

    /// Accepts `{0,2}`, `{}` and `0,2`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let inner = s.trim();
        let inner = inner
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .unwrap_or(inner);
        let mut set = AutomataSet::EMPTY;
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let i: usize = part
                .parse()
                .map_err(|_| format!("invalid automaton index '{part}'"))?;
            if i >= MAX_AUTOMATA {
                return Err(format!("automaton index {i} too large"));
            }
            set.insert(i);
        }
        Ok(set)
    }
}

impl Serialize for AutomataSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_vec().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AutomataSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let items = Vec::<usize>::deserialize(deserializer)?;
        if let Some(&i) = items.iter().find(|&&i| i >= MAX_AUTOMATA) {
            return Err(serde::de::Error::custom(format!("automaton index {i} too large")));
        }
        Ok(items.into_iter().collect())
    }
}
