//! Patterns, ambient words, layered shapes and the symmetry operations.
//!
//! Letters are 1-based. A [`WordPattern`] over `[l]` must use every letter of
//! `[l]`; an ambient [`Word`] over `[k]` need not. A [`Permutation`] is the
//! special case of a word pattern with distinct letters.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Longest pattern whose order type fits in an [`OrderKey`].
pub const MAX_PATTERN_LEN: usize = 16;

/// Order type of a short sequence packed four bits per letter (dense rank
/// minus one). Only comparable between sequences of equal length.
pub type OrderKey = u64;

/// Dense ranks (1-based) of `values`, i.e. the unique pattern order-isomorphic
/// to them.
pub fn order_type(values: &[u32]) -> Vec<u32> {
    let mut distinct: Vec<u32> = values.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    values
        .iter()
        .map(|v| distinct.binary_search(v).unwrap() as u32 + 1)
        .collect()
}

/// Packed order type of `values`; `values.len()` must not exceed
/// [`MAX_PATTERN_LEN`].
#[inline]
pub fn order_key(values: &[u32]) -> OrderKey {
    debug_assert!(values.len() <= MAX_PATTERN_LEN);
    let mut sorted = [0u32; MAX_PATTERN_LEN];
    let n = values.len();
    sorted[..n].copy_from_slice(values);
    let s = &mut sorted[..n];
    s.sort_unstable();
    let mut d = 0;
    for i in 0..n {
        if i == 0 || s[i] != s[d - 1] {
            s[d] = s[i];
            d += 1;
        }
    }
    let distinct = &s[..d];
    let mut key = 0u64;
    for &v in values {
        let r = distinct.iter().position(|&x| x == v).unwrap() as u64;
        key = (key << 4) | r;
    }
    key
}

fn pack_letters(letters: &[u32]) -> OrderKey {
    letters
        .iter()
        .fold(0u64, |key, &v| (key << 4) | (v as u64 - 1))
}

fn format_letters(letters: &[u32], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if letters.iter().all(|&v| v <= 9) {
        for v in letters {
            write!(f, "{v}")?;
        }
        Ok(())
    } else {
        let parts: Vec<String> = letters.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Parses "2413" (one letter per digit) or "10,2,3".
pub fn parse_letters(s: &str) -> Result<Vec<u32>> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::parse(s, "empty sequence"));
    }
    let letters: Vec<u32> = if t.contains(',') {
        t.split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::parse(s, format!("`{}` is not a letter", p.trim())))
            })
            .collect::<Result<_>>()?
    } else {
        t.chars()
            .map(|c| {
                c.to_digit(10)
                    .ok_or_else(|| Error::parse(s, format!("`{c}` is not a digit")))
            })
            .collect::<Result<_>>()?
    };
    if letters.contains(&0) {
        return Err(Error::parse(s, "letters are 1-based"));
    }
    Ok(letters)
}

/// A pattern over `[l]` using every letter at least once.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WordPattern {
    letters: Vec<u32>,
    alphabet: u32,
}

impl WordPattern {
    pub fn new(letters: Vec<u32>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidPattern("empty pattern".into()));
        }
        if letters.len() > MAX_PATTERN_LEN {
            return Err(Error::InvalidPattern(format!(
                "length {} exceeds the supported maximum {MAX_PATTERN_LEN}",
                letters.len()
            )));
        }
        let alphabet = *letters.iter().max().unwrap();
        if letters.contains(&0) {
            return Err(Error::InvalidPattern("letters are 1-based".into()));
        }
        let used: HashSet<u32> = letters.iter().copied().collect();
        if used.len() as u32 != alphabet {
            return Err(Error::InvalidPattern(format!(
                "pattern must use every letter of [1..{alphabet}]"
            )));
        }
        Ok(WordPattern { letters, alphabet })
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    /// Pattern length `m`.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Alphabet size `l`.
    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn is_permutation(&self) -> bool {
        self.alphabet as usize == self.letters.len()
    }

    pub fn as_permutation(&self) -> Option<Permutation> {
        self.is_permutation().then(|| Permutation {
            entries: self.letters.clone(),
        })
    }

    pub fn is_weakly_increasing(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn order_key(&self) -> OrderKey {
        pack_letters(&self.letters)
    }

    pub fn reverse(&self) -> WordPattern {
        let mut letters = self.letters.clone();
        letters.reverse();
        WordPattern {
            letters,
            alphabet: self.alphabet,
        }
    }

    pub fn complement(&self) -> WordPattern {
        WordPattern {
            letters: self.letters.iter().map(|v| self.alphabet + 1 - v).collect(),
            alphabet: self.alphabet,
        }
    }

    pub fn inverse(&self) -> Result<WordPattern> {
        self.as_permutation()
            .map(|p| p.inverse().into())
            .ok_or(Error::InverseUndefined)
    }
}

impl fmt::Display for WordPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_letters(&self.letters, f)
    }
}

impl FromStr for WordPattern {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        WordPattern::new(parse_letters(s)?)
    }
}

impl From<Permutation> for WordPattern {
    fn from(p: Permutation) -> Self {
        let alphabet = p.entries.len() as u32;
        WordPattern {
            letters: p.entries,
            alphabet,
        }
    }
}

/// A permutation of `[m]` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    entries: Vec<u32>,
}

impl Permutation {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        let m = entries.len();
        if m == 0 {
            return Err(Error::InvalidPattern("empty permutation".into()));
        }
        let mut seen = vec![false; m + 1];
        for &v in &entries {
            if v == 0 || v as usize > m || seen[v as usize] {
                return Err(Error::InvalidPattern(format!(
                    "not a permutation of [1..{m}]"
                )));
            }
            seen[v as usize] = true;
        }
        Ok(Permutation { entries })
    }

    pub fn identity(m: usize) -> Self {
        Permutation {
            entries: (1..=m as u32).collect(),
        }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `π(i)` for 1-based `i`.
    pub fn at(&self, i: usize) -> u32 {
        self.entries[i - 1]
    }

    pub fn reverse(&self) -> Permutation {
        let mut entries = self.entries.clone();
        entries.reverse();
        Permutation { entries }
    }

    pub fn complement(&self) -> Permutation {
        let m = self.entries.len() as u32;
        Permutation {
            entries: self.entries.iter().map(|v| m + 1 - v).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut entries = vec![0; self.entries.len()];
        for (i, &v) in self.entries.iter().enumerate() {
            entries[v as usize - 1] = i as u32 + 1;
        }
        Permutation { entries }
    }

    /// Closure of `{self}` under reverse, complement and inverse.
    pub fn symmetry_class(&self) -> BTreeSet<Permutation> {
        let mut class = BTreeSet::new();
        let mut frontier = vec![self.clone()];
        while let Some(p) = frontier.pop() {
            if class.insert(p.clone()) {
                frontier.extend([p.reverse(), p.complement(), p.inverse()]);
            }
        }
        class
    }

    pub fn to_pattern(&self) -> WordPattern {
        self.clone().into()
    }

    /// Layer sizes if this permutation is layered.
    pub fn decompose_layers(&self) -> Option<LayeredShape> {
        let mut layers = Vec::new();
        let mut below = 0u32;
        let mut i = 0;
        while i < self.entries.len() {
            let top = self.entries[i];
            if top <= below {
                return None;
            }
            let size = (top - below) as usize;
            if i + size > self.entries.len() {
                return None;
            }
            for (offset, &v) in self.entries[i..i + size].iter().enumerate() {
                if v != top - offset as u32 {
                    return None;
                }
            }
            layers.push(size);
            below = top;
            i += size;
        }
        Some(LayeredShape { layers })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_letters(&self.entries, f)
    }
}

impl FromStr for Permutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Permutation::new(parse_letters(s)?)
    }
}

/// An ambient word over `[k]`; not every letter has to appear.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<u32>,
    alphabet: u32,
}

impl Word {
    /// Word over the smallest alphabet containing its letters.
    pub fn new(letters: Vec<u32>) -> Result<Self> {
        let k = letters.iter().copied().max().unwrap_or(1);
        Word::with_alphabet(letters, k)
    }

    pub fn with_alphabet(letters: Vec<u32>, alphabet: u32) -> Result<Self> {
        if letters.iter().any(|&v| v == 0 || v > alphabet) {
            return Err(Error::InvalidWord(format!(
                "letters must lie in [1..{alphabet}]"
            )));
        }
        Ok(Word { letters, alphabet })
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn reverse(&self) -> Word {
        let mut letters = self.letters.clone();
        letters.reverse();
        Word {
            letters,
            alphabet: self.alphabet,
        }
    }

    /// Complement over `[k]`.
    pub fn complement(&self) -> Word {
        Word {
            letters: self.letters.iter().map(|v| self.alphabet + 1 - v).collect(),
            alphabet: self.alphabet,
        }
    }
}

impl From<&Permutation> for Word {
    fn from(p: &Permutation) -> Self {
        Word {
            letters: p.entries.clone(),
            alphabet: p.entries.len() as u32,
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_letters(&self.letters, f)
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Word::new(parse_letters(s)?)
    }
}

/// Layer sizes `[m₁, …, m_r]` of a layered permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LayeredShape {
    layers: Vec<usize>,
}

impl LayeredShape {
    pub fn new(layers: Vec<usize>) -> Result<Self> {
        if layers.is_empty() || layers.contains(&0) {
            return Err(Error::InvalidPattern(
                "layered shape needs at least one layer and positive sizes".into(),
            ));
        }
        Ok(LayeredShape { layers })
    }

    pub fn layers(&self) -> &[usize] {
        &self.layers
    }

    /// Total length `m`.
    pub fn total(&self) -> usize {
        self.layers.iter().sum()
    }

    /// Layer count `r`.
    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn shortest_layer(&self) -> usize {
        *self.layers.iter().min().unwrap()
    }

    /// Increasing run of decreasing blocks: `[2,3]` is `21543`.
    pub fn realize(&self) -> Permutation {
        let mut entries = Vec::with_capacity(self.total());
        let mut below = 0u32;
        for &size in &self.layers {
            let top = below + size as u32;
            entries.extend((below + 1..=top).rev());
            below = top;
        }
        Permutation { entries }
    }
}

impl fmt::Display for LayeredShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.layers.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl FromStr for LayeredShape {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::parse(s, "expected a bracketed list like [2,3]"))?;
        let layers = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse(s, format!("`{}` is not a layer size", p.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        LayeredShape::new(layers).map_err(|e| Error::parse(s, e.to_string()))
    }
}

macro_rules! display_serialize {
    ($($t:ty),*) => {$(
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }
    )*};
}
display_serialize!(WordPattern, Permutation, Word, LayeredShape);

/// A nonempty set of distinct patterns of one common length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSet {
    patterns: Vec<WordPattern>,
    keys: Vec<OrderKey>,
}

impl PatternSet {
    pub fn new(patterns: Vec<WordPattern>) -> Result<Self> {
        let Some(first) = patterns.first() else {
            return Err(Error::InvalidSet("empty pattern set".into()));
        };
        let m = first.len();
        if let Some(p) = patterns.iter().find(|p| p.len() != m) {
            return Err(Error::InvalidSet(format!(
                "mixed pattern lengths: {first} has length {m}, {p} has length {}",
                p.len()
            )));
        }
        let mut keys: Vec<OrderKey> = patterns.iter().map(WordPattern::order_key).collect();
        keys.sort_unstable();
        if keys.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSet("duplicate pattern".into()));
        }
        Ok(PatternSet { patterns, keys })
    }

    pub fn single(p: WordPattern) -> Self {
        PatternSet::new(vec![p]).expect("a single pattern is a valid set")
    }

    pub fn from_permutations(perms: impl IntoIterator<Item = Permutation>) -> Result<Self> {
        PatternSet::new(perms.into_iter().map(WordPattern::from).collect())
    }

    pub fn from_shapes(shapes: &[LayeredShape]) -> Result<Self> {
        PatternSet::from_permutations(shapes.iter().map(LayeredShape::realize))
    }

    pub fn patterns(&self) -> &[WordPattern] {
        &self.patterns
    }

    /// Common pattern length `m`.
    pub fn pattern_len(&self) -> usize {
        self.patterns[0].len()
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    #[inline]
    pub fn contains_key(&self, key: OrderKey) -> bool {
        self.keys.binary_search(&key).is_ok()
    }

    pub fn all_permutations(&self) -> bool {
        self.patterns.iter().all(WordPattern::is_permutation)
    }
}

impl fmt::Display for PatternSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.patterns.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl FromStr for PatternSet {
    type Err = Error;
    /// Patterns separated by `;` or whitespace.
    fn from_str(s: &str) -> Result<Self> {
        let patterns = s
            .split(|c: char| c == ';' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .map(WordPattern::from_str)
            .collect::<Result<Vec<_>>>()?;
        PatternSet::new(patterns)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn parsing_and_display() {
        assert_eq!(perm("2413").entries(), &[2, 4, 1, 3]);
        let p: WordPattern = "10,2,3,4,5,6,7,8,9,1".parse().unwrap();
        assert_eq!(p.len(), 10);
        assert_eq!(p.to_string(), "10,2,3,4,5,6,7,8,9,1");
        assert_eq!(perm("312").to_string(), "312");
        assert!("2x3".parse::<Permutation>().is_err());
        assert!("113".parse::<WordPattern>().is_err());
        assert!("1134".parse::<Permutation>().is_err());
        let shape: LayeredShape = " [2, 3] ".parse().unwrap();
        assert_eq!(shape.layers(), &[2, 3]);
        assert!("[2,0]".parse::<LayeredShape>().is_err());
        assert!("2,3".parse::<LayeredShape>().is_err());
    }

    #[test]
    fn word_patterns_must_be_surjective() {
        assert!(WordPattern::new(vec![1, 3]).is_err());
        let p = WordPattern::new(vec![1, 1, 2]).unwrap();
        assert_eq!(p.alphabet(), 2);
        assert!(!p.is_permutation());
        assert!(Word::new(vec![1, 3, 3]).is_ok());
    }

    #[test]
    fn symmetry_operations() {
        assert_eq!(perm("2413").inverse(), perm("3142"));
        let p: WordPattern = "112".parse().unwrap();
        assert_eq!(p.reverse().to_string(), "211");
        assert_eq!(p.complement().to_string(), "221");
        assert_eq!(perm("123").complement().reverse(), perm("123"));
        assert_eq!(p.inverse(), Err(Error::InverseUndefined));
        assert_eq!(
            "2413".parse::<WordPattern>().unwrap().inverse().unwrap(),
            "3142".parse().unwrap()
        );
    }

    #[test]
    fn symmetry_classes() {
        let c: Vec<_> = perm("2413").symmetry_class().into_iter().collect();
        assert_eq!(c, vec![perm("2413"), perm("3142")]);
        let c: Vec<_> = perm("123").symmetry_class().into_iter().collect();
        assert_eq!(c, vec![perm("123"), perm("321")]);
        assert_eq!(perm("1").symmetry_class().len(), 1);
        assert_eq!(perm("132").symmetry_class().len(), 4);
    }

    #[test]
    fn layered_round_trip() {
        let s = LayeredShape::new(vec![2, 3]).unwrap();
        assert_eq!(s.realize(), perm("21543"));
        assert_eq!(LayeredShape::new(vec![2, 1]).unwrap().realize(), perm("213"));
        assert_eq!(LayeredShape::new(vec![1]).unwrap().realize(), perm("1"));
        assert_eq!(perm("21543").decompose_layers(), Some(s));
        assert_eq!(perm("2413").decompose_layers(), None);
        assert_eq!(perm("1").decompose_layers().unwrap().layers(), &[1]);
    }

    #[test]
    fn order_keys() {
        assert_eq!(order_type(&[4, 1, 3]), vec![3, 1, 2]);
        assert_eq!(order_type(&[1, 3, 3]), vec![1, 2, 2]);
        let p: WordPattern = "122".parse().unwrap();
        assert_eq!(order_key(&[1, 3, 3]), p.order_key());
        assert_eq!(order_key(&[7, 2, 9]), perm("213").to_pattern().order_key());
    }

    #[test]
    fn pattern_sets() {
        let s: PatternSet = "112;122".parse().unwrap();
        assert_eq!(s.len(), 2);
        assert!(matches!(
            "12;123".parse::<PatternSet>(),
            Err(Error::InvalidSet(_))
        ));
        assert!(matches!(
            "12 12".parse::<PatternSet>(),
            Err(Error::InvalidSet(_))
        ));
    }
}
