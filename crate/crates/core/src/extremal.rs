//! Exhaustive computation of `μ(Π,k,n)` and `δ(Π,k,n)` over words, over
//! `S_n`, and over the restricted spaces (weakly increasing words, layered
//! permutations) that contain a maximizer for suitable pattern sets.
//!
//! The space is cut into prefix blocks that are searched in parallel and
//! merged in block order, so results (including witness order) do not depend
//! on scheduling.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{binomial, binomial_u128, for_each_with_prefix, permutation_prefixes, ratio};
use crate::count::count_in_slice;
use crate::error::{Error, Result};
use crate::pattern::{PatternSet, Permutation, Word};

pub const DEFAULT_BUDGET: u128 = 100_000_000;
/// `10!`: default cap for [`delta_permutations`].
pub const PERMUTATION_BUDGET: u128 = 3_628_800;
pub const WITNESS_CAP: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Restriction {
    None,
    WeaklyIncreasing,
    Layered,
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Restriction::None => "none",
            Restriction::WeaklyIncreasing => "weakly_increasing",
            Restriction::Layered => "layered",
        })
    }
}

impl FromStr for Restriction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "none" => Ok(Restriction::None),
            "weakly_increasing" | "increasing" => Ok(Restriction::WeaklyIncreasing),
            "layered" => Ok(Restriction::Layered),
            _ => Err(Error::parse(s, "expected none, weakly-increasing or layered")),
        }
    }
}

/// Ambient space searched.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    /// All of `[k]^n`.
    Words { k: u32 },
    /// `S_n`.
    Permutations,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalResult {
    pub n: usize,
    pub mu: u64,
    pub delta: BigRational,
    /// Maximizers in lexicographic order, at most [`WITNESS_CAP`].
    pub witnesses: Vec<Word>,
    pub searched: u128,
    pub restriction: Restriction,
}

#[derive(Default)]
struct Best {
    mu: u64,
    witnesses: Vec<Vec<u32>>,
    searched: u128,
}

impl Best {
    #[inline]
    fn offer(&mut self, letters: &[u32], nu: u64) {
        self.searched += 1;
        if self.witnesses.is_empty() || nu > self.mu {
            self.mu = nu;
            self.witnesses.clear();
            self.witnesses.push(letters.to_vec());
        } else if nu == self.mu && self.witnesses.len() < WITNESS_CAP {
            self.witnesses.push(letters.to_vec());
        }
    }

    /// `self` precedes `other` lexicographically.
    fn merge(mut self, other: Best) -> Best {
        let searched = self.searched + other.searched;
        if other.witnesses.is_empty() {
            self.searched = searched;
            return self;
        }
        if self.witnesses.is_empty() || other.mu > self.mu {
            return Best { searched, ..other };
        }
        if other.mu == self.mu {
            let room = WITNESS_CAP - self.witnesses.len();
            self.witnesses.extend(other.witnesses.into_iter().take(room));
        }
        self.searched = searched;
        self
    }
}

/// Number of states in the (possibly restricted) space, saturating.
pub fn space_size(space: Space, n: usize, restriction: Restriction) -> u128 {
    match (space, restriction) {
        (Space::Words { k }, Restriction::WeaklyIncreasing) => {
            binomial_u128(n as u64 + k as u64 - 1, n as u64).unwrap_or(u128::MAX)
        }
        (Space::Words { k }, _) => (0..n).try_fold(1u128, |acc, _| acc.checked_mul(k as u128)).unwrap_or(u128::MAX),
        (Space::Permutations, Restriction::Layered) => {
            if n == 0 {
                1
            } else if n > 128 {
                u128::MAX
            } else {
                1u128 << (n - 1)
            }
        }
        (Space::Permutations, _) => (1..=n as u128)
            .try_fold(1u128, |acc, i| acc.checked_mul(i))
            .unwrap_or(u128::MAX),
    }
}

fn check_restriction(set: &PatternSet, space: Space, restriction: Restriction) -> Result<()> {
    let fail = |reason: String| Error::Restriction {
        restriction: restriction.to_string(),
        reason,
    };
    match restriction {
        Restriction::None => Ok(()),
        Restriction::WeaklyIncreasing => {
            if space == Space::Permutations {
                return Err(fail("applies to word spaces only".into()));
            }
            match set.patterns().iter().find(|p| !p.is_weakly_increasing()) {
                Some(p) => Err(fail(format!("pattern {p} is not weakly increasing"))),
                None => Ok(()),
            }
        }
        Restriction::Layered => {
            if space != Space::Permutations {
                return Err(fail("applies to the permutation space only".into()));
            }
            let offending = set.patterns().iter().find(|p| {
                p.as_permutation()
                    .and_then(|q| q.decompose_layers())
                    .is_none()
            });
            match offending {
                Some(p) => Err(fail(format!("pattern {p} is not a layered permutation"))),
                None => Ok(()),
            }
        }
    }
}

/// `μ` and `δ` over the chosen space; exact over the restricted space, and
/// unconditionally exact with [`Restriction::None`].
pub fn max_occurrences(
    set: &PatternSet,
    space: Space,
    n: usize,
    restriction: Restriction,
    budget: u128,
) -> Result<ExtremalResult> {
    if n < set.pattern_len() {
        return Err(Error::PatternTooLong {
            pattern: set.pattern_len(),
            word: n,
        });
    }
    if let Space::Words { k } = space {
        if k == 0 {
            return Err(Error::InvalidWord("alphabet size must be at least 1".into()));
        }
    }
    check_restriction(set, space, restriction)?;
    let size = space_size(space, n, restriction);
    if size > budget {
        return Err(Error::BudgetExceeded {
            budget,
            space: size,
        });
    }

    let best = match (space, restriction) {
        (Space::Words { k }, Restriction::WeaklyIncreasing) => search_weakly_increasing(set, k, n),
        (Space::Words { k }, _) => search_words(set, k, n),
        (Space::Permutations, Restriction::Layered) => search_layered(set, n),
        (Space::Permutations, _) => search_permutations(set, n),
    };
    let alphabet = match space {
        Space::Words { k } => k,
        Space::Permutations => n as u32,
    };
    let witnesses = best
        .witnesses
        .into_iter()
        .map(|w| Word::with_alphabet(w, alphabet))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExtremalResult {
        n,
        mu: best.mu,
        delta: ratio(
            BigUint::from(best.mu),
            binomial(n as u64, set.pattern_len() as u64),
        ),
        witnesses,
        searched: best.searched,
        restriction,
    })
}

/// Unrestricted search over `S_n` for a set of permutation patterns.
pub fn delta_permutations(set: &PatternSet, n: usize, budget: u128) -> Result<ExtremalResult> {
    if let Some(p) = set.patterns().iter().find(|p| !p.is_permutation()) {
        return Err(Error::InvalidSet(format!("{p} is not a permutation")));
    }
    max_occurrences(set, Space::Permutations, n, Restriction::None, budget)
}

/// `δ` for each `n`; fails if the sequence is not non-increasing.
pub fn delta_profile(
    set: &PatternSet,
    space: Space,
    ns: impl IntoIterator<Item = usize>,
    restriction: Restriction,
    budget: u128,
) -> Result<Vec<(usize, BigRational)>> {
    let mut ns: Vec<usize> = ns.into_iter().collect();
    ns.sort_unstable();
    ns.dedup();
    let mut out: Vec<(usize, BigRational)> = Vec::with_capacity(ns.len());
    for n in ns {
        let r = max_occurrences(set, space, n, restriction, budget)?;
        if let Some((prev_n, prev)) = out.last() {
            if r.delta > *prev {
                return Err(Error::Invariant(format!(
                    "delta increased from n={prev_n} ({prev}) to n={n} ({})",
                    r.delta
                )));
            }
        }
        out.push((n, r.delta));
    }
    Ok(out)
}

fn prefix_len(k: u64, n: usize) -> usize {
    let mut p = 0;
    let mut blocks = 1u64;
    while p < n && blocks < 512 {
        blocks *= k;
        p += 1;
    }
    p
}

fn search_words(set: &PatternSet, k: u32, n: usize) -> Best {
    let p = prefix_len(k as u64, n);
    let blocks = (k as u64).pow(p as u32);
    let parts: Vec<Best> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut word = vec![1u32; n];
            // Block index written in base k fills the prefix, most significant first.
            let mut rest = b;
            for slot in word[..p].iter_mut().rev() {
                *slot = (rest % k as u64) as u32 + 1;
                rest /= k as u64;
            }
            let mut best = Best::default();
            loop {
                best.offer(&word, count_in_slice(set, &word));
                // Odometer over the suffix.
                let mut i = n;
                loop {
                    if i == p {
                        return best;
                    }
                    i -= 1;
                    if word[i] < k {
                        word[i] += 1;
                        for w in &mut word[i + 1..] {
                            *w = 1;
                        }
                        break;
                    }
                }
            }
        })
        .collect();
    parts.into_iter().fold(Best::default(), Best::merge)
}

fn search_permutations(set: &PatternSet, n: usize) -> Best {
    let parts: Vec<Best> = permutation_prefixes(n, 2)
        .into_par_iter()
        .map(|pre| {
            let mut best = Best::default();
            for_each_with_prefix(&pre, n, |perm| best.offer(perm, count_in_slice(set, perm)));
            best
        })
        .collect();
    parts.into_iter().fold(Best::default(), Best::merge)
}

fn search_weakly_increasing(set: &PatternSet, k: u32, n: usize) -> Best {
    fn go(set: &PatternSet, k: u32, word: &mut Vec<u32>, n: usize, best: &mut Best) {
        if word.len() == n {
            best.offer(word, count_in_slice(set, word));
            return;
        }
        let lo = *word.last().unwrap();
        for v in lo..=k {
            word.push(v);
            go(set, k, word, n, best);
            word.pop();
        }
    }
    let parts: Vec<Best> = (1..=k)
        .into_par_iter()
        .map(|first| {
            let mut best = Best::default();
            let mut word = Vec::with_capacity(n);
            word.push(first);
            go(set, k, &mut word, n, &mut best);
            best
        })
        .collect();
    parts.into_iter().fold(Best::default(), Best::merge)
}

/// Lexicographic order of layer-size sequences matches lexicographic order of
/// the realized permutations, so blocks keyed by the first layer stay sorted.
fn search_layered(set: &PatternSet, n: usize) -> Best {
    fn go(set: &PatternSet, perm: &mut Vec<u32>, n: usize, best: &mut Best) {
        let below = perm.len() as u32;
        if below as usize == n {
            best.offer(perm, count_in_slice(set, perm));
            return;
        }
        for size in 1..=(n - below as usize) as u32 {
            perm.extend((below + 1..=below + size).rev());
            go(set, perm, n, best);
            perm.truncate(below as usize);
        }
    }
    let parts: Vec<Best> = (1..=n as u32)
        .into_par_iter()
        .map(|first| {
            let mut best = Best::default();
            let mut perm: Vec<u32> = (1..=first).rev().collect();
            go(set, &mut perm, n, &mut best);
            best
        })
        .collect();
    parts.into_iter().fold(Best::default(), Best::merge)
}

/// Uniform index in `0..bound` by rejection from raw 64-bit draws.
fn bounded(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    let zone = u64::MAX - (u64::MAX - bound + 1) % bound;
    loop {
        let x = rng.next_u64();
        if x <= zone {
            return x % bound;
        }
    }
}

/// Monte Carlo mean and sample variance of `ν(π, τ)` for uniform `τ ∈ S_n`.
///
/// Permutations come from a Fisher–Yates shuffle (swap position `i` with a
/// uniform position in `0..=i`, for `i` from `n-1` down to `1`) driven by
/// ChaCha8 seeded through `seed_from_u64`, so output is bit-reproducible.
pub fn sample_mean_occurrences(
    pattern: &Permutation,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if samples == 0 {
        return Err(Error::InvalidSet("at least one sample required".into()));
    }
    if pattern.len() > n {
        return Err(Error::PatternTooLong {
            pattern: pattern.len(),
            word: n,
        });
    }
    let set = PatternSet::single(pattern.to_pattern());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<u32> = (1..=n as u32).collect();
    let (mut sum, mut sum_sq) = (0f64, 0f64);
    for _ in 0..samples {
        for i in (1..n).rev() {
            let j = bounded(&mut rng, i as u64 + 1) as usize;
            perm.swap(i, j);
        }
        let x = count_in_slice(&set, &perm) as f64;
        sum += x;
        sum_sq += x * x;
    }
    let s = samples as f64;
    let mean = sum / s;
    let var = if samples > 1 {
        (sum_sq - s * mean * mean) / (s - 1.0)
    } else {
        0.0
    };
    Ok((mean, var.max(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn set(s: &str) -> PatternSet {
        s.parse().unwrap()
    }

    #[test]
    fn word_space_examples() {
        let r = max_occurrences(&set("112;122"), Space::Words { k: 2 }, 4, Restriction::None, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.mu, 4);
        assert!(r.delta.is_one());
        assert_eq!(r.witnesses[0].to_string(), "1122");
        assert_eq!(r.searched, 16);

        let r = max_occurrences(&set("123"), Space::Words { k: 1 }, 5, Restriction::None, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.mu, 0);
        assert!(r.delta.is_zero());
        assert_eq!(r.witnesses.len(), 1);
    }

    #[test]
    fn layered_space_example() {
        let r = max_occurrences(&set("132;213"), Space::Permutations, 4, Restriction::Layered, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.mu, 4);
        assert!(r.delta.is_one());
        assert_eq!(r.witnesses.iter().map(|w| w.to_string()).collect::<Vec<_>>(), vec!["2143"]);
        assert_eq!(r.searched, 8);
    }

    #[test]
    fn permutation_examples() {
        let r = delta_permutations(&set("213;132"), 4, PERMUTATION_BUDGET).unwrap();
        assert!(r.delta.is_one());
        let r = delta_permutations(&set("21"), 3, PERMUTATION_BUDGET).unwrap();
        assert_eq!((r.mu, r.witnesses[0].to_string()), (3, "321".to_string()));
        let r = delta_permutations(&set("2413"), 4, PERMUTATION_BUDGET).unwrap();
        assert_eq!(r.mu, 1);
        assert_eq!(r.witnesses[0].to_string(), "2413");
        assert!(delta_permutations(&set("112"), 4, PERMUTATION_BUDGET).is_err());
    }

    #[test]
    fn restriction_preconditions() {
        let e = max_occurrences(&set("121"), Space::Words { k: 2 }, 4, Restriction::WeaklyIncreasing, DEFAULT_BUDGET).unwrap_err();
        assert!(e.to_string().contains("121"), "{e}");
        let e = max_occurrences(&set("2413"), Space::Permutations, 5, Restriction::Layered, DEFAULT_BUDGET).unwrap_err();
        assert!(e.to_string().contains("2413"), "{e}");
    }

    #[test]
    fn budget_guard() {
        let e = max_occurrences(&set("12"), Space::Words { k: 3 }, 10, Restriction::None, 1000).unwrap_err();
        assert_eq!(e, Error::BudgetExceeded { budget: 1000, space: 59049 });
    }

    #[test]
    fn profile_examples() {
        let prof = delta_profile(&set("12"), Space::Words { k: 2 }, [2, 3], Restriction::None, DEFAULT_BUDGET).unwrap();
        assert!(prof[0].1.is_one());
        assert_eq!(prof[1].1, BigRational::new(2.into(), 3.into()));
        let prof = delta_profile(&set("112"), Space::Words { k: 2 }, [3], Restriction::None, DEFAULT_BUDGET).unwrap();
        assert!(prof[0].1.is_one());
    }

    #[test]
    fn sampling_is_reproducible() {
        let p: Permutation = "12".parse().unwrap();
        let a = sample_mean_occurrences(&p, 3, 1000, 7).unwrap();
        let b = sample_mean_occurrences(&p, 3, 1000, 7).unwrap();
        assert_eq!(a, b);
        assert!(sample_mean_occurrences(&p, 3, 0, 7).is_err());
    }

    #[test]
    fn witness_cap_and_order() {
        // Every word hits the single-letter pattern n times.
        let r = max_occurrences(&set("1"), Space::Words { k: 3 }, 5, Restriction::None, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.witnesses.len(), WITNESS_CAP);
        assert_eq!(r.witnesses[0].to_string(), "11111");
        assert!(r.witnesses.windows(2).all(|w| w[0] < w[1]));
    }
}
