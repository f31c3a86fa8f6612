//! Occurrence counting `ν(Π, σ)` and densities `d(Π, σ)`.
//!
//! Two independent routes: direct enumeration of index subsets (used up to
//! [`SUBSET_LIMIT`] letters) and a left-to-right dynamic program whose state
//! is the matched pattern prefix together with the word values assigned to
//! the pattern letters seen so far.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_rational::BigRational;

use crate::combinatorics::{binomial, for_each_combination, ratio};
use crate::error::{Error, Result};
use crate::pattern::{order_key, PatternSet, Word, WordPattern, MAX_PATTERN_LEN};

/// Words up to this length are counted by subset enumeration.
pub const SUBSET_LIMIT: usize = 16;

pub fn count_occurrences(set: &PatternSet, word: &Word) -> Result<u64> {
    check_lengths(set, word)?;
    if word.len() <= SUBSET_LIMIT {
        Ok(count_in_slice(set, word.letters()))
    } else {
        Ok(count_by_dp(set, word))
    }
}

fn check_lengths(set: &PatternSet, word: &Word) -> Result<()> {
    if set.pattern_len() > word.len() {
        return Err(Error::PatternTooLong {
            pattern: set.pattern_len(),
            word: word.len(),
        });
    }
    Ok(())
}

/// Subset enumeration over a raw letter slice. Each index set has exactly one
/// order type, so summing membership over index sets never double counts.
pub fn count_in_slice(set: &PatternSet, letters: &[u32]) -> u64 {
    let m = set.pattern_len();
    let n = letters.len();
    if m > n {
        return 0;
    }
    let mut buf = [0u32; MAX_PATTERN_LEN];
    let mut count = 0u64;
    for_each_combination(n, m, |idx| {
        for (slot, &i) in buf.iter_mut().zip(idx) {
            *slot = letters[i];
        }
        if set.contains_key(order_key(&buf[..m])) {
            count += 1;
        }
    });
    count
}

/// Subset-enumeration route regardless of word length.
pub fn count_by_subsets(set: &PatternSet, word: &Word) -> Result<u64> {
    check_lengths(set, word)?;
    Ok(count_in_slice(set, word.letters()))
}

/// Dynamic-programming route; sums per-pattern counts.
pub fn count_by_dp(set: &PatternSet, word: &Word) -> u64 {
    set.patterns()
        .iter()
        .map(|p| count_pattern_dp(p, word.letters()))
        .sum()
}

fn count_pattern_dp(pattern: &WordPattern, letters: &[u32]) -> u64 {
    let p = pattern.letters();
    let m = p.len();
    let l = pattern.alphabet() as usize;
    // (matched prefix length, value assigned to each pattern letter or 0)
    let mut states: HashMap<(usize, Vec<u32>), u64> = HashMap::new();
    states.insert((0, vec![0; l]), 1);
    let mut complete = 0u64;
    for &v in letters {
        let mut additions: Vec<((usize, Vec<u32>), u64)> = Vec::new();
        for ((j, assigned), &ways) in &states {
            let c = p[*j] as usize - 1;
            if !extends(assigned, c, v) {
                continue;
            }
            if j + 1 == m {
                complete += ways;
            } else {
                let mut next = assigned.clone();
                next[c] = v;
                additions.push(((j + 1, next), ways));
            }
        }
        for (key, ways) in additions {
            *states.entry(key).or_insert(0) += ways;
        }
    }
    complete
}

/// Whether letter `c` (0-based) can take word value `v` given the values
/// already assigned to other pattern letters.
fn extends(assigned: &[u32], c: usize, v: u32) -> bool {
    if assigned[c] != 0 {
        return assigned[c] == v;
    }
    assigned.iter().enumerate().all(|(d, &w)| {
        w == 0 || (d < c && w < v) || (d > c && w > v)
    })
}

/// Whether the letters of `word` at the strictly increasing 0-based
/// `indices` are order-isomorphic to `pattern`.
pub fn is_occurrence(pattern: &WordPattern, word: &Word, indices: &[usize]) -> Result<bool> {
    if indices.len() != pattern.len() || indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadIndexSet);
    }
    if let Some(&bad) = indices.iter().find(|&&i| i >= word.len()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            len: word.len(),
        });
    }
    let p = pattern.letters();
    let w = word.letters();
    for a in 0..p.len() {
        for b in 0..p.len() {
            let (x, y) = (w[indices[a]], w[indices[b]]);
            if (p[a] < p[b]) != (x < y) || (p[a] == p[b]) != (x == y) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `d(Π, σ) = ν(Π, σ) / C(n, m)`, exact.
pub fn density(set: &PatternSet, word: &Word) -> Result<BigRational> {
    let nu = count_occurrences(set, word)?;
    Ok(ratio(
        BigUint::from(nu),
        binomial(word.len() as u64, set.pattern_len() as u64),
    ))
}

/// Counts of every order type of length `m` occurring in `letters`, keyed by
/// packed order type.
pub fn order_type_histogram(letters: &[u32], m: usize) -> HashMap<u64, u64> {
    let mut hist = HashMap::new();
    let mut buf = [0u32; MAX_PATTERN_LEN];
    for_each_combination(letters.len(), m, |idx| {
        for (slot, &i) in buf.iter_mut().zip(idx) {
            *slot = letters[i];
        }
        *hist.entry(order_key(&buf[..m])).or_insert(0) += 1;
    });
    hist
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> PatternSet {
        s.parse().unwrap()
    }

    fn word(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_occurrences(&set("122"), &word("413223")).unwrap(), 2);
        assert_eq!(count_occurrences(&set("123"), &word("123456")).unwrap(), 20);
        assert_eq!(count_occurrences(&set("112;122"), &word("1122")).unwrap(), 4);
    }

    #[test]
    fn pattern_longer_than_word() {
        assert_eq!(
            count_occurrences(&set("1234"), &word("123")),
            Err(Error::PatternTooLong { pattern: 4, word: 3 })
        );
    }

    #[test]
    fn occurrence_examples() {
        let p: WordPattern = "122".parse().unwrap();
        let w = word("413223");
        assert!(is_occurrence(&p, &w, &[1, 3, 4]).unwrap());
        assert!(!is_occurrence(&p, &w, &[0, 1, 2]).unwrap());
        let p12: WordPattern = "12".parse().unwrap();
        assert!(!is_occurrence(&p12, &word("11"), &[0, 1]).unwrap());
        assert!(matches!(
            is_occurrence(&p, &w, &[1, 3, 9]),
            Err(Error::IndexOutOfRange { index: 9, .. })
        ));
        assert_eq!(is_occurrence(&p, &w, &[3, 1, 4]), Err(Error::BadIndexSet));
    }

    #[test]
    fn density_examples() {
        use num_traits::One;
        let d = density(&set("122"), &word("413223")).unwrap();
        assert_eq!(d, BigRational::new(2.into(), 20.into()));
        assert!(density(&set("123"), &word("123456")).unwrap().is_one());
        assert!(density(&set("112;122"), &word("1122")).unwrap().is_one());
    }

    #[test]
    fn dp_matches_subsets_on_examples() {
        for (s, w) in [("122", "413223"), ("112;122", "1122"), ("2413;3142", "25314253")] {
            assert_eq!(
                count_by_dp(&set(s), &word(w)),
                count_by_subsets(&set(s), &word(w)).unwrap()
            );
        }
    }

    #[test]
    fn long_words_use_dp() {
        // 20 distinct increasing letters: every 3-subset is an occurrence of 123.
        let w = Word::new((1..=20).collect()).unwrap();
        assert_eq!(count_occurrences(&set("123"), &w).unwrap(), 1140);
        assert_eq!(count_occurrences(&set("321"), &w).unwrap(), 0);
    }
}
