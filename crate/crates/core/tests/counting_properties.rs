use num_rational::BigRational;
use proptest::prelude::*;

use patstat_core::combinatorics::{compositions, permutations, rational_to_f64};
use patstat_core::moments::mean_exact;
use patstat_core::count::{count_by_dp, count_by_subsets, count_in_slice};
use patstat_core::extremal::{
    delta_profile, max_occurrences, sample_mean_occurrences, DEFAULT_BUDGET,
};
use patstat_core::{
    count_occurrences, density, LayeredShape, PatternSet, Permutation, Restriction, Space, Word, WordPattern,
};

fn word_strategy(k: u32, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(1..=k, 1..=max_len).prop_map(move |v| Word::with_alphabet(v, k).unwrap())
}

fn perm_strategy(max_len: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_len)
        .prop_flat_map(|n| Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|v| Permutation::new(v).unwrap())
}

fn pattern_strategy(m: usize, l: u32) -> impl Strategy<Value = WordPattern> {
    prop::collection::vec(1..=l, m).prop_filter_map("surjective", |v| WordPattern::new(v).ok())
}

fn nu(p: &WordPattern, w: &Word) -> u64 {
    count_in_slice(&PatternSet::single(p.clone()), w.letters())
}

proptest! {
    #[test]
    fn reverse_and_complement_equivariance(p in pattern_strategy(3, 2), w in word_strategy(3, 8)) {
        prop_assert_eq!(nu(&p, &w), nu(&p.reverse(), &w.reverse()));
        prop_assert_eq!(nu(&p, &w), nu(&p.complement(), &w.complement()));
    }

    #[test]
    fn inverse_equivariance(p in perm_strategy(4), t in perm_strategy(8)) {
        let (pp, tw) = (p.to_pattern(), Word::from(&t));
        let (pi, ti) = (p.inverse().to_pattern(), Word::from(&t.inverse()));
        prop_assert_eq!(nu(&pp, &tw), nu(&pi, &ti));
    }

    #[test]
    fn set_count_is_sum_of_single_counts(w in word_strategy(3, 9)) {
        let set: PatternSet = "112;121;211;123".parse().unwrap();
        let total: u64 = set.patterns().iter().map(|p| nu(p, &w)).sum();
        prop_assert_eq!(count_in_slice(&set, w.letters()), total);
    }

    #[test]
    fn deletion_identity(w in word_strategy(3, 10)) {
        let set: PatternSet = "112;122".parse().unwrap();
        prop_assume!(w.len() > 3);
        let n1 = w.len() as u64;
        let mut sum = BigRational::from_integer(0.into());
        for i in 0..w.len() {
            let mut letters = w.letters().to_vec();
            letters.remove(i);
            sum += density(&set, &Word::with_alphabet(letters, w.alphabet()).unwrap()).unwrap();
        }
        let whole = density(&set, &w).unwrap() * BigRational::from_integer(n1.into());
        prop_assert_eq!(sum, whole);
    }

    #[test]
    fn dp_agrees_with_subsets(p in pattern_strategy(4, 3), w in word_strategy(4, 14)) {
        prop_assume!(w.len() >= 4);
        let set = PatternSet::single(p);
        prop_assert_eq!(count_by_dp(&set, &w), count_by_subsets(&set, &w).unwrap());
    }

    #[test]
    fn layered_round_trip(layers in prop::collection::vec(1usize..4, 1..6)) {
        let shape = LayeredShape::new(layers).unwrap();
        prop_assert_eq!(shape.realize().decompose_layers(), Some(shape.clone()));
        let shown = shape.to_string();
        prop_assert_eq!(shown.parse::<LayeredShape>().unwrap(), shape);
    }

    #[test]
    fn sampling_is_reproducible(seed in any::<u64>()) {
        let p: Permutation = "12".parse().unwrap();
        prop_assert_eq!(
            sample_mean_occurrences(&p, 5, 50, seed).unwrap(),
            sample_mean_occurrences(&p, 5, 50, seed).unwrap()
        );
    }
}

#[test]
fn layered_permutations_decompose() {
    for n in 1..=7 {
        for p in permutations(n) {
            let p = Permutation::new(p).unwrap();
            if let Some(shape) = p.decompose_layers() {
                assert_eq!(shape.realize(), p);
            }
        }
    }
}

#[test]
fn adjacent_swaps_preserve_triple_count() {
    let set: PatternSet = "112;121;211".parse().unwrap();
    let mut w = [1u32; 6];
    loop {
        let base = count_in_slice(&set, &w);
        for i in 0..5 {
            if w[i] != w[i + 1] {
                let mut s = w;
                s.swap(i, i + 1);
                assert_eq!(count_in_slice(&set, &s), base, "{w:?} at {i}");
            }
        }
        match w.iter().rposition(|&v| v < 3) {
            Some(i) => {
                w[i] += 1;
                w[i + 1..].iter_mut().for_each(|v| *v = 1);
            }
            None => break,
        }
    }
}

#[test]
fn weakly_increasing_words_match_layered_permutations() {
    let p112: PatternSet = "112".parse().unwrap();
    let p122: PatternSet = "122".parse().unwrap();
    let p213: PatternSet = "213".parse().unwrap();
    let p132: PatternSet = "132".parse().unwrap();
    for n in 1..=10 {
        for parts in compositions(n) {
            let letters: Vec<u32> = parts
                .iter()
                .enumerate()
                .flat_map(|(i, &s)| std::iter::repeat_n(i as u32 + 1, s))
                .collect();
            let layered = LayeredShape::new(parts.clone()).unwrap().realize();
            assert_eq!(count_in_slice(&p112, &letters), count_in_slice(&p213, layered.entries()));
            assert_eq!(count_in_slice(&p122, &letters), count_in_slice(&p132, layered.entries()));
        }
    }
}

#[test]
fn delta_monotone_in_n_and_k() {
    let set: PatternSet = "112;122".parse().unwrap();
    let mut by_k = Vec::new();
    for k in 1..=3u32 {
        // delta_profile itself errors if δ increases with n.
        let profile = delta_profile(&set, Space::Words { k }, 3..=8, Restriction::None, DEFAULT_BUDGET).unwrap();
        by_k.push(profile);
    }
    for pair in by_k.windows(2) {
        for ((_, a), (_, b)) in pair[0].iter().zip(&pair[1]) {
            assert!(a <= b);
        }
    }
}

#[test]
fn restricted_searches_agree_with_full_search() {
    let set: PatternSet = "112;122".parse().unwrap();
    for k in 1..=3u32 {
        for n in 3..=8 {
            let full = max_occurrences(&set, Space::Words { k }, n, Restriction::None, DEFAULT_BUDGET).unwrap();
            let inc = max_occurrences(&set, Space::Words { k }, n, Restriction::WeaklyIncreasing, DEFAULT_BUDGET).unwrap();
            assert_eq!(full.mu, inc.mu, "k={k}, n={n}");
        }
    }
    let layered: PatternSet = "213;132".parse().unwrap();
    for n in 3..=7 {
        let full = max_occurrences(&layered, Space::Permutations, n, Restriction::None, DEFAULT_BUDGET).unwrap();
        let lay = max_occurrences(&layered, Space::Permutations, n, Restriction::Layered, DEFAULT_BUDGET).unwrap();
        assert_eq!(full.mu, lay.mu, "n={n}");
    }
}

#[test]
fn witnesses_reverify() {
    let set: PatternSet = "112;122".parse().unwrap();
    let r = max_occurrences(&set, Space::Words { k: 3 }, 7, Restriction::None, DEFAULT_BUDGET).unwrap();
    assert!(!r.witnesses.is_empty());
    for w in &r.witnesses {
        assert_eq!(count_occurrences(&set, w).unwrap(), r.mu);
    }
    let mut sorted = r.witnesses.clone();
    sorted.sort_by(|a, b| a.letters().cmp(b.letters()));
    assert_eq!(sorted, r.witnesses);
}

#[test]
fn sample_mean_within_five_standard_errors() {
    for (p, n) in [("12", 3usize), ("123", 3), ("132", 6), ("2413", 7)] {
        let p: Permutation = p.parse().unwrap();
        let samples = 20_000;
        let (mean, var) = sample_mean_occurrences(&p, n, samples, 11).unwrap();
        let exact = rational_to_f64(&mean_exact(&p, n));
        let se = (var / samples as f64).sqrt().max(1e-12);
        assert!((mean - exact).abs() <= 5.0 * se, "{p}: {mean} vs {exact} (se {se})");
    }
}
