//! Exact first and second moments of occurrence counts in uniformly random
//! permutations and words.
//!
//! The leading coefficient of `Var(X_π)` (and of covariances) is
//! `c = Δ / ((2m−1)!)²` where `Δ = Σ_{i,j} [i,j]_m [π₁(i),π₂(j)]_m − C(2m−1,m−1)²`
//! and `[i,j]_m = C(i+j−2, i−1)·C(2m−i−j, m−i)`. Everything here is exact; the
//! brute-force oracles ([`dual_embedding_count`], [`second_moment_exact`],
//! [`mean_enumerated`]) recount the same quantities from first principles.

use std::collections::{BTreeSet, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::combinatorics::{
    binomial, binomial_u128, factorial, for_each_combination, for_each_with_prefix, permutation_prefixes,
    stirling2,
};
use crate::count::{count_in_slice, order_type_histogram};
use crate::error::{Error, Result};
use crate::pattern::{order_key, OrderKey, PatternSet, Permutation, WordPattern, MAX_PATTERN_LEN};

/// Enumeration limits. Each bound is a size whose factorial is enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest `2m−ℓ` for [`dual_embedding_count`].
    pub oracle_size: usize,
    /// Largest `n` for enumerations over `S_n`.
    pub exact_n: usize,
    /// Largest `m` for sweeps over `S_m`.
    pub sweep_m: usize,
    /// Largest `m` for [`pair_symmetry_classes`].
    pub class_m: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            oracle_size: 9,
            exact_n: 9,
            sweep_m: 9,
            class_m: 5,
        }
    }
}

fn check_limit(size: usize, limit: usize) -> Result<()> {
    if size > limit {
        let fact = |n: usize| factorial(n as u64).to_u128().unwrap_or(u128::MAX);
        return Err(Error::BudgetExceeded {
            budget: fact(limit),
            space: fact(size),
        });
    }
    Ok(())
}

/// `[i,j]_m`.
pub fn bracket(i: usize, j: usize, m: usize) -> Result<BigUint> {
    for idx in [i, j] {
        if idx == 0 || idx > m {
            return Err(Error::IndexOutOfRange { index: idx, len: m });
        }
    }
    let (i, j, m) = (i as u64, j as u64, m as u64);
    Ok(binomial(i + j - 2, i - 1) * binomial(2 * m - i - j, m - i))
}

/// Row-major `[i,j]_m` table for the fast paths (fits `u128` for `m ≤ 16`).
fn bracket_table(m: usize) -> Vec<u128> {
    let mut t = Vec::with_capacity(m * m);
    for i in 1..=m as u64 {
        for j in 1..=m as u64 {
            let m = m as u64;
            let v = binomial_u128(i + j - 2, i - 1).unwrap() * binomial_u128(2 * m - i - j, m - i).unwrap();
            t.push(v);
        }
    }
    t
}

/// The matrix `A_m = ([i,j]_m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketMatrix {
    m: usize,
    entries: Vec<Vec<BigUint>>,
}

impl BracketMatrix {
    /// Builds `A_m` and checks symmetry, centro-symmetry, the row sums
    /// `C(2m−1,m−1)` and the trace `Σ_i C(2m−1,i−1)`.
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Hypothesis("bracket matrix needs m ≥ 1".into()));
        }
        let entries: Vec<Vec<BigUint>> = (1..=m)
            .map(|i| (1..=m).map(|j| bracket(i, j, m)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let a = BracketMatrix { m, entries };
        let row = binomial(2 * m as u64 - 1, m as u64 - 1);
        for i in 0..m {
            for j in 0..m {
                if a.entries[i][j] != a.entries[j][i] || a.entries[i][j] != a.entries[m - 1 - i][m - 1 - j] {
                    return Err(Error::Invariant(format!("A_{m} not (centro-)symmetric at ({}, {})", i + 1, j + 1)));
                }
            }
            if a.row_sum(i + 1) != row {
                return Err(Error::Invariant(format!("row {} of A_{m} does not sum to {row}", i + 1)));
            }
        }
        if a.trace() != a.eigenvalues().into_iter().sum::<BigUint>() {
            return Err(Error::Invariant(format!("trace of A_{m} differs from the eigenvalue sum")));
        }
        Ok(a)
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &[Vec<BigUint>] {
        &self.entries
    }

    /// Entry `(i, j)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[i - 1][j - 1]
    }

    /// Sum of row `i`, 1-based.
    pub fn row_sum(&self, i: usize) -> BigUint {
        self.entries[i - 1].iter().sum()
    }

    pub fn trace(&self) -> BigUint {
        (0..self.m).map(|i| &self.entries[i][i]).sum()
    }

    /// The eigenvalues `C(2m−1, i−1)`, `i = 1..m`, in increasing order.
    pub fn eigenvalues(&self) -> Vec<BigUint> {
        (0..self.m as u64).map(|i| binomial(2 * self.m as u64 - 1, i)).collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.m;
        let mut a: Vec<Vec<BigInt>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(|v| BigInt::from(v.clone())).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n.saturating_sub(1) {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }
}

pub fn bracket_matrix(m: usize) -> Result<BracketMatrix> {
    BracketMatrix::new(m)
}

fn check_same_shape(p1: &WordPattern, p2: &WordPattern) -> Result<()> {
    if p1.len() != p2.len() || p1.alphabet() != p2.alphabet() {
        return Err(Error::Mismatch(format!(
            "patterns {p1} and {p2} differ in length or alphabet"
        )));
    }
    Ok(())
}

#[inline]
fn trace_fast(am: &[u128], al: &[u128], m: usize, l: usize, p1: &[u32], p2: &[u32]) -> u128 {
    let mut s = 0u128;
    for i in 0..m {
        let row = &am[i * m..(i + 1) * m];
        let vrow = &al[(p1[i] as usize - 1) * l..p1[i] as usize * l];
        for j in 0..m {
            s += row[j] * vrow[p2[j] as usize - 1];
        }
    }
    s
}

/// `Σ_{i,j} [i,j]_m · [π₁(i), π₂(j)]_l` for two patterns of length `m` over
/// `[l]`.
pub fn trace_sum(p1: &WordPattern, p2: &WordPattern) -> Result<BigInt> {
    check_same_shape(p1, p2)?;
    let (m, l) = (p1.len(), p2.alphabet() as usize);
    let s = trace_fast(&bracket_table(m), &bracket_table(l), m, l, p1.letters(), p2.letters());
    Ok(BigInt::from(s))
}

/// `C(2m−1, m−1)²`.
pub fn permutation_baseline(m: usize) -> BigInt {
    BigInt::from(binomial(2 * m as u64 - 1, m as u64 - 1).pow(2))
}

/// `(2m−1)!(2l−1)! / ((m−1)!² (l!)²)`; not an integer in general.
pub fn word_baseline(m: usize, l: usize) -> BigRational {
    let (m, l) = (m as u64, l as u64);
    let num = factorial(2 * m - 1) * factorial(2 * l - 1);
    let den = factorial(m - 1).pow(2) * factorial(l).pow(2);
    BigRational::new(num.into(), den.into())
}

/// Exact leading-term data for a pattern or pattern pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentReport {
    pub m: usize,
    pub l: usize,
    pub trace_value: BigInt,
    pub baseline: BigRational,
    pub delta_stat: BigRational,
    pub denominator: BigInt,
    pub leading_coeff: BigRational,
}

impl MomentReport {
    /// `√c`, the coefficient of `n^{m−1/2}` in the standard deviation.
    pub fn std_dev_leading(&self) -> f64 {
        self.leading_coeff.to_f64().unwrap_or(f64::NAN).sqrt()
    }
}

fn perm_pair(p1: &Permutation, p2: &Permutation) -> Result<usize> {
    let m = p1.len();
    if m != p2.len() {
        return Err(Error::Mismatch(format!("patterns {p1} and {p2} have different lengths")));
    }
    if m < 2 {
        return Err(Error::Hypothesis("variance formula needs m > 1".into()));
    }
    Ok(m)
}

/// Report for the permutation covariance (variance when `p1 == p2`).
pub fn moment_report(p1: &Permutation, p2: &Permutation) -> Result<MomentReport> {
    let m = perm_pair(p1, p2)?;
    let trace_value = trace_sum(&p1.to_pattern(), &p2.to_pattern())?;
    let baseline = permutation_baseline(m);
    let delta = &trace_value - &baseline;
    let denominator = BigInt::from(factorial(2 * m as u64 - 1).pow(2));
    Ok(MomentReport {
        m,
        l: m,
        leading_coeff: BigRational::new(delta.clone(), denominator.clone()),
        trace_value,
        baseline: BigRational::from_integer(baseline),
        delta_stat: BigRational::from_integer(delta),
        denominator,
    })
}

/// `Δ(π) = ((2m−1)!)²·c(π)`; errors if it is not positive.
pub fn delta_stat(p: &Permutation) -> Result<BigInt> {
    let r = moment_report(p, p)?;
    let delta = r.delta_stat.to_integer();
    if !delta.is_positive() {
        return Err(Error::Invariant(format!("Δ({p}) = {delta} is not positive")));
    }
    Ok(delta)
}

pub fn variance_leading_coeff(p: &Permutation) -> Result<BigRational> {
    delta_stat(p)?;
    Ok(moment_report(p, p)?.leading_coeff)
}

pub fn covariance_leading_coeff(p1: &Permutation, p2: &Permutation) -> Result<BigRational> {
    Ok(moment_report(p1, p2)?.leading_coeff)
}

/// Report for word patterns of length `m` over `[l]`, `1 < l ≤ m`.
pub fn word_moment_report(p1: &WordPattern, p2: &WordPattern) -> Result<MomentReport> {
    check_same_shape(p1, p2)?;
    let (m, l) = (p1.len(), p1.alphabet() as usize);
    if l < 2 || l > m {
        return Err(Error::Hypothesis(format!("word formula needs 1 < l ≤ m, got l = {l}, m = {m}")));
    }
    let trace_value = trace_sum(p1, p2)?;
    let baseline = word_baseline(m, l);
    let delta = BigRational::from_integer(trace_value.clone()) - &baseline;
    let denominator = BigInt::from(factorial(2 * m as u64 - 1) * factorial(2 * l as u64 - 1));
    let leading_coeff = &delta / BigRational::from_integer(denominator.clone());
    if l == m {
        let (q1, q2) = (p1.as_permutation(), p2.as_permutation());
        let perm = moment_report(q1.as_ref().unwrap(), q2.as_ref().unwrap())?;
        if perm.leading_coeff != leading_coeff {
            return Err(Error::Invariant("word formula with l = m disagrees with the permutation formula".into()));
        }
    }
    Ok(MomentReport {
        m,
        l,
        trace_value,
        baseline,
        delta_stat: delta,
        denominator,
        leading_coeff,
    })
}

pub fn word_leading_coeff(p1: &WordPattern, p2: &WordPattern) -> Result<BigRational> {
    Ok(word_moment_report(p1, p2)?.leading_coeff)
}

/// `C(2m−1, m)·C(2l−1, l)`, the bound the word trace exceeds for `l < m`.
pub fn word_weak_bound(m: usize, l: usize) -> BigInt {
    BigInt::from(binomial(2 * m as u64 - 1, m as u64) * binomial(2 * l as u64 - 1, l as u64))
}

/// `l!·S(m, l)`.
pub fn count_word_patterns(m: usize, l: usize) -> BigUint {
    factorial(l as u64) * stirling2(m as u64, l as u64)
}

/// Surjective patterns `[m] → [l]`, lexicographic.
pub fn surjective_patterns(m: usize, l: usize) -> Vec<WordPattern> {
    let mut out = Vec::new();
    if l == 0 || l > m || m > MAX_PATTERN_LEN {
        return out;
    }
    let mut w = vec![1u32; m];
    loop {
        let mut seen = vec![false; l];
        w.iter().for_each(|&v| seen[v as usize - 1] = true);
        if seen.iter().all(|&s| s) {
            out.push(WordPattern::new(w.clone()).expect("surjective word"));
        }
        match w.iter().rposition(|&v| (v as usize) < l) {
            Some(i) => {
                w[i] += 1;
                w[i + 1..].iter_mut().for_each(|v| *v = 1);
            }
            None => break,
        }
    }
    out
}

/// Ordered pairs `(I₁, I₂)` of `m`-subsets of `[2m−ℓ]` with `|I₁∩I₂| = ℓ`,
/// summed over `ρ ∈ S_{2m−ℓ}`, such that `ρ|I₁ ≅ π₁` and `ρ|I₂ ≅ π₂`.
pub fn dual_embedding_count(p1: &Permutation, p2: &Permutation, ell: usize) -> Result<BigUint> {
    dual_embedding_count_with(p1, p2, ell, &Limits::default())
}

pub fn dual_embedding_count_with(p1: &Permutation, p2: &Permutation, ell: usize, limits: &Limits) -> Result<BigUint> {
    let m = p1.len();
    if m != p2.len() {
        return Err(Error::Mismatch(format!("patterns {p1} and {p2} have different lengths")));
    }
    if ell > m {
        return Err(Error::Hypothesis(format!("overlap {ell} exceeds pattern length {m}")));
    }
    let size = 2 * m - ell;
    check_limit(size, limits.oracle_size)?;
    let (k1, k2) = (order_key(p1.entries()), order_key(p2.entries()));
    let total: u128 = permutation_prefixes(size, 2)
        .into_par_iter()
        .map(|pre| {
            let mut count = 0u128;
            let mut buf = [0u32; MAX_PATTERN_LEN];
            let mut inside = vec![false; size];
            let mut rest = Vec::with_capacity(size);
            let mut second = Vec::with_capacity(m);
            for_each_with_prefix(&pre, size, |rho| {
                for_each_combination(size, m, |i1| {
                    for (slot, &i) in buf.iter_mut().zip(i1) {
                        *slot = rho[i];
                    }
                    if order_key(&buf[..m]) != k1 {
                        return;
                    }
                    inside.iter_mut().for_each(|b| *b = false);
                    i1.iter().for_each(|&i| inside[i] = true);
                    rest.clear();
                    rest.extend((0..size).filter(|&i| !inside[i]));
                    for_each_combination(m, ell, |shared| {
                        second.clear();
                        second.extend(rest.iter().copied());
                        second.extend(shared.iter().map(|&s| i1[s]));
                        second.sort_unstable();
                        for (slot, &i) in buf.iter_mut().zip(&second) {
                            *slot = rho[i];
                        }
                        if order_key(&buf[..m]) == k2 {
                            count += 1;
                        }
                    });
                });
            });
            count
        })
        .sum();
    Ok(BigUint::from(total))
}

/// `(Σ_σ ν, Σ_σ ν²)` over `σ ∈ S_n`.
fn power_sums(p: &Permutation, n: usize) -> (u128, u128) {
    let set = PatternSet::single(p.to_pattern());
    permutation_prefixes(n, 2)
        .into_par_iter()
        .map(|pre| {
            let (mut s1, mut s2) = (0u128, 0u128);
            for_each_with_prefix(&pre, n, |sigma| {
                let nu = count_in_slice(&set, sigma) as u128;
                s1 += nu;
                s2 += nu * nu;
            });
            (s1, s2)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}

fn over_n_factorial(total: u128, n: usize) -> BigRational {
    BigRational::new(BigInt::from(total), BigInt::from(factorial(n as u64)))
}

/// `E[X_π²]` over uniform `σ ∈ S_n`, by enumeration.
pub fn second_moment_exact(p: &Permutation, n: usize) -> Result<BigRational> {
    second_moment_exact_with(p, n, &Limits::default())
}

pub fn second_moment_exact_with(p: &Permutation, n: usize, limits: &Limits) -> Result<BigRational> {
    check_limit(n, limits.exact_n)?;
    Ok(over_n_factorial(power_sums(p, n).1, n))
}

/// `E[X_π²] = Σ_ℓ dual(π,π,ℓ)/(2m−ℓ)! · C(n, 2m−ℓ)`.
pub fn second_moment_from_embeddings(p: &Permutation, n: usize) -> Result<BigRational> {
    second_moment_from_embeddings_with(p, n, &Limits::default())
}

pub fn second_moment_from_embeddings_with(p: &Permutation, n: usize, limits: &Limits) -> Result<BigRational> {
    let m = p.len();
    let mut acc = BigRational::zero();
    for ell in 0..=m {
        let size = 2 * m - ell;
        let dual = dual_embedding_count_with(p, p, ell, limits)?;
        acc += BigRational::new(
            BigInt::from(dual * binomial(n as u64, size as u64)),
            BigInt::from(factorial(size as u64)),
        );
    }
    Ok(acc)
}

/// `E[X_π] = C(n, m)/m!`.
pub fn mean_exact(p: &Permutation, n: usize) -> BigRational {
    let m = p.len() as u64;
    BigRational::new(binomial(n as u64, m).into(), factorial(m).into())
}

/// `E[X_π]` by enumeration over `S_n`.
pub fn mean_enumerated(p: &Permutation, n: usize) -> Result<BigRational> {
    check_limit(n, Limits::default().exact_n)?;
    Ok(over_n_factorial(power_sums(p, n).0, n))
}

/// Exact `Var(X_π)` over `S_n`, by enumeration.
pub fn variance_exact(p: &Permutation, n: usize) -> Result<BigRational> {
    check_limit(n, Limits::default().exact_n)?;
    let (s1, s2) = power_sums(p, n);
    let mean = over_n_factorial(s1, n);
    Ok(over_n_factorial(s2, n) - &mean * &mean)
}

/// Total occurrences of every order type of length `m` summed over `S_n`.
pub fn occurrence_totals(n: usize, m: usize) -> Result<HashMap<OrderKey, u128>> {
    check_limit(n, Limits::default().exact_n)?;
    let merge = |mut a: HashMap<OrderKey, u128>, b: HashMap<OrderKey, u128>| {
        for (k, v) in b {
            *a.entry(k).or_insert(0) += v;
        }
        a
    };
    Ok(permutation_prefixes(n, 2)
        .into_par_iter()
        .map(|pre| {
            let mut totals = HashMap::new();
            for_each_with_prefix(&pre, n, |sigma| {
                for (k, v) in order_type_histogram(sigma, m) {
                    *totals.entry(k).or_insert(0) += v as u128;
                }
            });
            totals
        })
        .reduce(HashMap::new, merge))
}

/// `Δ` for every permutation of `S_m` folded in lexicographic order within
/// prefix blocks; `merge` must be associative over block results taken in order.
fn sweep_deltas<T: Send>(
    m: usize,
    init: impl Fn() -> T + Sync,
    step: impl Fn(&mut T, &[u32], i128) + Sync,
    merge: impl Fn(T, T) -> T,
) -> T {
    let table = bracket_table(m);
    let baseline = binomial_u128(2 * m as u64 - 1, m as u64 - 1).unwrap().pow(2) as i128;
    let parts: Vec<T> = permutation_prefixes(m, 2)
        .into_par_iter()
        .map(|pre| {
            let mut acc = init();
            for_each_with_prefix(&pre, m, |p| {
                let delta = trace_fast(&table, &table, m, m, p, p) as i128 - baseline;
                step(&mut acc, p, delta);
            });
            acc
        })
        .collect();
    parts.into_iter().reduce(merge).unwrap_or_else(init)
}

fn check_sweep(m: usize, limits: &Limits) -> Result<()> {
    if m < 2 {
        return Err(Error::Hypothesis("Δ needs m > 1".into()));
    }
    check_limit(m, limits.sweep_m)
}

/// Extreme value of `Δ` over `S_m` with all permutations attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaExtreme {
    pub value: BigInt,
    /// Lexicographic order; the first is the representative.
    pub attained_by: Vec<Permutation>,
}

impl DeltaExtreme {
    pub fn representative(&self) -> &Permutation {
        &self.attained_by[0]
    }
}

fn extreme(m: usize, want_min: bool) -> DeltaExtreme {
    type Acc = Option<(i128, Vec<Vec<u32>>)>;
    let better = move |a: i128, b: i128| if want_min { a < b } else { a > b };
    let best: Acc = sweep_deltas(
        m,
        || None,
        |acc: &mut Acc, p, d| match acc {
            Some((v, ps)) if *v == d => ps.push(p.to_vec()),
            Some((v, _)) if !better(d, *v) => {}
            _ => *acc = Some((d, vec![p.to_vec()])),
        },
        |a, b| match (a, b) {
            (None, x) | (x, None) => x,
            (Some((va, mut pa)), Some((vb, pb))) => {
                if va == vb {
                    pa.extend(pb);
                    Some((va, pa))
                } else if better(vb, va) {
                    Some((vb, pb))
                } else {
                    Some((va, pa))
                }
            }
        },
    );
    let (value, perms) = best.expect("S_m is nonempty");
    DeltaExtreme {
        value: BigInt::from(value),
        attained_by: perms
            .into_iter()
            .map(|p| Permutation::new(p).expect("enumerated permutation"))
            .collect(),
    }
}

/// Minimum of `Δ` over `S_m` and its minimizers.
pub fn min_delta_search(m: usize) -> Result<DeltaExtreme> {
    min_delta_search_with(m, &Limits::default())
}

pub fn min_delta_search_with(m: usize, limits: &Limits) -> Result<DeltaExtreme> {
    check_sweep(m, limits)?;
    Ok(extreme(m, true))
}

/// Maximum of `Δ` over `S_m`; errors unless the maximizers are exactly the
/// identity and its reverse.
pub fn max_delta_check(m: usize) -> Result<DeltaExtreme> {
    max_delta_check_with(m, &Limits::default())
}

pub fn max_delta_check_with(m: usize, limits: &Limits) -> Result<DeltaExtreme> {
    check_sweep(m, limits)?;
    let best = extreme(m, false);
    let id = Permutation::identity(m);
    let expected: BTreeSet<Permutation> = [id.clone(), id.reverse()].into_iter().collect();
    let got: BTreeSet<Permutation> = best.attained_by.iter().cloned().collect();
    if got != expected {
        return Err(Error::Invariant(format!(
            "Δ over S_{m} is maximized outside the class of the identity"
        )));
    }
    Ok(best)
}

/// `(π, Δ(π))` for every `π ∈ S_m`, lexicographic.
pub fn delta_values(m: usize) -> Result<Vec<(Permutation, BigInt)>> {
    delta_values_with(m, &Limits::default())
}

pub fn delta_values_with(m: usize, limits: &Limits) -> Result<Vec<(Permutation, BigInt)>> {
    check_sweep(m, limits)?;
    let all = sweep_deltas(
        m,
        Vec::new,
        |acc: &mut Vec<(Vec<u32>, i128)>, p, d| acc.push((p.to_vec(), d)),
        |mut a, b| {
            a.extend(b);
            a
        },
    );
    Ok(all
        .into_iter()
        .map(|(p, d)| (Permutation::new(p).expect("enumerated permutation"), BigInt::from(d)))
        .collect())
}

/// A symmetry class of `S_m` with its common `Δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaClass {
    /// Lexicographically smallest member.
    pub representative: Permutation,
    pub size: usize,
    pub delta: BigInt,
}

/// Symmetry classes of `S_m` under reverse, complement and inverse, ordered by
/// representative. Errors if `Δ` is not constant on a class.
pub fn delta_classes(m: usize) -> Result<Vec<DeltaClass>> {
    delta_classes_with(m, &Limits::default())
}

pub fn delta_classes_with(m: usize, limits: &Limits) -> Result<Vec<DeltaClass>> {
    let values: HashMap<Permutation, BigInt> = delta_values_with(m, limits)?.into_iter().collect();
    let mut reps: BTreeSet<Permutation> = BTreeSet::new();
    let mut out = Vec::new();
    let mut keys: Vec<&Permutation> = values.keys().collect();
    keys.sort();
    for p in keys {
        let class = p.symmetry_class();
        let rep = class.iter().next().expect("class contains p").clone();
        if !reps.insert(rep.clone()) {
            continue;
        }
        let delta = values[&rep].clone();
        if let Some(q) = class.iter().find(|q| values[*q] != delta) {
            return Err(Error::Invariant(format!("Δ({q}) differs from Δ({rep})")));
        }
        out.push(DeltaClass {
            representative: rep,
            size: class.len(),
            delta,
        });
    }
    Ok(out)
}

/// An orbit of unordered pattern pairs under simultaneous symmetries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairClass {
    /// Lexicographically smallest normalized pair.
    pub representative: (Permutation, Permutation),
    pub size: usize,
    pub coefficient: BigRational,
}

fn normalized(a: Permutation, b: Permutation) -> (Permutation, Permutation) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Orbits of unordered pairs from `S_m` under applying reverse, complement or
/// inverse to both members, ordered by representative. Errors if the
/// covariance coefficient is not constant on an orbit.
pub fn pair_symmetry_classes(m: usize) -> Result<Vec<PairClass>> {
    pair_symmetry_classes_with(m, &Limits::default())
}

pub fn pair_symmetry_classes_with(m: usize, limits: &Limits) -> Result<Vec<PairClass>> {
    if m < 2 {
        return Err(Error::Hypothesis("covariance formula needs m > 1".into()));
    }
    check_limit(m, limits.class_m)?;
    let perms: Vec<Permutation> = crate::combinatorics::permutations(m)
        .map(|p| Permutation::new(p).expect("enumerated permutation"))
        .collect();
    let mut seen: BTreeSet<(Permutation, Permutation)> = BTreeSet::new();
    let mut out = Vec::new();
    for (i, a) in perms.iter().enumerate() {
        for b in &perms[i..] {
            let start = (a.clone(), b.clone());
            if seen.contains(&start) {
                continue;
            }
            let mut orbit: BTreeSet<(Permutation, Permutation)> = BTreeSet::new();
            let mut frontier = vec![start.clone()];
            orbit.insert(start.clone());
            while let Some((x, y)) = frontier.pop() {
                for next in [
                    normalized(x.reverse(), y.reverse()),
                    normalized(x.complement(), y.complement()),
                    normalized(x.inverse(), y.inverse()),
                ] {
                    if orbit.insert(next.clone()) {
                        frontier.push(next);
                    }
                }
            }
            let coefficient = covariance_leading_coeff(&start.0, &start.1)?;
            for (x, y) in &orbit {
                if covariance_leading_coeff(x, y)? != coefficient {
                    return Err(Error::Invariant(format!(
                        "covariance coefficient not constant on the class of {{{}, {}}}",
                        start.0, start.1
                    )));
                }
            }
            seen.extend(orbit.iter().cloned());
            out.push(PairClass {
                representative: orbit.iter().next().expect("nonempty orbit").clone(),
                size: orbit.len(),
                coefficient,
            });
        }
    }
    out.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(out)
}
