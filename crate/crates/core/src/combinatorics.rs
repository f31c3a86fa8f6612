//! Exact counting helpers and the lexicographic enumerators shared by the
//! search and moment modules.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `None` on overflow.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc.checked_mul(n as u128 - i)? / (i + 1);
    }
    Some(acc)
}

pub fn multinomial(parts: &[u64]) -> BigUint {
    let mut total = 0u64;
    let mut acc = BigUint::one();
    for &p in parts {
        total += p;
        acc *= binomial(total, p);
    }
    acc
}

/// Stirling number of the second kind via the triangular recurrence.
pub fn stirling2(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let (n, k) = (n as usize, k as usize);
    let mut row = vec![BigUint::zero(); k + 1];
    row[0] = BigUint::one();
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = &row[j] * j + &row[j - 1];
        }
        row[0] = BigUint::zero();
    }
    row[k].clone()
}

pub fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn pow_u(base: u64, exp: u64) -> BigUint {
    BigUint::from(base).pow(exp as u32)
}

/// Rearranges `items` into the next permutation in lexicographic order.
/// Returns `false` (leaving `items` sorted ascending) after the last one.
pub fn next_permutation<T: Ord>(items: &mut [T]) -> bool {
    let n = items.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && items[i - 1] >= items[i] {
        i -= 1;
    }
    if i == 0 {
        items.reverse();
        return false;
    }
    let mut j = n - 1;
    while items[j] <= items[i - 1] {
        j -= 1;
    }
    items.swap(i - 1, j);
    items[i..].reverse();
    true
}

/// Advances a strictly increasing index tuple drawn from `0..n`.
pub fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
pub fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        if !next_combination(&mut idx, n) {
            break;
        }
    }
}

/// All permutations of `1..=n` in lexicographic order.
pub fn permutations(n: usize) -> impl Iterator<Item = Vec<u32>> {
    let mut cur: Option<Vec<u32>> = Some((1..=n as u32).collect());
    std::iter::from_fn(move || {
        let out = cur.take()?;
        let mut next = out.clone();
        if next_permutation(&mut next) {
            cur = Some(next);
        }
        Some(out)
    })
}

/// Distinct-value prefixes of length `min(depth, n)` over `1..=n`, in
/// lexicographic order; used to split `S_n` into parallel blocks.
pub fn permutation_prefixes(n: usize, depth: usize) -> Vec<Vec<u32>> {
    let mut prefixes: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..depth.min(n) {
        prefixes = prefixes
            .into_iter()
            .flat_map(|pre| {
                (1..=n as u32)
                    .filter(|v| !pre.contains(v))
                    .map(|v| {
                        let mut next = pre.clone();
                        next.push(v);
                        next
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    prefixes
}

/// Calls `f` on every permutation of `1..=n` starting with `prefix`, in
/// lexicographic order.
pub fn for_each_with_prefix(prefix: &[u32], n: usize, mut f: impl FnMut(&[u32])) {
    let mut perm = prefix.to_vec();
    perm.extend((1..=n as u32).filter(|v| !prefix.contains(v)));
    let depth = prefix.len();
    loop {
        f(&perm);
        if !next_permutation(&mut perm[depth..]) {
            break;
        }
    }
}

/// Compositions of `n` (ordered sequences of positive parts) in
/// lexicographic order of the part sequence, largest first part last.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    fn go(rem: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for p in 1..=rem {
            cur.push(p);
            go(rem - p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(n, &mut Vec::new(), &mut out);
    }
    out
}

/// Weakly increasing words of length `n` over `1..=k`, lexicographic.
pub fn weakly_increasing_words(k: u32, n: usize) -> Vec<Vec<u32>> {
    fn go(k: u32, n: usize, lo: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in lo..=k {
            cur.push(v);
            go(k, n, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        go(k, n, 1, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_agree_with_pascal() {
        for n in 0..30u64 {
            for k in 0..=n {
                let b = binomial(n, k);
                assert_eq!(BigUint::from(binomial_u128(n, k).unwrap()), b);
                if n > 0 && k > 0 && k < n {
                    assert_eq!(b, binomial(n - 1, k - 1) + binomial(n - 1, k));
                }
            }
        }
        assert_eq!(binomial(3, 5), BigUint::zero());
    }

    #[test]
    fn multinomial_and_stirling() {
        assert_eq!(multinomial(&[2, 2]), BigUint::from(6u32));
        assert_eq!(multinomial(&[2, 1, 1]), BigUint::from(12u32));
        assert_eq!(stirling2(3, 2), BigUint::from(3u32));
        assert_eq!(stirling2(5, 3), BigUint::from(25u32));
        assert_eq!(stirling2(4, 4), BigUint::one());
        assert_eq!(stirling2(4, 0), BigUint::zero());
    }

    #[test]
    fn enumerators_have_expected_sizes() {
        assert_eq!(permutations(5).count(), 120);
        let perms: Vec<_> = permutations(3).collect();
        assert_eq!(perms[0], vec![1, 2, 3]);
        assert_eq!(perms[5], vec![3, 2, 1]);
        let mut c = 0;
        for_each_combination(7, 3, |_| c += 1);
        assert_eq!(c, 35);
        assert_eq!(compositions(5).len(), 16);
        assert_eq!(weakly_increasing_words(3, 4).len(), 15);
    }
}
