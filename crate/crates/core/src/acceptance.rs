//! End-to-end acceptance criteria. Each check recomputes its quantities from
//! the public API and reports a single pass/fail line; tolerances and time
//! limits are fixed per criterion.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::combinatorics::{factorial, permutations, rational_to_f64};
use crate::count::count_in_slice;
use crate::error::Result;
use crate::extremal::{max_occurrences, Restriction, Space, DEFAULT_BUDGET};
use crate::layered::{
    cooccurrence_table, delta_s_mn, delta_s_mn_exact, optimize_simplex, s_mn_shapes, two_layer_density,
    upper_bound_peel, LayeredObjectiveSpec, DEFAULT_COV_PAIRS,
};
use crate::moments::{
    self, bracket, delta_classes, delta_values, dual_embedding_count, min_delta_search,
    occurrence_totals, pair_symmetry_classes, second_moment_exact, second_moment_from_embeddings,
    surjective_patterns, trace_sum, word_leading_coeff, word_weak_bound,
};
use crate::optimize::OptimizerConfig;
use crate::pattern::{order_key, LayeredShape, PatternSet, Permutation, WordPattern};

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {} ({:.2}s / {}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs(),
            self.detail
        )
    }
}

/// Runs `check`, which returns `(passed, detail)`, and folds the time limit
/// into the verdict. Errors count as failures.
fn timed(id: u8, name: &'static str, limit_secs: u64, check: impl FnOnce() -> Result<(bool, String)>) -> Outcome {
    let start = Instant::now();
    let result = check();
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(limit_secs);
    let (mut passed, mut detail) = match result {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    if elapsed > limit {
        passed = false;
        detail.push_str("; over time limit");
    }
    Outcome {
        id,
        name,
        passed,
        detail,
        elapsed,
        limit,
    }
}

fn perm(s: &str) -> Permutation {
    s.parse().expect("literal permutation")
}

fn all_perms(m: usize) -> Vec<Permutation> {
    permutations(m)
        .map(|p| Permutation::new(p).expect("enumerated permutation"))
        .collect()
}

/// Collects failures; passes when none were recorded.
#[derive(Default)]
struct Failures(Vec<String>);

impl Failures {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.0.push(what());
        }
    }

    fn verdict(self, summary: String) -> (bool, String) {
        if self.0.is_empty() {
            (true, summary)
        } else {
            let shown: Vec<&str> = self.0.iter().take(5).map(String::as_str).collect();
            let more = if self.0.len() > 5 { format!(" (+{} more)", self.0.len() - 5) } else { String::new() };
            (false, format!("{}{more}", shown.join("; ")))
        }
    }
}

pub const DELTA_TABLE: [(&str, i64); 5] = [("1234", 491), ("1243", 359), ("1432", 327), ("1342", 239), ("2413", 91)];

pub fn criterion_1() -> Outcome {
    timed(1, "delta table for S4", 1, || {
        let classes = delta_classes(4)?;
        let mut f = Failures::default();
        for (rep, want) in DELTA_TABLE {
            let got = classes.iter().find(|c| c.representative == perm(rep)).map(|c| c.delta.clone());
            f.check(got == Some(BigInt::from(want)), || {
                format!("Δ({rep}) = {} but table says {want}", got.map_or("?".into(), |g| g.to_string()))
            });
        }
        Ok(f.verdict("all five entries exact".into()))
    })
}

pub const PI_STAR: [&str; 7] = ["132", "2413", "25314", "254163", "3614725", "37145826", "385174926"];

pub fn criterion_2(slow: bool) -> Outcome {
    let top = if slow { 9 } else { 7 };
    timed(2, "least-delta representatives", if slow { 600 } else { 60 }, || {
        let mut f = Failures::default();
        let mut reps = Vec::new();
        for m in 3..=top {
            let found = min_delta_search(m)?;
            let expected = perm(PI_STAR[m - 3]);
            let class = found.representative().symmetry_class();
            f.check(class.contains(&expected), || {
                format!("m={m}: got {} (Δ={}), expected class of {expected}", found.representative(), found.value)
            });
            reps.push(format!("{}:{}", m, found.representative()));
        }
        Ok(f.verdict(format!("m=3..{top} match [{}]", reps.join(" "))))
    })
}

pub const COV_TABLE: [f64; 8] = [0.191, 0.576, 0.915, 0.138, 0.447, 0.799, 0.108, 0.365];

pub fn criterion_3() -> Outcome {
    timed(3, "co-occurrence table", 1, || {
        let rows = cooccurrence_table(&DEFAULT_COV_PAIRS)?;
        let mut f = Failures::default();
        for (row, want) in rows.iter().zip(COV_TABLE) {
            f.check((row.cov - want).abs() <= 0.0005, || {
                format!("cov({},{}) = {:.6} vs {want}", row.a, row.b, row.cov)
            });
        }
        Ok(f.verdict("eight entries within 0.0005".into()))
    })
}

pub fn criterion_4() -> Outcome {
    timed(4, "S(m,n) closed form vs optimizer", 60, || {
        let mut f = Failures::default();
        let config = OptimizerConfig {
            multistarts: 8,
            ..OptimizerConfig::default()
        };
        let mut worst_gap = 0.0f64;
        for m in 2..=5usize {
            for n in 2..=5usize {
                let closed = delta_s_mn(m as u64, n as u64)?.value;
                let spec = LayeredObjectiveSpec::new(s_mn_shapes(m, n))?;
                let opt = optimize_simplex(&spec, 10, &config)?.value;
                worst_gap = worst_gap.max((closed - opt).abs());
                f.check((closed - opt).abs() <= 2e-3, || {
                    format!("S({m},{n}): closed {closed:.6} vs optimizer {opt:.6}")
                });
                f.check(opt <= closed + 1e-9, || format!("S({m},{n}): optimizer {opt} exceeds closed {closed}"));
            }
        }
        for m in 3..=6u64 {
            for n in 2..=6u64 {
                let closed = rational_to_f64(&delta_s_mn_exact(m, n)?);
                let price = two_layer_density(m - 1, n);
                f.check((closed - price).abs() <= 1e-12, || {
                    format!("S({m},{n}) {closed} differs from [{},{n}] density {price}", m - 1)
                });
            }
        }
        Ok(f.verdict(format!("max gap {worst_gap:.2e}")))
    })
}

pub fn criterion_5() -> Outcome {
    timed(5, "trace sum equals dual-embedding oracle", 60, || {
        let mut f = Failures::default();
        let mut pairs: Vec<(Permutation, Permutation)> = Vec::new();
        let s3 = all_perms(3);
        for a in &s3 {
            for b in &s3 {
                pairs.push((a.clone(), b.clone()));
            }
        }
        pairs.extend(all_perms(4).into_iter().map(|p| (p.clone(), p)));
        for (a, b) in &pairs {
            let trace = trace_sum(&a.to_pattern(), &b.to_pattern())?;
            let oracle = BigInt::from(dual_embedding_count(a, b, 1)?);
            f.check(trace == oracle, || format!("({a},{b}): trace {trace} vs oracle {oracle}"));
        }
        Ok(f.verdict(format!("{} pairs agree", pairs.len())))
    })
}

pub fn criterion_6() -> Outcome {
    timed(6, "second-moment reconstruction", 30, || {
        let mut f = Failures::default();
        for p in all_perms(3) {
            for n in [6, 7] {
                let direct = second_moment_exact(&p, n)?;
                let rebuilt = second_moment_from_embeddings(&p, n)?;
                f.check(direct == rebuilt, || format!("{p}, n={n}: {direct} vs {rebuilt}"));
            }
        }
        Ok(f.verdict("S3 × {6,7} exact".into()))
    })
}

pub fn criterion_7() -> Outcome {
    timed(7, "mean identity", 60, || {
        let mut f = Failures::default();
        for m in [3usize, 4] {
            let perms = all_perms(m);
            for n in m..=8 {
                let totals = occurrence_totals(n, m)?;
                for p in &perms {
                    let total = totals.get(&order_key(p.entries())).copied().unwrap_or(0);
                    let mean = BigRational::new(BigInt::from(total), BigInt::from(factorial(n as u64)));
                    let want = moments::mean_exact(p, n);
                    f.check(mean == want, || format!("{p}, n={n}: {mean} vs {want}"));
                }
            }
        }
        Ok(f.verdict("S3 ∪ S4, n ≤ 8 exact".into()))
    })
}

pub fn criterion_8() -> Outcome {
    timed(8, "delta positivity and symmetry", 30, || {
        let mut f = Failures::default();
        for m in 2..=6 {
            for (p, d) in delta_values(m)? {
                f.check(d.is_positive(), || format!("Δ({p}) = {d}"));
            }
            // Errors if Δ is not constant on a class.
            delta_classes(m)?;
        }
        Ok(f.verdict("m = 2..6".into()))
    })
}

pub const S3_PAIR_ORDER: [(&str, &str); 7] = [
    ("123", "123"),
    ("132", "132"),
    ("123", "132"),
    ("132", "213"),
    ("132", "231"),
    ("123", "231"),
    ("123", "321"),
];

pub fn criterion_9() -> Outcome {
    timed(9, "S3 pair covariance classes", 1, || {
        let mut f = Failures::default();
        let mut classes = pair_symmetry_classes(3)?;
        classes.sort_by(|a, b| b.coefficient.cmp(&a.coefficient));
        f.check(classes.len() == 7, || format!("{} classes", classes.len()));
        for (i, (c, (a, b))) in classes.iter().zip(S3_PAIR_ORDER).enumerate() {
            let want = (perm(a), perm(b));
            f.check(c.representative == want, || {
                format!("position {}: {{{},{}}} vs {{{a},{b}}}", i + 1, c.representative.0, c.representative.1)
            });
            f.check(c.coefficient.is_positive() == (i < 3), || {
                format!("{{{a},{b}}} has coefficient {}", c.coefficient)
            });
        }
        let positive_mixed: Vec<String> = classes
            .iter()
            .filter(|c| c.representative.0 != c.representative.1 && c.coefficient.is_positive())
            .map(|c| format!("{{{},{}}}", c.representative.0, c.representative.1))
            .collect();
        f.check(positive_mixed == ["{123,132}"], || format!("positive mixed classes {positive_mixed:?}"));
        let order: Vec<String> = classes.iter().map(|c| c.coefficient.to_string()).collect();
        Ok(f.verdict(format!("coefficients {}", order.join(" > "))))
    })
}

/// `Σ_{i,j} [i,j]_m [π₁(i),π₂(j)]_l` straight from the bracket definition.
fn direct_trace(p1: &WordPattern, p2: &WordPattern) -> Result<BigUint> {
    let (m, l) = (p1.len(), p1.alphabet() as usize);
    let mut s = BigUint::zero();
    for i in 1..=m {
        for j in 1..=m {
            let (u, v) = (p1.letters()[i - 1] as usize, p2.letters()[j - 1] as usize);
            s += bracket(i, j, m)? * bracket(u, v, l)?;
        }
    }
    Ok(s)
}

pub fn criterion_10() -> Outcome {
    timed(10, "word-pattern coefficients", 30, || {
        let mut f = Failures::default();
        let p: WordPattern = "112".parse()?;
        let c = word_leading_coeff(&p, &p)?;
        let target = BigRational::new(7.into(), 720.into());
        f.check(c == target, || format!("c(112) = {c}"));
        // Oracle: trace from the definition, baseline and denominator from
        // factorials.
        let (m, l) = (3u64, 2u64);
        let trace = BigInt::from(direct_trace(&p, &p)?);
        let num = factorial(2 * m - 1) * factorial(2 * l - 1);
        let baseline = BigRational::new(
            BigInt::from(num.clone()),
            BigInt::from(factorial(m - 1) * factorial(m - 1) * factorial(l) * factorial(l)),
        );
        let oracle = (BigRational::from_integer(trace) - baseline) / BigRational::from_integer(BigInt::from(num));
        f.check(oracle == c, || format!("oracle {oracle} vs {c}"));
        let mut checked = 0;
        for m in 2..=5usize {
            for l in 1..m {
                let bound = word_weak_bound(m, l);
                for q in surjective_patterns(m, l) {
                    let t = BigInt::from(direct_trace(&q, &q)?);
                    f.check(t > bound, || format!("{q}: trace {t} ≤ {bound}"));
                    checked += 1;
                }
            }
        }
        Ok(f.verdict(format!("c(112) = 7/720; weak bound on {checked} patterns")))
    })
}

pub fn criterion_11() -> Outcome {
    timed(11, "exhaustive small-n sandwich", 120, || {
        let mut f = Failures::default();
        let set: PatternSet = "112;122".parse()?;
        let three_quarters = BigRational::new(3.into(), 4.into());
        let mut prev: Option<BigRational> = None;
        for n in 3..=10 {
            let d = max_occurrences(&set, Space::Words { k: 2 }, n, Restriction::None, DEFAULT_BUDGET)?.delta;
            f.check(d >= three_quarters, || format!("δ(n={n}) = {d} < 3/4"));
            if let Some(p) = &prev {
                f.check(&d <= p, || format!("δ increases at n={n}: {p} → {d}"));
            }
            prev = Some(d);
        }
        let triple: PatternSet = "112;121;211".parse()?;
        let single: PatternSet = "112".parse()?;
        for k in 1..=3u32 {
            for n in 3..=8 {
                let a = max_occurrences(&triple, Space::Words { k }, n, Restriction::None, DEFAULT_BUDGET)?.delta;
                let b = max_occurrences(&single, Space::Words { k }, n, Restriction::None, DEFAULT_BUDGET)?.delta;
                f.check(a == b, || format!("k={k}, n={n}: {a} vs {b}"));
            }
        }
        let mut word = [1u32; 6];
        loop {
            let base = count_in_slice(&triple, &word);
            for i in 0..5 {
                if word[i] != word[i + 1] {
                    let mut swapped = word;
                    swapped.swap(i, i + 1);
                    let after = count_in_slice(&triple, &swapped);
                    f.check(after == base, || format!("{word:?} swap {i}: {base} → {after}"));
                }
            }
            match word.iter().rposition(|&v| v < 3) {
                Some(i) => {
                    word[i] += 1;
                    word[i + 1..].iter_mut().for_each(|v| *v = 1);
                }
                None => break,
            }
        }
        Ok(f.verdict(format!("δ({{112,122}}, 2, 10) = {}", prev.expect("n range nonempty"))))
    })
}

pub fn criterion_12() -> Outcome {
    timed(12, "peel bound regression", 1, || {
        let mut f = Failures::default();
        for n in 2..=6usize {
            let peel = upper_bound_peel(&LayeredShape::new(vec![2, n])?, 1.0)?;
            let closed = delta_s_mn(2, n as u64)?.value;
            f.check((peel - closed).abs() <= 1e-12 * closed, || format!("[2,{n}]: {peel} vs {closed}"));
        }
        for a in 2..=6usize {
            for b in 2..=6usize {
                let peel = upper_bound_peel(&LayeredShape::new(vec![a, b])?, 1.0)?;
                let price = two_layer_density(a as u64, b as u64);
                f.check(peel >= price, || format!("[{a},{b}]: bound {peel} < {price}"));
            }
        }
        Ok(f.verdict("equality for [2,n], bound for [a,b]".into()))
    })
}

/// All criteria in order; `slow` extends criterion 2 to `m = 8, 9`.
pub fn run_all(slow: bool) -> Vec<Outcome> {
    vec![
        criterion_1(),
        criterion_2(slow),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
        criterion_11(),
        criterion_12(),
    ]
}
