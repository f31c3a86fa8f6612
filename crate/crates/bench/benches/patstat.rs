use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use patstat_core::count::{count_by_dp, count_by_subsets};
use patstat_core::extremal::{max_occurrences, DEFAULT_BUDGET};
use patstat_core::layered::optimize_simplex;
use patstat_core::moments::{bracket_matrix, min_delta_search, trace_sum};
use patstat_core::optimize::OptimizerConfig;
use patstat_core::{LayeredObjectiveSpec, PatternSet, Permutation, Restriction, Space, Word, WordPattern};

fn counting(c: &mut Criterion) {
    let set: PatternSet = "1324;2143".parse().unwrap();
    let word: Word = "3,1,4,1,5,9,2,6,5,3,5,8,9,7,9,3,2,3,8,4".parse().unwrap();
    let mut g = c.benchmark_group("count");
    g.bench_function("subsets_n20", |b| b.iter(|| count_by_subsets(black_box(&set), black_box(&word)).unwrap()));
    g.bench_function("dp_n20", |b| b.iter(|| count_by_dp(black_box(&set), black_box(&word))));
    g.finish();
}

fn search(c: &mut Criterion) {
    let set: PatternSet = "112;122".parse().unwrap();
    let perms: PatternSet = "132".parse().unwrap();
    let mut g = c.benchmark_group("extremal");
    g.sample_size(10);
    g.bench_function("words_k3_n9", |b| {
        b.iter(|| max_occurrences(&set, Space::Words { k: 3 }, 9, Restriction::None, DEFAULT_BUDGET).unwrap())
    });
    g.bench_function("perms_n8", |b| {
        b.iter(|| max_occurrences(&perms, Space::Permutations, 8, Restriction::None, DEFAULT_BUDGET).unwrap())
    });
    g.finish();
}

fn moments(c: &mut Criterion) {
    let p: WordPattern = "25314".parse::<Permutation>().unwrap().into();
    let mut g = c.benchmark_group("moments");
    g.bench_function("trace_sum_m5", |b| b.iter(|| trace_sum(black_box(&p), black_box(&p)).unwrap()));
    g.bench_function("bracket_matrix_m8", |b| b.iter(|| bracket_matrix(black_box(8)).unwrap()));
    g.sample_size(10);
    g.bench_function("min_delta_m7", |b| b.iter(|| min_delta_search(black_box(7)).unwrap()));
    g.finish();
}

fn optimizer(c: &mut Criterion) {
    let spec = LayeredObjectiveSpec::parse("[2,3];[3,2]").unwrap();
    let config = OptimizerConfig { multistarts: 4, ..OptimizerConfig::default() };
    let mut g = c.benchmark_group("layered");
    g.sample_size(10);
    g.bench_function("two_shapes_r6", |b| b.iter(|| optimize_simplex(&spec, 6, &config).unwrap()));
    g.finish();
}

criterion_group!(benches, counting, search, moments, optimizer);
criterion_main!(benches);
