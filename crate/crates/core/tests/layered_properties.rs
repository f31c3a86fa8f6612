use patstat_core::combinatorics::rational_to_f64;
use patstat_core::extremal::{delta_permutations, PERMUTATION_BUDGET};
use patstat_core::layered::{
    check_simplicity_condition, cooccurrence_table, delta_s_mn, optimize_simplex, s_mn_self_similar, s_mn_shapes,
    two_layer_density, upper_bound_peel, Argmax, DEFAULT_COV_PAIRS,
};
use patstat_core::optimize::OptimizerConfig;
use patstat_core::{LayeredObjectiveSpec, LayeredShape, PatternSet};

fn weights(r: &patstat_core::DensityResult) -> Vec<f64> {
    match &r.argmax {
        Argmax::Weights(w) => w.as_slice().to_vec(),
        Argmax::Scalar(x) => vec![*x],
    }
}

#[test]
fn cooccurrence_rows_satisfy_sandwich() {
    for row in cooccurrence_table(&DEFAULT_COV_PAIRS).unwrap() {
        assert!(row.delta_single <= row.delta_pair + 1e-12);
        assert!(row.delta_pair <= 2.0 * row.delta_single + 1e-12);
        assert!((0.0..=1.0).contains(&row.cov));
    }
}

#[test]
fn symmetric_pairs_have_symmetric_maximizers() {
    let config = OptimizerConfig::default();
    for (a, b) in [(2, 3), (2, 4), (3, 4), (3, 5), (4, 5)] {
        let spec = LayeredObjectiveSpec::parse(&format!("[{a},{b}];[{b},{a}]")).unwrap();
        let w = weights(&optimize_simplex(&spec, 2, &config).unwrap());
        assert!((w[0] - w[1]).abs() <= 1e-6, "[{a},{b}]: {w:?}");
    }
}

#[test]
fn increasing_layers_give_increasing_weights() {
    let config = OptimizerConfig::default();
    for s in ["[2,3]", "[2,4]", "[3,5]", "[2,2,3]", "[2,4];[3,3]"] {
        let spec = LayeredObjectiveSpec::parse(s).unwrap();
        assert!(check_simplicity_condition(&spec).unwrap(), "{s}");
        let r = spec.uniform_layers().unwrap();
        let w = weights(&optimize_simplex(&spec, r, &config).unwrap());
        assert!(w.windows(2).all(|p| p[0] <= p[1] + 1e-6), "{s}: {w:?}");
    }
}

#[test]
fn single_two_layer_optimum_is_price_formula() {
    let config = OptimizerConfig::default();
    for (a, b) in [(2, 2), (2, 3), (3, 2), (4, 3)] {
        let spec = LayeredObjectiveSpec::parse(&format!("[{a},{b}]")).unwrap();
        let v = optimize_simplex(&spec, 2, &config).unwrap().value;
        assert!((v - two_layer_density(a, b)).abs() < 1e-9);
    }
}

#[test]
fn finite_permutation_maxima_sandwich_three_quarters() {
    let set: PatternSet = "213;132".parse().unwrap();
    let spec = LayeredObjectiveSpec::parse("[2,1];[1,2]").unwrap();
    let opt = optimize_simplex(&spec, 2, &OptimizerConfig::default()).unwrap().value;
    assert!((opt - 0.75).abs() < 1e-9);
    let mut prev = f64::INFINITY;
    for n in 3..=8 {
        let d = rational_to_f64(&delta_permutations(&set, n, PERMUTATION_BUDGET).unwrap().delta);
        assert!(d >= 0.75 - 1e-12 && d <= prev, "n={n}: {d}");
        prev = d;
    }
}

#[test]
fn s_mn_optimizer_stays_below_both_values() {
    let config = OptimizerConfig {
        multistarts: 4,
        ..OptimizerConfig::default()
    };
    for (m, n) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        let spec = LayeredObjectiveSpec::new(s_mn_shapes(m, n)).unwrap();
        let opt = optimize_simplex(&spec, 8, &config).unwrap().value;
        let closed = delta_s_mn(m as u64, n as u64).unwrap().value;
        let attained = s_mn_self_similar(m as u64, n as u64).unwrap().value;
        assert!(opt <= attained + 1e-9 && attained <= closed, "S({m},{n})");
        // Geometric weights converge quickly in the number of parts.
        assert!(attained - opt < 1e-3, "S({m},{n}): {opt} vs {attained}");
    }
}

#[test]
fn peel_bounds_two_layer_density() {
    for a in 2..=6 {
        for b in 2..=6 {
            let bound = upper_bound_peel(&LayeredShape::new(vec![a, b]).unwrap(), 1.0).unwrap();
            assert!(bound >= two_layer_density(a as u64, b as u64) - 1e-15);
        }
    }
}
