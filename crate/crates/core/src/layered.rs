//! Packing densities of sets of layered permutations and the co-occurrence
//! ratio of two patterns.
//!
//! For a set `S` of layered patterns of common length `m`, a layered ambient
//! permutation whose layers have relative sizes `λ₁, λ₂, …` contains, in the
//! limit, a fraction
//!
//! ```text
//! Σ_{π∈S} multinomial(m; m₁^π, …, m_r^π) · Σ_{i₁<…<i_r} λ_{i₁}^{m₁^π} ⋯ λ_{i_r}^{m_r^π}
//! ```
//!
//! of its `m`-subsets as `S`-occurrences. [`layered_objective`] evaluates this
//! for any number of parts; [`simple_set_objective`] is the special case with
//! exactly one part per layer.

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::combinatorics::{binomial, compositions, multinomial, pow_u, rational_to_f64, ratio};
use crate::error::{Error, Result};
use crate::optimize::{bisect_root, maximize_on_simplex, maximize_scalar, OptimizerConfig};
use crate::pattern::LayeredShape;

/// Feasibility tolerance for weights.
pub const WEIGHT_TOLERANCE: f64 = 1e-12;

/// A partition of unity `(λ₁, …, λ_r)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimplexWeights(Vec<f64>);

impl SimplexWeights {
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::InvalidWeights("no parts".into()));
        }
        if lambda.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidWeights("weights must be finite and nonnegative".into()));
        }
        let s: f64 = lambda.iter().sum();
        if (s - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::InvalidWeights(format!("weights sum to {s}, not 1")));
        }
        Ok(SimplexWeights(lambda))
    }

    pub fn uniform(parts: usize) -> Self {
        SimplexWeights(vec![1.0 / parts as f64; parts])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn parts(&self) -> usize {
        self.0.len()
    }
}

/// A nonempty set of layered shapes with a common total length.
#[derive(Clone, Debug, PartialEq)]
pub struct LayeredObjectiveSpec {
    shapes: Vec<LayeredShape>,
    coefficients: Vec<f64>,
}

impl LayeredObjectiveSpec {
    pub fn new(shapes: Vec<LayeredShape>) -> Result<Self> {
        let Some(first) = shapes.first() else {
            return Err(Error::InvalidSet("no layered shapes".into()));
        };
        let m = first.total();
        if let Some(s) = shapes.iter().find(|s| s.total() != m) {
            return Err(Error::InvalidSet(format!(
                "shapes must share one total length: {first} has {m}, {s} has {}",
                s.total()
            )));
        }
        let mut sorted = shapes.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSet("duplicate shape".into()));
        }
        let coefficients = shapes
            .iter()
            .map(|s| {
                multinomial(&s.layers().iter().map(|&v| v as u64).collect::<Vec<_>>())
                    .to_f64()
                    .unwrap()
            })
            .collect();
        Ok(LayeredObjectiveSpec {
            shapes,
            coefficients,
        })
    }

    /// Parses `"[2,3];[3,2]"`.
    pub fn parse(s: &str) -> Result<Self> {
        let shapes = s
            .split(';')
            .filter(|p| !p.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<LayeredShape>>>()?;
        LayeredObjectiveSpec::new(shapes)
    }

    pub fn shapes(&self) -> &[LayeredShape] {
        &self.shapes
    }

    pub fn total_len(&self) -> usize {
        self.shapes[0].total()
    }

    pub fn max_layers(&self) -> usize {
        self.shapes.iter().map(LayeredShape::layer_count).max().unwrap()
    }

    /// The common layer count, if all shapes agree.
    pub fn uniform_layers(&self) -> Option<usize> {
        let r = self.shapes[0].layer_count();
        self.shapes.iter().all(|s| s.layer_count() == r).then_some(r)
    }

    pub fn shortest_layer(&self) -> usize {
        self.shapes.iter().map(LayeredShape::shortest_layer).min().unwrap()
    }
}

impl fmt::Display for LayeredObjectiveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.shapes.iter().map(|s| s.to_string()).collect();
        f.write_str(&parts.join(";"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    SimplexOpt,
    SingleVarOpt,
    UpperBound,
}

/// How a reported value relates to the true packing density.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueKind {
    Exact,
    LowerBound,
    UpperBound,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Argmax {
    Weights(SimplexWeights),
    Scalar(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityResult {
    pub value: f64,
    pub argmax: Argmax,
    pub method: Method,
    pub kind: ValueKind,
    /// KKT residual for simplex runs, final bracket width for scalar runs,
    /// zero for closed forms.
    pub certificate: f64,
    pub converged: bool,
}

/// Objective with exactly one part per layer; every shape must have
/// `w.parts()` layers.
pub fn simple_set_objective(spec: &LayeredObjectiveSpec, w: &SimplexWeights) -> Result<f64> {
    let r = w.parts();
    if let Some(s) = spec.shapes.iter().find(|s| s.layer_count() != r) {
        return Err(Error::Mismatch(format!(
            "shape {s} has {} layers but {r} weights were given",
            s.layer_count()
        )));
    }
    Ok(spec
        .shapes
        .iter()
        .zip(&spec.coefficients)
        .map(|(s, c)| {
            let mono: f64 = s
                .layers()
                .iter()
                .zip(w.as_slice())
                .map(|(&e, &l)| l.powi(e as i32))
                .product();
            c * mono
        })
        .sum())
}

/// `Σ_{i₁<…<i_r} Π_t λ_{i_t}^{layers[t]}` by a prefix-sum recursion over layers.
fn increasing_tuple_sum(layers: &[usize], lambda: &[f64]) -> f64 {
    let parts = lambda.len();
    // prev[i]: sum over placements of the layers so far using indices < i.
    let mut prev = vec![1.0; parts + 1];
    let mut cur = vec![0.0; parts + 1];
    for &e in layers {
        cur[0] = 0.0;
        for i in 0..parts {
            cur[i + 1] = cur[i] + prev[i] * lambda[i].powi(e as i32);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[parts]
}

/// Objective for any number of parts at least the largest layer count.
/// Accepts raw (not necessarily normalized) weights so the optimizer can
/// probe around the simplex.
pub fn layered_objective_raw(spec: &LayeredObjectiveSpec, lambda: &[f64]) -> f64 {
    spec.shapes
        .iter()
        .zip(&spec.coefficients)
        .map(|(s, c)| c * increasing_tuple_sum(s.layers(), lambda))
        .sum()
}

pub fn layered_objective(spec: &LayeredObjectiveSpec, w: &SimplexWeights) -> Result<f64> {
    if w.parts() < spec.max_layers() {
        return Err(Error::Mismatch(format!(
            "{} parts cannot hold shapes with {} layers",
            w.parts(),
            spec.max_layers()
        )));
    }
    Ok(layered_objective_raw(spec, w.as_slice()))
}

/// `log₂(r+1) ≤ m⁻`, checked exactly as `r + 1 ≤ 2^{m⁻}`.
pub fn check_simplicity_condition(spec: &LayeredObjectiveSpec) -> Result<bool> {
    let r = spec
        .uniform_layers()
        .ok_or_else(|| Error::Mismatch("shapes have different layer counts".into()))?;
    let shortest = spec.shortest_layer();
    Ok(shortest >= 64 || (r as u128 + 1) <= (1u128 << shortest))
}

/// Multistart maximization of [`layered_objective`] over `r_parts` weights.
/// The value is reported as exact only when the simplicity condition holds
/// and `r_parts` equals the common layer count; otherwise as a lower bound.
pub fn optimize_simplex(
    spec: &LayeredObjectiveSpec,
    r_parts: usize,
    config: &OptimizerConfig,
) -> Result<DensityResult> {
    if r_parts < spec.max_layers() {
        return Err(Error::Mismatch(format!(
            "{r_parts} parts cannot hold shapes with {} layers",
            spec.max_layers()
        )));
    }
    let objective = |x: &[f64]| layered_objective_raw(spec, x);
    let best = maximize_on_simplex(&objective, r_parts, config);
    let exact = spec.uniform_layers() == Some(r_parts)
        && check_simplicity_condition(spec).unwrap_or(false);
    Ok(DensityResult {
        value: best.value,
        argmax: Argmax::Weights(SimplexWeights(best.point)),
        method: Method::SimplexOpt,
        kind: if exact { ValueKind::Exact } else { ValueKind::LowerBound },
        certificate: best.kkt_residual,
        converged: best.converged,
    })
}

/// Density of the two-layer permutation `[a,b]`:
/// `C(a+b,a)·a^a·b^b/(a+b)^{a+b}`, exact.
pub fn two_layer_density_exact(a: u64, b: u64) -> BigRational {
    ratio(
        binomial(a + b, a) * pow_u(a, a) * pow_u(b, b),
        pow_u(a + b, a + b),
    )
}

pub fn two_layer_density(a: u64, b: u64) -> f64 {
    rational_to_f64(&two_layer_density_exact(a, b))
}

/// Shapes of `S(m,n)`: first layer `m`, later layers any composition of `n`.
pub fn s_mn_shapes(m: usize, n: usize) -> Vec<LayeredShape> {
    compositions(n)
        .into_iter()
        .map(|tail| {
            let mut layers = vec![m];
            layers.extend(tail);
            LayeredShape::new(layers).expect("positive parts")
        })
        .collect()
}

/// `C(m+n−1,n)·(m−1)^{m−1}·nⁿ/(m+n−1)^{m+n−1}`, exact.
pub fn delta_s_mn_exact(m: u64, n: u64) -> Result<BigRational> {
    if m < 2 || n < 2 {
        return Err(Error::Hypothesis(format!("S({m},{n}) needs m >= 2 and n >= 2")));
    }
    Ok(ratio(
        binomial(m + n - 1, n) * pow_u(m - 1, m - 1) * pow_u(n, n),
        pow_u(m + n - 1, m + n - 1),
    ))
}

/// Closed form for `S(m,n)` obtained from the first-order condition in the
/// first weight, maximized at `λ₁ = (m−1)/(m+n−1)`.
///
/// The stationarity identity only holds at the true optimum, and maximizing
/// it freely over `λ₁` overshoots: exhaustive layered maxima for `S(2,2)`
/// already drop below `4/9` by length 50. The value is therefore reported as
/// an upper bound; [`s_mn_self_similar`] gives the attained value.
///
/// For `m ≥ 3` this coincides with [`two_layer_density`] of `[m−1, n]`; that
/// identity is checked here.
pub fn delta_s_mn(m: u64, n: u64) -> Result<DensityResult> {
    let value = rational_to_f64(&delta_s_mn_exact(m, n)?);
    if m >= 3 {
        let two_layer = two_layer_density(m - 1, n);
        if (two_layer - value).abs() > 1e-12 {
            return Err(Error::Invariant(format!(
                "S({m},{n}) closed form {value} differs from [{},{n}] density {two_layer}",
                m - 1
            )));
        }
    }
    Ok(DensityResult {
        value,
        argmax: Argmax::Scalar((m - 1) as f64 / (m + n - 1) as f64),
        method: Method::ClosedForm,
        kind: ValueKind::UpperBound,
        certificate: 0.0,
        converged: true,
    })
}

/// Attained density of `S(m,n)`.
///
/// The objective collapses to `C(m+n,n)·Σ_i λ_i^m Λ_i^n` with
/// `Λ_i = Σ_{j>i} λ_j`, and the tail after the first part of an optimal
/// sequence is a rescaled optimal sequence, so the supremum `f` solves
/// `f = max_x x^m(1−x)^n + (1−x)^{m+n} f`, i.e.
/// `f = max_x x^m(1−x)^n / (1 − (1−x)^{m+n})` (geometric weights).
pub fn s_mn_self_similar(m: u64, n: u64) -> Result<DensityResult> {
    if m < 1 || n < 1 {
        return Err(Error::Hypothesis(format!("S({m},{n}) needs m, n >= 1")));
    }
    let (mi, ni) = (m as i32, n as i32);
    let h = |x: f64| x.powi(mi) * (1.0 - x).powi(ni) / (1.0 - (1.0 - x).powi(mi + ni));
    let width = 1e-13;
    let (x, v) = maximize_scalar(h, 1e-9, 1.0 - 1e-9, 4096, width);
    Ok(DensityResult {
        value: binomial(m + n, n).to_f64().unwrap() * v,
        argmax: Argmax::Scalar(x),
        method: Method::SingleVarOpt,
        kind: ValueKind::Exact,
        certificate: width,
        converged: true,
    })
}

/// Single-variable bound for `S(m₁, M−m₁) ∪ … ∪ S(m_s, M−m_s)`:
/// maximum over `λ ∈ (0,1)` of `(1/M)·Σ C(M,mᵢ)·mᵢ·λ^{mᵢ−1}(1−λ)^{M−mᵢ}`.
/// With one term this is the [`delta_s_mn`] closed form, and like it the
/// value is an upper bound.
pub fn delta_mixed_first_layers(total: u64, first_layers: &[u64]) -> Result<DensityResult> {
    if total < 3 {
        return Err(Error::Hypothesis(format!("M = {total} must be at least 3")));
    }
    if first_layers.is_empty() {
        return Err(Error::Hypothesis("no first layers given".into()));
    }
    let mut prev = total;
    for &mi in first_layers {
        if mi >= prev || mi < 2 {
            return Err(Error::Hypothesis(format!(
                "first layers must satisfy M > m1 > ... > ms >= 2, got M={total}, {first_layers:?}"
            )));
        }
        prev = mi;
    }
    let terms: Vec<(f64, i32, i32)> = first_layers
        .iter()
        .map(|&mi| {
            let coef = binomial(total, mi).to_f64().unwrap() * mi as f64 / total as f64;
            (coef, mi as i32 - 1, (total - mi) as i32)
        })
        .collect();
    let f = |x: f64| {
        terms
            .iter()
            .map(|&(c, p, q)| c * x.powi(p) * (1.0 - x).powi(q))
            .sum::<f64>()
    };
    let width = 1e-12;
    let (x, v) = maximize_scalar(f, 0.0, 1.0, 4096, width);
    Ok(DensityResult {
        value: v,
        argmax: Argmax::Scalar(x),
        method: Method::SingleVarOpt,
        kind: ValueKind::UpperBound,
        certificate: width,
        converged: true,
    })
}

/// Peel-off bound
/// `δ([m₁,…,m_r]) ≤ C(m,m₁)·(m₁/m)·(m₁−1)^{m₁−1}(m−m₁)^{m−m₁}/(m−1)^{m−1} · δ([m₂,…,m_r])`.
/// `inner_delta` is the density (or an upper bound for it) of the shape with
/// the first layer removed; a single remaining layer has density 1.
pub fn upper_bound_peel(shape: &LayeredShape, inner_delta: f64) -> Result<f64> {
    let m1 = shape.layers()[0] as u64;
    if m1 < 2 {
        return Err(Error::Hypothesis(format!("first layer of {shape} must be at least 2")));
    }
    let m = shape.total() as u64;
    let factor = ratio(
        binomial(m, m1) * m1 * pow_u(m1 - 1, m1 - 1) * pow_u(m - m1, m - m1),
        BigUint::from(m) * pow_u(m - 1, m - 1),
    );
    Ok(rational_to_f64(&factor) * inner_delta)
}

/// `δ([a,b],[b,a]) = C(a+b,a)·sup_x x^a(1−x)^b + x^b(1−x)^a`.
///
/// The function is symmetric under `x ↦ 1−x`, so the search runs over
/// `[0, 1/2]` and the reported argmax is the one not exceeding `1/2`.
/// For `b − a ∈ {1, 2}` the maximum sits at `x = 1/2`, which is asserted.
pub fn delta_two_layer_pair(a: u64, b: u64) -> Result<DensityResult> {
    if !(b > a && a >= 2) {
        return Err(Error::Hypothesis(format!("need b > a >= 2, got a={a}, b={b}")));
    }
    let (ai, bi) = (a as i32, b as i32);
    let (af, bf) = (a as f64, b as f64);
    let g = |x: f64| x.powi(ai) * (1.0 - x).powi(bi) + x.powi(bi) * (1.0 - x).powi(ai);
    let dg = |x: f64| {
        let y = 1.0 - x;
        af * x.powi(ai - 1) * y.powi(bi) - bf * x.powi(ai) * y.powi(bi - 1)
            + bf * x.powi(bi - 1) * y.powi(ai)
            - af * x.powi(bi) * y.powi(ai - 1)
    };
    let grid = 2048;
    let step = 0.5 / grid as f64;
    let (x0, _) = maximize_scalar(g, 0.0, 0.5, grid, 1e-13);
    // Sharpen the argmax with the derivative; the midpoint is always critical.
    let lo = (x0 - step).max(0.0);
    let hi = (x0 + step).min(0.5);
    let mut x = bisect_root(dg, lo, hi).unwrap_or(x0);
    if g(x0) > g(x) {
        x = x0;
    }
    // Near a flat midpoint maximum the float argmax wanders by ~1e-8.
    if 0.5 - x <= step && g(0.5) >= g(x) * (1.0 - 1e-14) {
        x = 0.5;
    }
    if b - a <= 2 && (x - 0.5).abs() > 1e-9 {
        return Err(Error::Invariant(format!(
            "expected the maximum of [{a},{b}]/[{b},{a}] at 1/2, found {x}"
        )));
    }
    Ok(DensityResult {
        value: binomial(a + b, a).to_f64().unwrap() * g(x),
        argmax: Argmax::Scalar(x),
        method: Method::SingleVarOpt,
        kind: ValueKind::Exact,
        certificate: step,
        converged: true,
    })
}

/// Sandwich slack for [`cooccurrence_ratio`].
pub const SANDWICH_TOLERANCE: f64 = 1e-9;

/// `(δ₁ + δ₂ − δ₁₂) / max(δ₁, δ₂)`; 1 when the two patterns pack together
/// perfectly, 0 when packing one excludes the other.
pub fn cooccurrence_ratio(delta1: f64, delta2: f64, delta12: f64) -> Result<f64> {
    let top = delta1.max(delta2);
    if top <= 0.0
        || delta12 < top - SANDWICH_TOLERANCE
        || delta12 > delta1 + delta2 + SANDWICH_TOLERANCE
    {
        return Err(Error::Sandwich {
            d1: delta1,
            d2: delta2,
            d12: delta12,
        });
    }
    Ok((delta1 + delta2 - delta12) / top)
}

pub const DEFAULT_COV_PAIRS: [(u64, u64); 8] =
    [(2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (3, 6), (4, 5), (4, 6)];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CovRow {
    pub a: u64,
    pub b: u64,
    /// `δ([a,b]) = δ([b,a])`.
    pub delta_single: f64,
    pub delta_pair: f64,
    pub argmax: f64,
    pub cov: f64,
}

/// Co-occurrence of `[a,b]` and `[b,a]` for each pair.
pub fn cooccurrence_table(pairs: &[(u64, u64)]) -> Result<Vec<CovRow>> {
    pairs
        .iter()
        .map(|&(a, b)| {
            let pair = delta_two_layer_pair(a, b)?;
            let single = two_layer_density(a, b);
            let Argmax::Scalar(x) = pair.argmax else {
                unreachable!("scalar search")
            };
            Ok(CovRow {
                a,
                b,
                delta_single: single,
                delta_pair: pair.value,
                argmax: x,
                cov: cooccurrence_ratio(single, single, pair.value)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> LayeredObjectiveSpec {
        LayeredObjectiveSpec::parse(s).unwrap()
    }

    fn w(v: &[f64]) -> SimplexWeights {
        SimplexWeights::new(v.to_vec()).unwrap()
    }

    #[test]
    fn weights_validation() {
        assert!(SimplexWeights::new(vec![0.5, 0.6]).is_err());
        assert!(SimplexWeights::new(vec![1.5, -0.5]).is_err());
        assert!(SimplexWeights::new(vec![]).is_err());
        assert!(SimplexWeights::new(vec![0.25; 4]).is_ok());
    }

    #[test]
    fn simple_objective_examples() {
        assert!((simple_set_objective(&spec("[2,2]"), &w(&[0.5, 0.5])).unwrap() - 0.375).abs() < 1e-15);
        assert_eq!(simple_set_objective(&spec("[1,1]"), &w(&[1.0, 0.0])).unwrap(), 0.0);
        assert!((simple_set_objective(&spec("[2,3];[3,2]"), &w(&[0.5, 0.5])).unwrap() - 0.625).abs() < 1e-15);
        assert!(simple_set_objective(&spec("[2,2]"), &w(&[0.2, 0.3, 0.5])).is_err());
    }

    #[test]
    fn general_objective_reduces_to_simple() {
        let s = spec("[2,3];[3,2]");
        let x = w(&[0.3, 0.7]);
        assert!((layered_objective(&s, &x).unwrap() - simple_set_objective(&s, &x).unwrap()).abs() < 1e-15);
        // Extra zero-weight parts do not change the value.
        let padded = w(&[0.3, 0.0, 0.7, 0.0]);
        assert!((layered_objective(&s, &padded).unwrap() - simple_set_objective(&s, &x).unwrap()).abs() < 1e-15);
        assert!(layered_objective(&spec("[1,1,1]"), &x).is_err());
    }

    #[test]
    fn simplicity_examples() {
        assert!(check_simplicity_condition(&spec("[2,3];[3,2]")).unwrap());
        assert!(!check_simplicity_condition(&spec("[1,2]")).unwrap());
        assert!(check_simplicity_condition(&spec("[3,3,3]")).unwrap());
        assert!(check_simplicity_condition(&spec("[2,2];[1,1,2]")).is_err());
    }

    #[test]
    fn optimizer_examples() {
        let cfg = OptimizerConfig::default();
        let r = optimize_simplex(&spec("[2,2]"), 2, &cfg).unwrap();
        assert!((r.value - 0.375).abs() < 1e-10);
        assert_eq!(r.kind, ValueKind::Exact);
        let Argmax::Weights(ref x) = r.argmax else { panic!() };
        assert!((x.as_slice()[0] - 0.5).abs() < 1e-6);
        let r = optimize_simplex(&spec("[2,3];[3,2]"), 2, &cfg).unwrap();
        assert!((r.value - 0.625).abs() < 1e-10);
        assert!(optimize_simplex(&spec("[1,1,1]"), 2, &cfg).is_err());
    }

    #[test]
    fn s_mn_examples() {
        let r = delta_s_mn(2, 2).unwrap();
        assert!((r.value - 4.0 / 9.0).abs() < 1e-15);
        assert_eq!(r.argmax, Argmax::Scalar(1.0 / 3.0));
        assert!((delta_s_mn(3, 2).unwrap().value - 0.375).abs() < 1e-15);
        assert!((delta_s_mn(2, 3).unwrap().value - 27.0 / 64.0).abs() < 1e-15);
        assert!(matches!(delta_s_mn(1, 3), Err(Error::Hypothesis(_))));
        assert!(matches!(delta_s_mn(3, 1), Err(Error::Hypothesis(_))));
        assert_eq!(s_mn_shapes(2, 2).len(), 2);
        assert_eq!(s_mn_shapes(2, 3).len(), 4);
    }

    #[test]
    fn mixed_examples() {
        let r = delta_mixed_first_layers(4, &[2]).unwrap();
        assert!((r.value - 4.0 / 9.0).abs() < 1e-12);
        let r = delta_mixed_first_layers(4, &[3]).unwrap();
        assert!((r.value - 4.0 / 9.0).abs() < 1e-12);
        let r = delta_mixed_first_layers(4, &[3, 2]).unwrap();
        assert!((r.value - 0.75).abs() < 1e-12);
        let Argmax::Scalar(x) = r.argmax else { panic!() };
        assert!((x - 0.5).abs() < 1e-6);
        assert!(delta_mixed_first_layers(4, &[2, 3]).is_err());
        assert!(delta_mixed_first_layers(2, &[2]).is_err());
        assert!(delta_mixed_first_layers(5, &[5]).is_err());
    }

    #[test]
    fn peel_examples() {
        let two_two = LayeredShape::new(vec![2, 2]).unwrap();
        let b = upper_bound_peel(&two_two, 1.0).unwrap();
        assert!((b - 4.0 / 9.0).abs() < 1e-15);
        assert!(b >= two_layer_density(2, 2));
        let b = upper_bound_peel(&LayeredShape::new(vec![2, 3]).unwrap(), 1.0).unwrap();
        assert!((b - 0.421875).abs() < 1e-15);
        assert!((two_layer_density(2, 3) - 0.3456).abs() < 1e-15);
        assert!(upper_bound_peel(&LayeredShape::new(vec![1, 3]).unwrap(), 1.0).is_err());
    }

    #[test]
    fn pair_examples() {
        let r = delta_two_layer_pair(2, 3).unwrap();
        assert!((r.value - 0.625).abs() < 1e-14);
        assert_eq!(r.argmax, Argmax::Scalar(0.5));
        let r = delta_two_layer_pair(2, 4).unwrap();
        assert_eq!(r.argmax, Argmax::Scalar(0.5));
        // C(6,2) * 2 * 2^-6: at x = 1/2 both monomials are 2^-6.
        assert!((r.value - 15.0 / 32.0).abs() < 1e-14);
        assert!(delta_two_layer_pair(3, 3).is_err());
        assert!(delta_two_layer_pair(1, 3).is_err());
    }

    #[test]
    fn cooccurrence_examples() {
        let c = cooccurrence_ratio(0.3456, 0.3456, 0.625).unwrap();
        assert!((c - 0.19155).abs() < 1e-4);
        assert_eq!(cooccurrence_ratio(0.2, 0.2, 0.4).unwrap(), 0.0);
        assert_eq!(cooccurrence_ratio(0.2, 0.2, 0.2).unwrap(), 1.0);
        assert!(matches!(cooccurrence_ratio(0.3, 0.2, 0.1), Err(Error::Sandwich { .. })));
        assert!(matches!(cooccurrence_ratio(0.3, 0.2, 0.6), Err(Error::Sandwich { .. })));
    }

    #[test]
    fn covtable_matches_published_rounding() {
        // The published (2,3) entry reads 0.191; the exact value is 331/1728.
        let expected = [331.0 / 1728.0, 0.576, 0.915, 0.138, 0.447, 0.799, 0.108, 0.365];
        let rows = cooccurrence_table(&DEFAULT_COV_PAIRS).unwrap();
        for (row, e) in rows.iter().zip(expected) {
            assert!((row.cov - e).abs() <= 0.0005, "{row:?} vs {e}");
        }
        assert!((rows[0].cov - 331.0 / 1728.0).abs() < 1e-12);
    }
}
