//! Derivative-free maximization of smooth functions on an interval and on
//! the probability simplex.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`,
/// stopping once the bracket is narrower than `width`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, width: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > width {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
        // Bracket stops shrinking once it reaches float resolution.
        if x1 >= x2 {
            break;
        }
    }
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for x in [lo, hi] {
        let fx = f(x);
        if fx > best.1 {
            best = (x, fx);
        }
    }
    best
}

/// Maximum of `f` on `[lo, hi]`: a uniform grid of `grid` cells locates the
/// best cell, then golden-section refines within its neighbours. Ties on the
/// grid go to the smallest abscissa.
pub fn maximize_scalar(f: impl Fn(f64) -> f64, lo: f64, hi: f64, grid: usize, width: f64) -> (f64, f64) {
    let grid = grid.max(2);
    let step = (hi - lo) / grid as f64;
    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..=grid {
        let v = f(lo + step * i as f64);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let a = lo + step * best_i.saturating_sub(1) as f64;
    let b = (lo + step * (best_i + 1) as f64).min(hi);
    let (x, v) = golden_section_max(&f, a, b, width);
    if v >= best_v {
        (x, v)
    } else {
        (lo + step * best_i as f64, best_v)
    }
}

/// Bisection for a sign change of `df` in `[a, b]`; `None` if the endpoints
/// have the same sign.
pub fn bisect_root(df: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> Option<f64> {
    let mut fa = df(a);
    let fb = df(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = df(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Some(0.5 * (a + b))
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    /// Objective convergence tolerance.
    pub tolerance: f64,
    pub multistarts: usize,
    /// Iteration cap per start.
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            tolerance: 1e-10,
            multistarts: 32,
            max_iterations: 5_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimplexMax {
    pub point: Vec<f64>,
    pub value: f64,
    /// `max_i ∂f/∂λ_i − min_{λ_j > 0} ∂f/∂λ_j` at `point`; zero at a KKT point.
    pub kkt_residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn gradient(f: &dyn Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            let h = 1e-6;
            probe[i] = x[i] + h;
            let up = f(&probe);
            probe[i] = x[i] - h;
            let down = f(&probe);
            probe[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

fn kkt(grad: &[f64], x: &[f64]) -> (f64, usize, usize) {
    let (mut hi, mut lo) = (0, usize::MAX);
    for i in 0..x.len() {
        if grad[i] > grad[hi] {
            hi = i;
        }
        if x[i] > 0.0 && (lo == usize::MAX || grad[i] < grad[lo]) {
            lo = i;
        }
    }
    (grad[hi] - grad[lo], hi, lo)
}

/// Best point along the segment moving mass from `from` to `to`.
fn pair_line_search(f: &dyn Fn(&[f64]) -> f64, x: &mut [f64], to: usize, from: usize, current: f64) -> f64 {
    let (a, b) = (x[to], x[from]);
    let mut probe = x.to_vec();
    let along = |t: f64| {
        let mut p = probe.clone();
        p[to] = a + t;
        p[from] = b - t;
        f(&p)
    };
    let (t, v) = maximize_scalar(along, -a, b, 8, 1e-14);
    if v > current {
        probe[to] = a + t;
        probe[from] = b - t;
        // Snap mass that should have vanished exactly to the boundary.
        for c in [to, from] {
            if probe[c] < 1e-15 {
                probe[c] = 0.0;
            }
        }
        let s: f64 = probe.iter().sum();
        for (xi, pi) in x.iter_mut().zip(&probe) {
            *xi = pi / s;
        }
        f(x)
    } else {
        current
    }
}

/// Local ascent from `start`: repeatedly move mass from the active
/// coordinate with the smallest partial derivative to the one with the
/// largest (exact line search along that edge direction), then a cyclic
/// derivative-free pass over all coordinate pairs as polish.
pub fn ascend_from(f: &dyn Fn(&[f64]) -> f64, start: Vec<f64>, config: &OptimizerConfig) -> SimplexMax {
    let mut x = start;
    let mut value = f(&x);
    let dim = x.len();
    if dim == 1 {
        return SimplexMax {
            point: x,
            value,
            kkt_residual: 0.0,
            iterations: 0,
            converged: true,
        };
    }
    let mut iterations = 0;
    let mut stalled = 0;
    while iterations < config.max_iterations {
        iterations += 1;
        let grad = gradient(f, &x);
        let (residual, hi, lo) = kkt(&grad, &x);
        if residual <= config.tolerance.sqrt() * 1e-2 || hi == lo {
            break;
        }
        let next = pair_line_search(f, &mut x, hi, lo, value);
        let gain = next - value;
        value = next;
        if gain <= config.tolerance * value.abs().max(1.0) {
            stalled += 1;
            if stalled >= 3 {
                break;
            }
        } else {
            stalled = 0;
        }
    }
    // Polish.
    for _ in 0..50 {
        let before = value;
        for i in 0..dim {
            for j in 0..dim {
                if i != j && x[j] > 0.0 {
                    value = pair_line_search(f, &mut x, i, j, value);
                }
            }
        }
        if value - before <= config.tolerance * value.abs().max(1.0) {
            break;
        }
    }
    let grad = gradient(f, &x);
    let (kkt_residual, _, _) = kkt(&grad, &x);
    SimplexMax {
        converged: iterations < config.max_iterations,
        point: x,
        value,
        kkt_residual,
        iterations,
    }
}

/// Deterministic starting points: the barycenter, then points drawn from the
/// flat Dirichlet distribution with a seeded ChaCha8 stream.
pub fn start_points(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts = vec![vec![1.0 / dim as f64; dim]];
    while starts.len() < count.max(1) {
        let draws: Vec<f64> = (0..dim)
            .map(|_| {
                let u = ((rng.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64;
                -u.ln()
            })
            .collect();
        let s: f64 = draws.iter().sum();
        starts.push(draws.into_iter().map(|d| d / s).collect());
    }
    starts
}

/// Multistart maximization of `f` over the `(dim-1)`-simplex. Starts run in
/// parallel; the best value wins, ties going to the lexicographically
/// smallest point.
pub fn maximize_on_simplex(f: &(dyn Fn(&[f64]) -> f64 + Sync), dim: usize, config: &OptimizerConfig) -> SimplexMax {
    let runs: Vec<SimplexMax> = start_points(dim, config.multistarts, config.seed)
        .into_par_iter()
        .map(|s| ascend_from(f, s, config))
        .collect();
    runs.into_iter()
        .reduce(|best, r| {
            let better = r.value > best.value
                || (r.value == best.value
                    && r.point.partial_cmp(&best.point) == Some(std::cmp::Ordering::Less));
            if better {
                r
            } else {
                best
            }
        })
        .expect("at least one start")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_interior_maximum() {
        let (x, v) = golden_section_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        assert!(v.abs() < 1e-12);
        let (x, _) = maximize_scalar(|x| x * x * (1.0 - x) * (1.0 - x) * (1.0 - x), 0.0, 1.0, 64, 1e-12);
        assert!((x - 0.4).abs() < 1e-6);
    }

    #[test]
    fn bisect_finds_root() {
        let r = bisect_root(|x| x * x - 2.0, 0.0, 2.0).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
        assert!(bisect_root(|x| x + 1.0, 0.0, 1.0).is_none());
    }

    #[test]
    fn simplex_linear_objective_goes_to_vertex() {
        let f = |x: &[f64]| 1.0 * x[0] + 3.0 * x[1] + 2.0 * x[2];
        let r = maximize_on_simplex(&f, 3, &OptimizerConfig::default());
        assert!((r.value - 3.0).abs() < 1e-12);
        assert!((r.point[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn simplex_entropy_like_objective() {
        // Maximized at the barycenter: 1 - Σ x_i².
        let f = |x: &[f64]| 1.0 - x.iter().map(|v| v * v).sum::<f64>();
        let cfg = OptimizerConfig { multistarts: 4, ..Default::default() };
        let r = maximize_on_simplex(&f, 4, &cfg);
        assert!((r.value - 0.75).abs() < 1e-10);
        assert!(r.point.iter().all(|v| (v - 0.25).abs() < 1e-5));
        assert!(r.kkt_residual < 1e-4);
    }

    #[test]
    fn starts_are_deterministic_and_feasible() {
        let a = start_points(5, 10, 3);
        assert_eq!(a, start_points(5, 10, 3));
        for s in &a {
            assert!((s.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(s.iter().all(|&v| v >= 0.0));
        }
    }
}
