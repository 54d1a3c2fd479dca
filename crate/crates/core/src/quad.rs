//! Deterministic quadrature primitives.
//!
//! Everything downstream that integrates a density does so through the
//! pieces here: Gauss-Legendre node sets (computed once per order and
//! cached), panel layouts geometrically graded toward interval endpoints,
//! and pairwise summation. Evaluation order is fixed (nodes ascending,
//! panels left to right), so repeated runs produce bit-identical sums.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// A Gauss-Legendre rule on `[-1, 1]` with nodes in ascending order.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Value and derivative of the Legendre polynomial `P_n` at `x`.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 1.0;
    let mut cur = x;
    for k in 2..=n {
        let kf = k as f64;
        (prev, cur) = (cur, ((2.0 * kf - 1.0) * x * cur - (kf - 1.0) * prev) / kf);
    }
    let derivative = n as f64 * (x * cur - prev) / (x * x - 1.0);
    (cur, derivative)
}

impl GaussLegendre {
    /// Builds the `n`-point rule by Newton iteration on the Legendre roots.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("quadrature order must be at least 1"));
        }
        if n == 1 {
            return Ok(GaussLegendre {
                nodes: vec![0.0],
                weights: vec![2.0],
            });
        }
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            // Tricomi's initial guess is accurate enough for Newton to
            // converge in a handful of steps at any order.
            let mut x =
                (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (value, slope) = legendre_with_derivative(n, x);
                let step = value / slope;
                x -= step;
                if step.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, derivative) = legendre_with_derivative(n, x);
            nodes.push(x);
            weights.push(2.0 / ((1.0 - x * x) * derivative * derivative));
        }
        // The cosine guesses run from +1 toward -1; flip to ascending.
        nodes.reverse();
        weights.reverse();
        Ok(GaussLegendre { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrates `f` over `[a, b]`, nodes ascending, pairwise-summed.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .collect();
        half * pairwise_sum(&terms)
    }
}

/// Shared, cached rule lookup; orders used here are few and reused often.
pub fn gauss_legendre(n: usize) -> Result<Arc<GaussLegendre>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().expect("cache lock").get(&n) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(GaussLegendre::new(n)?);
    cache
        .lock()
        .expect("cache lock")
        .insert(n, rule.clone());
    Ok(rule)
}

/// Pairwise (cascade) summation: deterministic for a fixed input order and
/// with error growth `O(log n)` instead of `O(n)`.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 32 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Panel boundaries on `[-half, half]`, geometrically graded toward both
/// endpoints: the cut points are `half * (1 - ratio^-j)` for
/// `j = 1, ..., depth - 1`, mirrored, together with `0` and the endpoints.
/// Yields `2 * depth` panels whose widths shrink like `ratio^-j` near the
/// ends, which is where the integrands here lose smoothness.
pub fn graded_panel_boundaries(half: f64, depth: usize, ratio: f64) -> Vec<f64> {
    assert!(half > 0.0 && depth >= 1 && ratio > 1.0);
    let mut cuts = Vec::with_capacity(2 * depth + 1);
    cuts.push(-half);
    for j in (1..depth).rev() {
        cuts.push(-half * (1.0 - ratio.powi(-(j as i32))));
    }
    cuts.push(0.0);
    for j in 1..depth {
        cuts.push(half * (1.0 - ratio.powi(-(j as i32))));
    }
    cuts.push(half);
    cuts
}

/// Integrates `f` over consecutive panels with the same rule on each.
pub fn integrate_panels<F: Fn(f64) -> f64>(
    rule: &GaussLegendre,
    boundaries: &[f64],
    f: F,
) -> f64 {
    let panel_sums: Vec<f64> = boundaries
        .windows(2)
        .map(|pair| rule.integrate(pair[0], pair[1], &f))
        .collect();
    pairwise_sum(&panel_sums)
}
