//! Seeded site percolation and its bookkeeping: retained-set sampling with a
//! monotone coupling, giant-component statistics with their supercritical
//! predictions, the excess scaling report, and the fixed point x of
//! x = (1+eps)(1 - e^{-x}).

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::num::Real;
use crate::seed::uniform01;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PercolationError {
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
}

/// Retention parameters: the supercritical form keeps each vertex with
/// probability p = (1+eps)/d. A raw retention probability can be set
/// directly for diagnostics (p = 0 and p = 1 are allowed; `epsilon` is then
/// NaN and prediction fields stay empty).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PercolationParams<R> {
    pub epsilon: R,
    pub p: R,
    pub seed: u64,
}

impl<R: Real> PercolationParams<R> {
    /// p = (1+eps)/d, clamped to 1 for degenerate small-degree diagnostics.
    pub fn supercritical(epsilon: R, d: usize, seed: u64) -> Result<Self, PercolationError> {
        if !(epsilon > R::zero()) {
            return Err(PercolationError::NonPositiveEpsilon);
        }
        let p = ((R::one() + epsilon) / R::from_count(d)).min(R::one());
        Ok(PercolationParams { epsilon, p, seed })
    }

    pub fn with_retention(p: R, seed: u64) -> Self {
        PercolationParams {
            epsilon: R::nan(),
            p,
            seed,
        }
    }
}

/// Per-vertex retention decisions as a mask. One uniform per vertex, drawn
/// by vertex index from a counter-based generator and thresholded at p, so
/// the same seed with a larger p retains a superset of vertices.
pub fn retention_mask<R: Real>(n: usize, params: &PercolationParams<R>) -> Vec<bool> {
    let p = params.p.to_f64().expect("retention probability is finite");
    assert!((0.0..=1.0).contains(&p), "retention probability {p} outside [0, 1]");
    (0..n)
        .map(|v| uniform01(params.seed, v as u64) < p)
        .collect()
}

/// The retained vertex set V_p.
pub fn site_percolate<R: Real>(g: &Graph, params: &PercolationParams<R>) -> VertexSet {
    VertexSet::from_mask(&retention_mask(g.vertex_count(), params))
}

/// Unique root in (0, 1+eps) of x = (1+eps)(1 - e^{-x}), by bisection of
/// g(x) = x - (1+eps)(1 - e^{-x}) on [tol, 1+eps]. Governs the normalized
/// giant-component order x*n/d.
pub fn solve_x<R: Real>(epsilon: R, tol: R) -> Result<R, PercolationError> {
    if !(epsilon > R::zero()) {
        return Err(PercolationError::NonPositiveEpsilon);
    }
    assert!(tol > R::zero(), "tolerance must be positive");
    let g = |x: R| x - (R::one() + epsilon) * (R::one() - (-x).exp());
    let mut lo = tol.min(R::from_f64(1e-3).unwrap());
    let mut hi = R::one() + epsilon;
    debug_assert!(g(lo) < R::zero() && g(hi) > R::zero());
    // Bisect until the defining-equation residual is inside tol.
    for _ in 0..200 {
        let mid = (lo + hi) / R::from_count(2);
        let val = g(mid);
        if val > R::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
        if val.abs() <= tol && (hi - lo) <= tol {
            break;
        }
    }
    Ok((lo + hi) / R::from_count(2))
}

/// Exact component statistics of G[kept] plus the supercritical predictions
/// for the giant component. Predictions need a regular host and a positive
/// epsilon; they stay `None` otherwise.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentStats<R> {
    /// Vertices kept by the percolation.
    pub kept: usize,
    /// Vertices in a largest component of G[kept].
    pub l1_order: usize,
    /// Edges in that component.
    pub l1_edges: usize,
    /// Sum over components of (edges - vertices + 1).
    pub total_excess: usize,
    /// Edges in components that are neither the largest component nor trees.
    pub stray_edges: usize,
    /// x * n / d.
    pub predicted_l1_order: Option<R>,
    /// ((1+eps)^2 - (1+eps-x)^2) * n / (2d).
    pub predicted_l1_edges: Option<R>,
}

const PREDICTION_TOL: f64 = 1e-12;

pub fn component_stats<R: Real>(
    g: &Graph,
    kept: &VertexSet,
    params: &PercolationParams<R>,
) -> ComponentStats<R> {
    assert!(kept.is_valid_for(g), "kept set outside vertex range");
    let n = g.vertex_count();
    let retained = kept.to_mask(n);

    let mut component = vec![u32::MAX; n];
    let mut queue: Vec<u32> = Vec::new();
    let mut orders: Vec<usize> = Vec::new();
    let mut edge_counts: Vec<usize> = Vec::new();
    for start in 0..n as u32 {
        if !retained[start as usize] || component[start as usize] != u32::MAX {
            continue;
        }
        let id = orders.len() as u32;
        component[start as usize] = id;
        queue.clear();
        queue.push(start);
        let mut order = 0usize;
        let mut endpoint_count = 0usize;
        while let Some(v) = queue.pop() {
            order += 1;
            for &w in g.adjacency(v) {
                if !retained[w as usize] {
                    continue;
                }
                endpoint_count += 1;
                if component[w as usize] == u32::MAX {
                    component[w as usize] = id;
                    queue.push(w);
                }
            }
        }
        orders.push(order);
        edge_counts.push(endpoint_count / 2);
    }

    // Largest component, ties to the earliest (smallest minimum vertex).
    let l1 = orders
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(i, _)| i);
    let (l1_order, l1_edges) = l1.map_or((0, 0), |i| (orders[i], edge_counts[i]));
    let mut total_excess = 0usize;
    let mut stray_edges = 0usize;
    for i in 0..orders.len() {
        let excess = edge_counts[i] + 1 - orders[i];
        total_excess += excess;
        if Some(i) != l1 && excess > 0 {
            stray_edges += edge_counts[i];
        }
    }

    let predictions = g.regular_degree().filter(|&d| d > 0).and_then(|d| {
        let eps = params.epsilon;
        if !(eps > R::zero()) {
            return None;
        }
        let x = solve_x(eps, R::from_f64(PREDICTION_TOL).unwrap()).ok()?;
        let n = R::from_count(n);
        let d = R::from_count(d);
        let one_eps = R::one() + eps;
        let order = x * n / d;
        let edges = (one_eps * one_eps - (one_eps - x) * (one_eps - x)) * n
            / (R::from_count(2) * d);
        Some((order, edges))
    });

    ComponentStats {
        kept: kept.len(),
        l1_order,
        l1_edges,
        total_excess,
        stray_edges,
        predicted_l1_order: predictions.map(|p| p.0),
        predicted_l1_edges: predictions.map(|p| p.1),
    }
}

/// Scaling report for the excess of the percolated graph: the observed
/// excess and its ratio to eps^3 n / d. The constant hidden in the scaling
/// claim is unspecified, so this reports a number rather than a verdict.
#[derive(Debug, Clone, Serialize)]
pub struct ExcessReport<R> {
    pub observed: usize,
    /// observed / (eps^3 n / d); `None` when the reference is degenerate.
    pub ratio: Option<R>,
}

pub fn excess_bound_report<R: Real>(
    stats: &ComponentStats<R>,
    epsilon: R,
    n: usize,
    d: usize,
) -> ExcessReport<R> {
    let observed = stats.total_excess;
    let reference = epsilon * epsilon * epsilon * R::from_count(n);
    let ratio = (epsilon > R::zero() && n > 0 && d > 0)
        .then(|| R::from_count(observed) * R::from_count(d) / reference);
    ExcessReport { observed, ratio }
}
