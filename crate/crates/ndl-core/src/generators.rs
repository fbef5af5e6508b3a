//! Graph families: seeded random regular graphs via the pairing model,
//! lexicographic products with predicted spectra, and the two explicit
//! blow-up constructions (clique blow-up with a short longest induced path,
//! independent-set blow-up with few induced-subgraph isomorphism classes).

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{families, Graph, GraphError};
use crate::num::Real;
use crate::seed::seed_derive;
use crate::spectral::{extremal_eigenvalues, SpectralError, DEFAULT_MAX_ITER};

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("n*d must be even (n={n}, d={d})")]
    ParityViolation { n: usize, d: usize },
    #[error("degree {d} too large for {n} vertices")]
    DegreeTooLarge { n: usize, d: usize },
    #[error("pairing model gave up after {0} restarts")]
    RejectionCapExceeded(usize),
    #[error("second factor of the lexicographic product must be regular")]
    HNotRegular,
    #[error("spectrum size mismatch: {0}")]
    SizeMismatch(String),
    #[error("infeasible construction: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

const RESTART_CAP: usize = 10_000;
const BASE_GRAPH_SAMPLES: u64 = 100;

/// Simple d-regular graph on n vertices from the pairing (configuration)
/// model: d stubs per vertex are repeatedly shuffled and matched; pairs that
/// would form a loop or a repeated edge are thrown back and re-matched, and
/// the whole attempt restarts when the leftover stubs cannot be completed.
/// Deterministic for a fixed seed.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph, GeneratorError> {
    if d >= n.max(1) && !(n == 0 && d == 0) {
        return Err(GeneratorError::DegreeTooLarge { n, d });
    }
    if n * d % 2 != 0 {
        return Err(GeneratorError::ParityViolation { n, d });
    }
    if d == 0 {
        return Ok(families::empty(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RESTART_CAP {
        if let Some(edges) = pairing_attempt(n, d, &mut rng) {
            return Ok(Graph::build(n, &edges)?);
        }
    }
    Err(GeneratorError::RejectionCapExceeded(RESTART_CAP))
}

fn pairing_attempt(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(u32, u32)>> {
    let mut adjacency: Vec<Vec<u32>> = vec![Vec::with_capacity(d); n];
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(n * d / 2);
    let mut stubs: Vec<u32> = (0..n as u32).flat_map(|v| std::iter::repeat(v).take(d)).collect();

    let mut stalled_passes = 0usize;
    while !stubs.is_empty() {
        stubs.shuffle(rng);
        let mut leftover = Vec::new();
        let mut progress = false;
        for pair in stubs.chunks(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a != b && !adjacency[a as usize].contains(&b) {
                adjacency[a as usize].push(b);
                adjacency[b as usize].push(a);
                edges.push((a, b));
                progress = true;
            } else {
                leftover.push(pair[0]);
                leftover.push(pair[1]);
            }
        }
        stubs = leftover;
        if !progress {
            stalled_passes += 1;
            if stalled_passes > 64 || !matchable(&stubs, &adjacency) {
                return None;
            }
        } else {
            stalled_passes = 0;
        }
    }
    Some(edges)
}

/// Whether any pair of leftover stubs could still be matched.
fn matchable(stubs: &[u32], adjacency: &[Vec<u32>]) -> bool {
    let mut distinct: Vec<u32> = stubs.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    for (i, &a) in distinct.iter().enumerate() {
        for &b in &distinct[i + 1..] {
            if !adjacency[a as usize].contains(&b) {
                return true;
            }
        }
    }
    false
}

/// Lexicographic product: every vertex of `g` is replaced by a copy of `h`,
/// with complete joins across the edges of `g`. Vertex (u, x) is flattened
/// to index u * |V(h)| + x. Requires `h` regular; if `g` is D-regular and
/// `h` is r-regular on m vertices the product is (D*m + r)-regular.
pub fn lex_product(g: &Graph, h: &Graph) -> Result<Graph, GeneratorError> {
    h.regular_degree().ok_or(GeneratorError::HNotRegular)?;
    let m = h.vertex_count();
    let n = g.vertex_count() * m;
    let mut edges = Vec::new();
    for (u, v) in g.edges() {
        for x in 0..m as u32 {
            for y in 0..m as u32 {
                edges.push((u * m as u32 + x, v * m as u32 + y));
            }
        }
    }
    for u in 0..g.vertex_count() as u32 {
        for (x, y) in h.edges() {
            edges.push((u * m as u32 + x, u * m as u32 + y));
        }
    }
    Ok(Graph::build(n, &edges)?)
}

/// Predicted multiset of eigenvalues of `lex(g, h)` given the full spectrum
/// of `g` and the nontrivial spectrum of an r-regular `h` on `m` vertices:
/// each eigenvalue of `g` contributes `lambda * m + r` once, and every
/// nontrivial eigenvalue of `h` is repeated |V(g)| times.
#[derive(Debug, Clone, Serialize)]
pub struct LexSpectrumPrediction<R> {
    pub values: Vec<R>,
    pub multiplicities: Vec<usize>,
}

impl<R: Real> LexSpectrumPrediction<R> {
    /// Expanded multiset in descending order.
    pub fn expanded(&self) -> Vec<R> {
        let mut out = Vec::new();
        for (&v, &mult) in self.values.iter().zip(&self.multiplicities) {
            out.extend(std::iter::repeat(v).take(mult));
        }
        out.sort_by(|x, y| y.partial_cmp(x).expect("no NaN eigenvalues"));
        out
    }

    pub fn total(&self) -> usize {
        self.multiplicities.iter().sum()
    }
}

pub fn predict_lex_spectrum<R: Real>(
    spectrum_g: &[R],
    nontrivial_spectrum_h: &[R],
    m: usize,
    r: usize,
) -> Result<LexSpectrumPrediction<R>, GeneratorError> {
    if nontrivial_spectrum_h.len() + 1 != m {
        return Err(GeneratorError::SizeMismatch(format!(
            "expected {} nontrivial eigenvalues for |V(H)| = {m}, got {}",
            m - 1,
            nontrivial_spectrum_h.len()
        )));
    }
    let n = spectrum_g.len();
    let mut values = Vec::with_capacity(n + m - 1);
    let mut multiplicities = Vec::with_capacity(n + m - 1);
    for &lam in spectrum_g {
        values.push(lam * R::from_count(m) + R::from_count(r));
        multiplicities.push(1);
    }
    for &mu in nontrivial_spectrum_h {
        values.push(mu);
        multiplicities.push(n);
    }
    Ok(LexSpectrumPrediction {
        values,
        multiplicities,
    })
}

/// Circulant graph on `m` vertices with connection offsets 1..=r/2, plus the
/// antipodal offset when r is odd (m must then be even). The standard way
/// this crate realizes "an arbitrary r-regular graph".
pub fn circulant_regular(m: usize, r: usize) -> Result<Graph, GeneratorError> {
    if r >= m.max(1) && !(m == 0 && r == 0) {
        return Err(GeneratorError::DegreeTooLarge { n: m, d: r });
    }
    if m * r % 2 != 0 {
        return Err(GeneratorError::ParityViolation { n: m, d: r });
    }
    let mut edges = Vec::new();
    for off in 1..=(r / 2) {
        for v in 0..m {
            let w = (v + off) % m;
            edges.push((v.min(w) as u32, v.max(w) as u32));
        }
    }
    if r % 2 == 1 {
        // r odd forces m even; each vertex gains exactly one antipodal edge.
        for v in 0..m / 2 {
            edges.push((v as u32, (v + m / 2) as u32));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let g = Graph::build(m, &edges)?;
    debug_assert_eq!(g.regular_degree(), Some(r));
    Ok(g)
}

/// Parameters a construction resolved to, reported alongside the graph.
#[derive(Debug, Clone, Serialize)]
pub struct ConstructionParams<R> {
    /// Target degree of the final graph.
    pub d: usize,
    /// Target spectral-ratio bound.
    pub delta: R,
    /// Requested vertex count.
    pub n_target: usize,
    /// Actual vertex count (rounded down to the nearest feasible value).
    pub n: usize,
    /// Base degree: smallest integer >= 3 with sqrt(d0) >= 4/delta.
    pub d0: usize,
    /// Base graph order.
    pub n0: usize,
    /// Blow-up factor, the order of the second product factor.
    pub k: usize,
    /// Quotient of d+1 by d0+1 (clique blow-up) or of d by d0 (independent
    /// blow-up).
    pub q: usize,
    /// Matching remainder.
    pub r: usize,
    /// Measured extremal eigenvalue of the accepted base graph.
    pub base_lambda: R,
    /// Base graphs sampled before one passed the spectral screen.
    pub base_samples: usize,
}

fn base_degree<R: Real>(delta: R) -> Result<usize, GeneratorError> {
    if delta <= R::zero() {
        return Err(GeneratorError::Infeasible("delta must be positive".into()));
    }
    let four = R::from_count(4);
    let bound = (four / delta) * (four / delta);
    let d0 = bound.ceil().to_usize().ok_or_else(|| {
        GeneratorError::Infeasible(format!("delta {delta} makes the base degree overflow"))
    })?;
    Ok(d0.max(3))
}

/// Sample d0-regular base graphs until one has lambda <= 3 sqrt(d0).
fn sample_base_graph<R: Real>(
    n0: usize,
    d0: usize,
    seed: u64,
) -> Result<(Graph, R, usize), GeneratorError> {
    let threshold = R::from_count(3) * R::from_count(d0).sqrt();
    for attempt in 0..BASE_GRAPH_SAMPLES {
        let h = random_regular(n0, d0, seed_derive(seed, "base-graph", attempt))?;
        let report = match extremal_eigenvalues::<R>(&h, R::from_f64(1e-8).unwrap(), DEFAULT_MAX_ITER)
        {
            Ok(r) => r,
            Err(SpectralError::NoConvergence(r)) => *r,
            Err(e) => {
                return Err(GeneratorError::Infeasible(format!(
                    "spectral screen failed: {e}"
                )))
            }
        };
        if report.lambda <= threshold {
            return Ok((h, report.lambda, attempt as usize + 1));
        }
    }
    Err(GeneratorError::Infeasible(format!(
        "no {d0}-regular base graph on {n0} vertices passed the spectral screen in {BASE_GRAPH_SAMPLES} samples"
    )))
}

/// Round `n0` down so that a d0-regular graph on n0 vertices exists.
fn feasible_base_order(n0: usize, d0: usize) -> Result<usize, GeneratorError> {
    let mut n0 = n0;
    if n0 * d0 % 2 == 1 {
        n0 -= 1;
    }
    if n0 <= d0 {
        return Err(GeneratorError::Infeasible(format!(
            "base order {n0} too small for base degree {d0}"
        )));
    }
    Ok(n0)
}

/// d-regular graph with spectral ratio at most `delta` whose longest induced
/// path has at most 2(d0+1)n/d vertices: a clique blow-up lex(H, K_k) of a
/// random d0-regular base graph. When (d0+1) does not divide (d+1) the
/// second factor is K_k with a circulant removed, with k rounded up and the
/// removed degree chosen so the product is exactly d-regular.
pub fn construct_short_path_graph<R: Real>(
    d: usize,
    delta: R,
    n_target: usize,
    seed: u64,
) -> Result<(Graph, ConstructionParams<R>), GeneratorError> {
    let d0 = base_degree(delta)?;
    if d0 > d {
        return Err(GeneratorError::Infeasible(format!(
            "target degree {d} below base degree {d0}"
        )));
    }
    let q = (d + 1) / (d0 + 1);
    let r = (d + 1) % (d0 + 1);
    let (k, factor) = if r == 0 {
        (q, families::complete(q))
    } else {
        // Blow up one vertex more than the quotient and shed the overshoot:
        // lex degree is d0 k + (k - 1 - s) with s = k (d0+1) - (d+1).
        let k = q + 1;
        (k, complete_minus_regular(k, d0 + 1 - r)?)
    };
    let n0 = feasible_base_order(n_target / k, d0)?;
    let (base, base_lambda, base_samples) = sample_base_graph::<R>(n0, d0, seed)?;
    let g = lex_product(&base, &factor)?;
    debug_assert_eq!(g.regular_degree(), Some(d));
    let params = ConstructionParams {
        d,
        delta,
        n_target,
        n: g.vertex_count(),
        d0,
        n0,
        k,
        q,
        r,
        base_lambda,
        base_samples,
    };
    Ok((g, params))
}

/// K_k with an r-regular circulant removed; (k-1-r)-regular.
fn complete_minus_regular(k: usize, r: usize) -> Result<Graph, GeneratorError> {
    if r + 1 > k {
        return Err(GeneratorError::Infeasible(format!(
            "cannot remove an {r}-regular graph from K_{k}"
        )));
    }
    let removed = circulant_regular(k, r).map_err(|e| {
        GeneratorError::Infeasible(format!("no {r}-regular graph on {k} vertices: {e}"))
    })?;
    let mut edges = Vec::new();
    for u in 0..k as u32 {
        for v in (u + 1)..k as u32 {
            if !removed.has_edge(u, v) {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::build(k, &edges)?)
}

/// d-regular graph with spectral ratio at most `delta` and few isomorphism
/// classes of induced subgraphs: an independent-set blow-up lex(H, empty)
/// of a random d0-regular base graph. When d0 does not divide d the second
/// factor is a disjoint union of cliques padded with a circulant so its
/// degree makes up the remainder; an odd quotient-remainder pair falls back
/// to one fewer blow-up vertex with degree d0 + r.
pub fn construct_low_mu_graph<R: Real>(
    d: usize,
    delta: R,
    n_target: usize,
    seed: u64,
) -> Result<(Graph, ConstructionParams<R>), GeneratorError> {
    let d0 = base_degree(delta)?;
    if d0 > d {
        return Err(GeneratorError::Infeasible(format!(
            "target degree {d} below base degree {d0}"
        )));
    }
    let q = d / d0;
    let r = d % d0;
    let factor = if r == 0 {
        families::empty(q)
    } else if q * r % 2 == 0 {
        cliques_plus_circulant(q, r)?
    } else {
        // q and r both odd: use q-1 (even) blow-up vertices of degree d0+r.
        cliques_plus_circulant(q - 1, d0 + r)?
    };
    let k = factor.vertex_count();
    let n0 = feasible_base_order(n_target / k.max(1), d0)?;
    let (base, base_lambda, base_samples) = sample_base_graph::<R>(n0, d0, seed)?;
    let g = lex_product(&base, &factor)?;
    debug_assert_eq!(g.regular_degree(), Some(d));
    let params = ConstructionParams {
        d,
        delta,
        n_target,
        n: g.vertex_count(),
        d0,
        n0,
        k,
        q,
        r,
        base_lambda,
        base_samples,
    };
    Ok((g, params))
}

/// Disjoint union of floor(q/(s+1)) - 1 cliques K_{s+1} plus an s-regular
/// circulant on the remaining vertices; s-regular on q vertices overall.
fn cliques_plus_circulant(q: usize, s: usize) -> Result<Graph, GeneratorError> {
    let clique_size = s + 1;
    if q < clique_size {
        return Err(GeneratorError::Infeasible(format!(
            "no {s}-regular graph on {q} vertices"
        )));
    }
    let cliques = (q / clique_size).saturating_sub(1);
    let remaining = q - cliques * clique_size;
    let mut edges = Vec::new();
    for c in 0..cliques {
        let start = (c * clique_size) as u32;
        for x in 0..clique_size as u32 {
            for y in (x + 1)..clique_size as u32 {
                edges.push((start + x, start + y));
            }
        }
    }
    let tail = circulant_regular(remaining, s).map_err(|e| {
        GeneratorError::Infeasible(format!(
            "no {s}-regular remainder graph on {remaining} vertices: {e}"
        ))
    })?;
    let offset = (cliques * clique_size) as u32;
    for (u, v) in tail.edges() {
        edges.push((u + offset, v + offset));
    }
    let g = Graph::build(q, &edges)?;
    debug_assert_eq!(g.regular_degree(), Some(s));
    Ok(g)
}
