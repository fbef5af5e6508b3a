//! Induced-structure search on a percolated host graph.
//!
//! The driver is a depth-first variant that reveals one retention decision
//! per step and keeps five vertex regions: unvisited vertices, an active
//! stack (which always spans an induced path), settled vertices with no
//! unvisited neighbours left, retained vertices culled for touching the
//! stack somewhere other than its top, and vertices that were simply not
//! retained. A long stack is an induced path in the host; a cycle-closing
//! step then looks for one or two outside vertices bridging the two ends of
//! the path around its middle.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::num::Real;
use crate::percolation::{retention_mask, PercolationParams};
use crate::seed::seed_derive;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("sequence is not an induced {0} in the host graph")]
    InvalidWitness(&'static str),
    #[error("path too short to close ({len} < {min})")]
    PathTooShort { len: usize, min: usize },
    #[error("no closing vertex or edge outside the path")]
    NoClosure,
    #[error("no attempt out of {0} produced an induced cycle")]
    AllRetriesFailed(usize),
    #[error("vertex order is not a permutation")]
    NotAPermutation,
}

/// Vertex sequence certified to span an induced path of its host graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InducedPath {
    vertices: Vec<u32>,
    host: u64,
}

impl InducedPath {
    pub fn new(g: &Graph, vertices: Vec<u32>) -> Result<InducedPath, SearchError> {
        if !g.is_induced_path(&vertices) {
            return Err(SearchError::InvalidWitness("path"));
        }
        Ok(InducedPath {
            vertices,
            host: g.fingerprint(),
        })
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn host_fingerprint(&self) -> u64 {
        self.host
    }
}

/// Vertex sequence certified to span an induced cycle of its host graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InducedCycle {
    vertices: Vec<u32>,
    host: u64,
}

impl InducedCycle {
    pub fn new(g: &Graph, vertices: Vec<u32>) -> Result<InducedCycle, SearchError> {
        if !g.is_induced_cycle(&vertices) {
            return Err(SearchError::InvalidWitness("cycle"));
        }
        Ok(InducedCycle {
            vertices,
            host: g.fingerprint(),
        })
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn host_fingerprint(&self) -> u64 {
        self.host
    }
}

/// Processing order sigma over the vertices.
#[derive(Debug, Clone)]
pub struct VertexOrder {
    order: Vec<u32>,
    position: Vec<u32>,
}

impl VertexOrder {
    pub fn identity(n: usize) -> VertexOrder {
        VertexOrder {
            order: (0..n as u32).collect(),
            position: (0..n as u32).collect(),
        }
    }

    /// Identity order rotated by `shift`.
    pub fn rotated(n: usize, shift: usize) -> VertexOrder {
        let order: Vec<u32> = (0..n).map(|i| ((i + shift) % n.max(1)) as u32).collect();
        VertexOrder::from_permutation(order).expect("rotation is a permutation")
    }

    pub fn seeded(n: usize, seed: u64) -> VertexOrder {
        use rand::prelude::*;
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        VertexOrder::from_permutation(order).expect("shuffle is a permutation")
    }

    pub fn from_permutation(order: Vec<u32>) -> Result<VertexOrder, SearchError> {
        let n = order.len();
        let mut position = vec![u32::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v as usize >= n || position[v as usize] != u32::MAX {
                return Err(SearchError::NotAPermutation);
            }
            position[v as usize] = i as u32;
        }
        Ok(VertexOrder { order, position })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    fn position(&self, v: u32) -> u32 {
        self.position[v as usize]
    }
}

/// Which of the five regions a vertex currently belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    /// Not processed yet.
    Unvisited,
    /// On the active stack; the stack spans an induced path at all times.
    Stack,
    /// Retained, fully processed, no unvisited neighbours at retirement.
    Settled,
    /// Retained but discarded: adjacent to the stack below its top.
    Culled,
    /// Not retained by the percolation.
    Absent,
}

/// Full state of a search run. Regions partition the vertex set; the number
/// of vertices outside `Unvisited` equals the number of revealed retention
/// decisions.
#[derive(Debug, Clone)]
pub struct DfsState {
    region: Vec<Region>,
    stack: Vec<u32>,
    counts: [usize; 5],
    exposures: usize,
    cursor: usize,
}

impl DfsState {
    fn new(n: usize) -> DfsState {
        DfsState {
            region: vec![Region::Unvisited; n],
            stack: Vec::new(),
            counts: [n, 0, 0, 0, 0],
            exposures: 0,
            cursor: 0,
        }
    }

    pub fn region(&self, v: u32) -> Region {
        self.region[v as usize]
    }

    /// Active stack, bottom to top.
    pub fn stack(&self) -> &[u32] {
        &self.stack
    }

    pub fn exposures(&self) -> usize {
        self.exposures
    }

    pub fn unvisited_count(&self) -> usize {
        self.counts[0]
    }

    pub fn stack_len(&self) -> usize {
        self.counts[1]
    }

    pub fn settled_count(&self) -> usize {
        self.counts[2]
    }

    pub fn culled_count(&self) -> usize {
        self.counts[3]
    }

    pub fn absent_count(&self) -> usize {
        self.counts[4]
    }

    fn move_region(&mut self, v: u32, to: Region) {
        let from = self.region[v as usize];
        self.counts[from as usize] -= 1;
        self.counts[to as usize] += 1;
        self.region[v as usize] = to;
    }
}

/// One state transition, reported to the observer right after it happens.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DfsEvent {
    /// A retention decision was revealed for `vertex`, moving it out of the
    /// unvisited region into `outcome`.
    Exposed { vertex: u32, outcome: Region },
    /// The stack top retired into the settled region (no decision revealed).
    Settled { vertex: u32 },
}

/// Run the search using percolation parameters for the retention decisions.
pub fn dfs_induced_path<R: Real>(
    g: &Graph,
    params: &PercolationParams<R>,
    order: &VertexOrder,
    step_budget: usize,
) -> (InducedPath, DfsState) {
    let retained = retention_mask(g.vertex_count(), params);
    dfs_with_mask(g, &retained, order, step_budget, |_, _| {})
}

/// Run the search against an explicit retention mask; the observer sees
/// every state transition in order.
pub fn dfs_with_mask(
    g: &Graph,
    retained: &[bool],
    order: &VertexOrder,
    step_budget: usize,
    mut observer: impl FnMut(&DfsState, DfsEvent),
) -> (InducedPath, DfsState) {
    let n = g.vertex_count();
    assert_eq!(retained.len(), n, "mask length must match vertex count");
    assert_eq!(order.len(), n, "order length must match vertex count");
    let mut state = DfsState::new(n);
    let mut best: Vec<u32> = Vec::new();

    loop {
        // Retire stack tops without unvisited neighbours; no decision is
        // revealed by these moves.
        while let Some(&top) = state.stack.last() {
            if first_unvisited_neighbor(g, order, &state, top).is_some() {
                break;
            }
            if state.stack.len() > best.len() {
                best = state.stack.clone();
            }
            state.stack.pop();
            state.move_region(top, Region::Settled);
            observer(&state, DfsEvent::Settled { vertex: top });
        }
        if state.exposures >= step_budget {
            break;
        }
        let target = match state.stack.last().copied() {
            None => match next_unvisited(order, &mut state) {
                Some(v) => v,
                None => break,
            },
            Some(top) => first_unvisited_neighbor(g, order, &state, top)
                .expect("retire loop leaves a top with an unvisited neighbour"),
        };
        let outcome = if !retained[target as usize] {
            Region::Absent
        } else if has_stack_neighbor_below_top(g, &state, target) {
            Region::Culled
        } else {
            state.stack.push(target);
            Region::Stack
        };
        state.move_region(target, outcome);
        state.exposures += 1;
        observer(&state, DfsEvent::Exposed { vertex: target, outcome });
    }

    if state.stack.len() > best.len() {
        best = state.stack.clone();
    }
    let path = InducedPath::new(g, best).expect("stack spans an induced path");
    (path, state)
}

fn next_unvisited(order: &VertexOrder, state: &mut DfsState) -> Option<u32> {
    while state.cursor < order.order.len() {
        let v = order.order[state.cursor];
        if state.region(v) == Region::Unvisited {
            return Some(v);
        }
        state.cursor += 1;
    }
    None
}

fn first_unvisited_neighbor(
    g: &Graph,
    order: &VertexOrder,
    state: &DfsState,
    v: u32,
) -> Option<u32> {
    g.adjacency(v)
        .iter()
        .copied()
        .filter(|&w| state.region(w) == Region::Unvisited)
        .min_by_key(|&w| order.position(w))
}

/// Whether `v` touches the stack anywhere other than the current top.
fn has_stack_neighbor_below_top(g: &Graph, state: &DfsState, v: u32) -> bool {
    let top = state.stack.last().copied();
    g.adjacency(v)
        .iter()
        .any(|&w| state.region(w) == Region::Stack && Some(w) != top)
}

/// One supercritical percolation-plus-search pass: retention probability
/// (1+eps)/d, identity order, eps*n revealed decisions. The returned path is
/// induced in the host graph itself.
pub fn percolated_path_run<R: Real>(g: &Graph, epsilon: R, seed: u64) -> InducedPath {
    let d = g.regular_degree().expect("host graph must be regular");
    assert!(d > 0, "host graph must have positive degree");
    let params = PercolationParams::supercritical(epsilon, d, seed).expect("positive epsilon");
    let budget = (epsilon.to_f64().expect("finite epsilon") * g.vertex_count() as f64) as usize;
    let order = VertexOrder::identity(g.vertex_count());
    dfs_induced_path(g, &params, &order, budget).0
}

/// Minimum path length accepted by [`close_cycle`]; keeps every segment
/// nonempty after integer division.
pub const MIN_CLOSABLE_PATH: usize = 60;

/// The path segments and candidate pools used to close a path into a cycle.
#[derive(Debug, Clone)]
pub struct CycleSegments {
    /// First third of the path, in path order.
    pub prefix: Vec<u32>,
    /// Last third of the path, in path order.
    pub suffix: Vec<u32>,
    /// Middle stretch of 2*floor(k/20) vertices around the path midpoint.
    pub middle: Vec<u32>,
    /// Prefix neighbours outside the path and the middle's neighbourhood.
    pub prefix_pool: VertexSet,
    /// Suffix neighbours outside the path and the middle's neighbourhood.
    pub suffix_pool: VertexSet,
}

pub fn cycle_segments(g: &Graph, path: &InducedPath) -> Result<CycleSegments, SearchError> {
    let k = path.len();
    if k < MIN_CLOSABLE_PATH {
        return Err(SearchError::PathTooShort {
            len: k,
            min: MIN_CLOSABLE_PATH,
        });
    }
    debug_assert_eq!(path.host_fingerprint(), g.fingerprint(), "foreign host");
    let verts = path.vertices();
    let third = k / 3;
    let half_mid = k / 20;
    let mid_start = k / 2 - half_mid; // inclusive, 0-based
    let mid_end = k / 2 + half_mid - 1; // inclusive, 0-based

    let prefix = verts[..third].to_vec();
    let suffix = verts[k - third..].to_vec();
    let middle = verts[mid_start..=mid_end].to_vec();

    let on_path = VertexSet::new(verts.to_vec()).to_mask(g.vertex_count());
    let near_middle =
        g.external_neighbourhood(&VertexSet::new(middle.clone())).to_mask(g.vertex_count());
    let pool = |segment: &[u32]| {
        let reach = g.external_neighbourhood(&VertexSet::new(segment.to_vec()));
        VertexSet::new(
            reach
                .iter()
                .filter(|&v| !on_path[v as usize] && !near_middle[v as usize])
                .collect(),
        )
    };
    Ok(CycleSegments {
        prefix_pool: pool(&prefix),
        suffix_pool: pool(&suffix),
        prefix,
        suffix,
        middle,
    })
}

/// Close a long induced path into an induced cycle through its middle
/// stretch. Preferred closure is a single vertex adjacent to both the
/// prefix and the suffix pools (smallest index); otherwise the
/// lexicographically smallest edge between the pools. Every returned cycle
/// is re-validated, spans at least the middle stretch, and is induced in
/// the host graph.
pub fn close_cycle(g: &Graph, path: &InducedPath) -> Result<InducedCycle, SearchError> {
    let segments = cycle_segments(g, path)?;
    let verts = path.vertices();
    let k = verts.len();
    let mid_start = k / 2 - k / 20;
    let mid_end = k / 2 + k / 20 - 1;
    let mut position = vec![u32::MAX; g.vertex_count()];
    for (i, &v) in verts.iter().enumerate() {
        position[v as usize] = i as u32;
    }
    // Positions of a candidate's path neighbours strictly before and after
    // the middle stretch. Pool members never touch the middle itself.
    let side_positions = |u: u32| {
        let mut before: Option<usize> = None;
        let mut after: Option<usize> = None;
        for &w in g.adjacency(u) {
            let p = position[w as usize];
            if p == u32::MAX {
                continue;
            }
            let p = p as usize;
            debug_assert!(!(mid_start..=mid_end).contains(&p));
            if p < mid_start {
                before = Some(before.map_or(p, |b: usize| b.max(p)));
            } else {
                after = Some(after.map_or(p, |a: usize| a.min(p)));
            }
        }
        (before, after)
    };
    let single_closure = |u: u32| -> Option<InducedCycle> {
        let (before, after) = side_positions(u);
        let (w1, w2) = (before?, after?);
        let mut cycle = verts[w1..=w2].to_vec();
        cycle.push(u);
        let cycle = InducedCycle::new(g, cycle).expect("single-vertex closure is induced");
        debug_assert!(cycle.len() >= segments.middle.len());
        Some(cycle)
    };

    // Case 1: a vertex seen from both pools closes on its own.
    if let Some(u) = segments
        .prefix_pool
        .iter()
        .find(|&u| segments.suffix_pool.contains(u))
    {
        return Ok(single_closure(u).expect("pool member reaches both sides"));
    }

    // Case 2: the lexicographically smallest pool-to-pool edge.
    for u1 in segments.prefix_pool.iter() {
        let u2 = g
            .adjacency(u1)
            .iter()
            .copied()
            .find(|&w| segments.suffix_pool.contains(w));
        let Some(u2) = u2 else { continue };
        // Either endpoint may happen to reach around the middle by itself;
        // a lone closure stays induced where the two-vertex bridge may not.
        if let Some(cycle) = single_closure(u1) {
            return Ok(cycle);
        }
        if let Some(cycle) = single_closure(u2) {
            return Ok(cycle);
        }
        let (w1, _) = side_positions(u1);
        let (_, w2) = side_positions(u2);
        let (w1, w2) = (
            w1.expect("prefix pool member has a prefix neighbour"),
            w2.expect("suffix pool member has a suffix neighbour"),
        );
        let mut cycle = verts[w1..=w2].to_vec();
        cycle.push(u2);
        cycle.push(u1);
        let cycle = InducedCycle::new(g, cycle).expect("two-vertex closure is induced");
        debug_assert!(cycle.len() >= segments.middle.len());
        return Ok(cycle);
    }
    Err(SearchError::NoClosure)
}

/// Outcome of the retrying path-then-cycle pipeline.
#[derive(Debug, Clone, Serialize)]
pub struct CycleSearchOutcome<R> {
    pub cycle: InducedCycle,
    /// Attempts consumed, including the successful one.
    pub attempts: usize,
    /// Requested cycle length eps^2 n / (30 d).
    pub target: R,
    /// True when every attempt fell short of the target and the longest
    /// cycle found is returned instead.
    pub shortfall: bool,
}

/// Repeatedly percolate, search for a path, and close it, with seeds derived
/// per attempt; returns the first cycle reaching eps^2 n / (30 d) vertices,
/// or the longest one found flagged as a shortfall.
pub fn find_long_induced_cycle<R: Real>(
    g: &Graph,
    epsilon: R,
    seed: u64,
    retries: usize,
) -> Result<CycleSearchOutcome<R>, SearchError> {
    let d = g.regular_degree().expect("host graph must be regular");
    assert!(d > 0, "host graph must have positive degree");
    let n = g.vertex_count();
    let target =
        epsilon * epsilon * R::from_count(n) / (R::from_count(30) * R::from_count(d));
    let attempts_cap = retries.max(1);
    let mut best: Option<InducedCycle> = None;
    for attempt in 0..attempts_cap {
        let run_seed = seed_derive(seed, "cycle-attempt", attempt as u64);
        let path = percolated_path_run(g, epsilon, run_seed);
        let Ok(cycle) = close_cycle(g, &path) else {
            continue;
        };
        if R::from_count(cycle.len()) >= target {
            return Ok(CycleSearchOutcome {
                cycle,
                attempts: attempt + 1,
                target,
                shortfall: false,
            });
        }
        if best.as_ref().map_or(true, |b| cycle.len() > b.len()) {
            best = Some(cycle);
        }
    }
    match best {
        Some(cycle) => Ok(CycleSearchOutcome {
            cycle,
            attempts: attempts_cap,
            target,
            shortfall: true,
        }),
        None => Err(SearchError::AllRetriesFailed(attempts_cap)),
    }
}

/// Certificate for a lower bound on the number of isomorphism classes of
/// induced subgraphs, with the bound carried in log2 form:
/// `|spaced| * log2(d/10) - 1`, or 0 when the certificate is vacuous
/// (`spaced` empty or d < 10).
#[derive(Debug, Clone, Serialize)]
pub struct MuCertificate<R> {
    pub path: InducedPath,
    /// Vertices off the path with exactly one path neighbour.
    pub unique_neighbors: VertexSet,
    /// Path vertices with at least ceil(d/10) unique-neighbour contacts, in
    /// path order.
    pub heavy: Vec<u32>,
    /// Greedy subset of `heavy` with pairwise path distance >= 4, skipping
    /// the two outermost vertices on each end.
    pub spaced: Vec<u32>,
    pub log2_bound: R,
}

pub fn mu_lower_certificate<R: Real>(g: &Graph, path: &InducedPath) -> MuCertificate<R> {
    let d = g.regular_degree().expect("host graph must be regular");
    let k = path.len();
    assert!(k >= 5, "certificate needs a path on at least 5 vertices");
    debug_assert_eq!(path.host_fingerprint(), g.fingerprint(), "foreign host");

    let verts = path.vertices();
    let mut position = vec![u32::MAX; g.vertex_count()];
    for (i, &v) in verts.iter().enumerate() {
        position[v as usize] = i as u32;
    }

    let mut unique = Vec::new();
    let mut contacts = vec![0usize; k];
    for v in 0..g.vertex_count() as u32 {
        if position[v as usize] != u32::MAX {
            continue;
        }
        let mut on_path = g
            .adjacency(v)
            .iter()
            .filter(|&&w| position[w as usize] != u32::MAX);
        match (on_path.next(), on_path.next()) {
            (Some(&w), None) => {
                unique.push(v);
                contacts[position[w as usize] as usize] += 1;
            }
            _ => {}
        }
    }

    let threshold = d.div_ceil(10);
    let heavy: Vec<u32> = if d < 10 {
        Vec::new()
    } else {
        (0..k).filter(|&i| contacts[i] >= threshold).map(|i| verts[i]).collect()
    };

    let mut spaced = Vec::new();
    let mut last_position: Option<usize> = None;
    for &w in &heavy {
        let pos = position[w as usize] as usize;
        if pos <= 1 || pos >= k - 2 {
            continue;
        }
        if last_position.map_or(true, |prev| pos >= prev + 4) {
            spaced.push(w);
            last_position = Some(pos);
        }
    }

    let log2_bound = if spaced.is_empty() || d < 10 {
        R::zero()
    } else {
        R::from_count(spaced.len()) * (R::from_count(d) / R::from_count(10)).log2() - R::one()
    };

    MuCertificate {
        path: path.clone(),
        unique_neighbors: VertexSet::new(unique),
        heavy,
        spaced,
        log2_bound,
    }
}

/// Incremental validator for every invariant the search state promises,
/// meant to be plugged in as a [`dfs_with_mask`] observer. Cheap exact
/// checks run on every transition; `verify_full` recomputes everything from
/// scratch and is called periodically and at the end of a run.
pub struct DfsInvariantChecker<'g> {
    g: &'g Graph,
    retained: Vec<bool>,
    /// Per-vertex count of unvisited neighbours.
    unvisited_degree: Vec<usize>,
    union_find: UnionFind,
    explored_retained: usize,
    explored_edges: usize,
    explored_components: usize,
    full_check_stride: usize,
    events_seen: usize,
    pub violations: Vec<String>,
}

impl<'g> DfsInvariantChecker<'g> {
    pub fn new(g: &'g Graph, retained: &[bool], full_check_stride: usize) -> Self {
        DfsInvariantChecker {
            g,
            retained: retained.to_vec(),
            unvisited_degree: (0..g.vertex_count() as u32).map(|v| g.degree(v)).collect(),
            union_find: UnionFind::new(g.vertex_count()),
            explored_retained: 0,
            explored_edges: 0,
            explored_components: 0,
            full_check_stride: full_check_stride.max(1),
            events_seen: 0,
            violations: Vec::new(),
        }
    }

    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn fail(&mut self, message: String) {
        self.violations.push(message);
    }

    pub fn observe(&mut self, state: &DfsState, event: DfsEvent) {
        self.events_seen += 1;
        match event {
            DfsEvent::Settled { vertex } => {
                // Settling must only happen with no unvisited neighbours
                // left; unvisited degrees never grow, so this stays true.
                if self.unvisited_degree[vertex as usize] != 0 {
                    self.fail(format!("vertex {vertex} settled while seeing unvisited vertices"));
                }
                if state.region(vertex) != Region::Settled {
                    self.fail(format!("settle event left vertex {vertex} in {:?}", state.region(vertex)));
                }
            }
            DfsEvent::Exposed { vertex, outcome } => {
                if self.retained[vertex as usize] == (outcome == Region::Absent) {
                    self.fail(format!("vertex {vertex} landed in {outcome:?} against its mask"));
                }
                for &w in self.g.adjacency(vertex) {
                    self.unvisited_degree[w as usize] -= 1;
                }
                if outcome != Region::Absent {
                    self.explored_retained += 1;
                    self.explored_components += 1;
                    for &w in self.g.adjacency(vertex) {
                        if matches!(
                            state.region(w),
                            Region::Stack | Region::Settled | Region::Culled
                        ) && w != vertex
                        {
                            self.explored_edges += 1;
                            if self.union_find.union(vertex as usize, w as usize) {
                                self.explored_components -= 1;
                            }
                        }
                    }
                }
                self.check_exposure(state, vertex, outcome);
            }
        }
        if self.events_seen % self.full_check_stride == 0 {
            self.verify_full(state);
        }
    }

    /// Exact per-exposure checks with maintained counters.
    fn check_exposure(&mut self, state: &DfsState, vertex: u32, outcome: Region) {
        // Revealed decisions account for every processed vertex.
        let processed =
            state.stack_len() + state.settled_count() + state.culled_count() + state.absent_count();
        if processed != state.exposures() {
            self.fail(format!(
                "{} processed vertices after {} exposures",
                processed,
                state.exposures()
            ));
        }
        // Stack extension keeps the induced-path shape: the new top touches
        // only the previous top.
        if outcome == Region::Stack && state.stack_len() >= 2 {
            let stack = state.stack();
            let prev = stack[stack.len() - 2];
            if !self.g.has_edge(vertex, prev) {
                self.fail(format!("stack push {vertex} not adjacent to previous top {prev}"));
            }
            let extra = self
                .g
                .adjacency(vertex)
                .iter()
                .filter(|&&w| state.region(w) == Region::Stack && w != prev && w != vertex)
                .count();
            if extra > 0 {
                self.fail(format!("stack push {vertex} touches the stack {extra} times below the top"));
            }
        }
        // A culled vertex really does touch the stack below its top.
        if outcome == Region::Culled {
            let top = state.stack().last().copied();
            let touches = self
                .g
                .adjacency(vertex)
                .iter()
                .any(|&w| state.region(w) == Region::Stack && Some(w) != top);
            if !touches {
                self.fail(format!("vertex {vertex} culled without a below-top stack contact"));
            }
        }
        // Culled vertices never outnumber the excess of the explored
        // retained subgraph.
        let excess = (self.explored_edges + self.explored_components)
            .saturating_sub(self.explored_retained);
        if state.culled_count() > excess {
            self.fail(format!(
                "{} culled vertices exceed explored excess {excess}",
                state.culled_count()
            ));
        }
    }

    /// Recompute every invariant from scratch against the graph.
    pub fn verify_full(&mut self, state: &DfsState) {
        let n = self.g.vertex_count();
        // Region counts match the tags, and the five regions partition V.
        let mut counts = [0usize; 5];
        for v in 0..n as u32 {
            counts[state.region(v) as usize] += 1;
        }
        let expected = [
            state.unvisited_count(),
            state.stack_len(),
            state.settled_count(),
            state.culled_count(),
            state.absent_count(),
        ];
        if counts != expected {
            self.fail(format!("region counts {counts:?} disagree with state {expected:?}"));
        }
        if counts.iter().sum::<usize>() != n {
            self.fail("regions do not partition the vertex set".into());
        }
        if n - state.unvisited_count() != state.exposures() {
            self.fail(format!(
                "{} processed vertices after {} exposures",
                n - state.unvisited_count(),
                state.exposures()
            ));
        }
        // Stack content: marked consistently and spanning an induced path.
        for &v in state.stack() {
            if state.region(v) != Region::Stack {
                self.fail(format!("stack vertex {v} tagged {:?}", state.region(v)));
            }
        }
        if !self.g.is_induced_path(state.stack()) {
            self.fail(format!("stack {:?} is not an induced path", state.stack()));
        }
        // No settled vertex still sees an unvisited one.
        for v in 0..n as u32 {
            if state.region(v) == Region::Settled {
                for &w in self.g.adjacency(v) {
                    if state.region(w) == Region::Unvisited {
                        self.fail(format!("settled vertex {v} adjacent to unvisited {w}"));
                    }
                }
            }
        }
        // Culled count against the excess of the explored retained subgraph,
        // recomputed by a scan.
        let explored: Vec<u32> = (0..n as u32)
            .filter(|&v| {
                matches!(
                    state.region(v),
                    Region::Stack | Region::Settled | Region::Culled
                )
            })
            .collect();
        let explored_set = VertexSet::from_sorted(explored);
        let (sub, _) = self.g.induced_subgraph(&explored_set);
        let excess = sub.excess();
        if state.culled_count() > excess {
            self.fail(format!(
                "{} culled vertices exceed recomputed excess {excess}",
                state.culled_count()
            ));
        }
        if excess
            != (self.explored_edges + self.explored_components)
                .saturating_sub(self.explored_retained)
        {
            self.fail("incremental excess tracking diverged from the scan".into());
        }
    }
}

struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut cur = x;
        while self.parent[cur] as usize != cur {
            let next = self.parent[cur] as usize;
            self.parent[cur] = root as u32;
            cur = next;
        }
        root
    }

    /// Returns true when two distinct classes merged.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big as u32;
        self.size[big] += self.size[small];
        true
    }
}
