//! Immutable simple-graph representation and the set primitives the rest of
//! the crate is built on: edge counts between sets, external neighbourhoods,
//! connected components, excess, induced subgraphs and induced path/cycle
//! validation.

use serde::Serialize;
use thiserror::Error;

use crate::seed::splitmix_finalize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(u32, u32),
    #[error("vertex index {index} out of range for graph on {n} vertices")]
    IndexOutOfRange { index: u32, n: usize },
}

/// Finite simple undirected graph in CSR form. Vertices are dense 0-based
/// indices; each adjacency slice is strictly increasing; the structure is
/// immutable after construction and safe to share across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    m: usize,
    fingerprint: u64,
}

impl Graph {
    /// Build a graph from an edge list. Endpoints must be in range, loops
    /// and repeated edges (in either orientation) are rejected.
    pub fn build(n: usize, edges: &[(u32, u32)]) -> Result<Graph, GraphError> {
        let mut normalized = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u as usize >= n {
                return Err(GraphError::IndexOutOfRange { index: u, n });
            }
            if v as usize >= n {
                return Err(GraphError::IndexOutOfRange { index: v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        for w in normalized.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
            }
        }

        let mut degree = vec![0usize; n];
        for &(u, v) in &normalized {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor = offsets.clone();
        let mut neighbors = vec![0u32; acc];
        for &(u, v) in &normalized {
            neighbors[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            neighbors[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        // Rows come out sorted except for the mixed insertion order above.
        for v in 0..n {
            neighbors[offsets[v]..offsets[v + 1]].sort_unstable();
        }

        let mut fp = splitmix_finalize(n as u64 ^ 0x6E64_6C5F_6772_6170);
        for v in 0..n {
            fp = splitmix_finalize(fp ^ (offsets[v + 1] - offsets[v]) as u64);
            for &w in &neighbors[offsets[v]..offsets[v + 1]] {
                fp = splitmix_finalize(fp ^ u64::from(w));
            }
        }

        Ok(Graph {
            n,
            offsets,
            neighbors,
            m: normalized.len(),
            fingerprint: fp,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    /// Cheap identity token; two structurally equal graphs built by the same
    /// code path share it. Used by path/cycle certificates to remember which
    /// host they were validated against.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Sorted neighbours of `v`.
    pub fn adjacency(&self, v: u32) -> &[u32] {
        let v = v as usize;
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adjacency(v).len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adjacency(u).binary_search(&v).is_ok()
    }

    /// Iterator over edges as (u, v) with u < v, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n as u32).flat_map(move |u| {
            self.adjacency(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Common degree if the graph is regular, `None` otherwise.
    pub fn regular_degree(&self) -> Option<usize> {
        if self.n == 0 {
            return Some(0);
        }
        let d = self.degree(0);
        (1..self.n as u32).all(|v| self.degree(v) == d).then_some(d)
    }

    /// Number of ordered incidences between `a` and `b`: every edge with one
    /// endpoint in `a` and the other in `b`, counted from both sides when
    /// both endpoints lie in the intersection. In particular
    /// `edges_between(g, s, s) == 2 * edges_within(g, s)`.
    pub fn edges_between(&self, a: &VertexSet, b: &VertexSet) -> usize {
        debug_assert!(a.is_valid_for(self) && b.is_valid_for(self));
        let mask_b = b.to_mask(self.n);
        a.iter()
            .map(|u| {
                self.adjacency(u)
                    .iter()
                    .filter(|&&w| mask_b[w as usize])
                    .count()
            })
            .sum()
    }

    /// Number of edges with both endpoints in `s`.
    pub fn edges_within(&self, s: &VertexSet) -> usize {
        let between = self.edges_between(s, s);
        debug_assert!(between % 2 == 0);
        between / 2
    }

    /// External neighbourhood: vertices outside `a` adjacent to some vertex
    /// of `a`.
    pub fn external_neighbourhood(&self, a: &VertexSet) -> VertexSet {
        debug_assert!(a.is_valid_for(self));
        let in_a = a.to_mask(self.n);
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for u in a.iter() {
            for &w in self.adjacency(u) {
                if !in_a[w as usize] && !seen[w as usize] {
                    seen[w as usize] = true;
                    out.push(w);
                }
            }
        }
        out.sort_unstable();
        VertexSet::from_sorted(out)
    }

    /// Induced subgraph on `s` with an order-preserving index map: new index
    /// `i` corresponds to the `i`-th smallest member of `s`.
    pub fn induced_subgraph(&self, s: &VertexSet) -> (Graph, Vec<u32>) {
        debug_assert!(s.is_valid_for(self));
        let map: Vec<u32> = s.iter().collect();
        let mut new_index = vec![u32::MAX; self.n];
        for (i, &old) in map.iter().enumerate() {
            new_index[old as usize] = i as u32;
        }
        let mut edges = Vec::new();
        for (i, &old) in map.iter().enumerate() {
            for &w in self.adjacency(old) {
                let j = new_index[w as usize];
                if j != u32::MAX && (i as u32) < j {
                    edges.push((i as u32, j));
                }
            }
        }
        let sub = Graph::build(map.len(), &edges).expect("induced subgraph is simple");
        (sub, map)
    }

    /// Connected components; component 0 is a largest component, ties broken
    /// by the smallest minimum vertex index.
    pub fn connected_components(&self) -> ComponentLabeling {
        let mut label = vec![u32::MAX; self.n];
        let mut sizes = Vec::new();
        let mut queue = Vec::new();
        for start in 0..self.n as u32 {
            if label[start as usize] != u32::MAX {
                continue;
            }
            let id = sizes.len() as u32;
            let mut size = 0usize;
            queue.clear();
            queue.push(start);
            label[start as usize] = id;
            while let Some(v) = queue.pop() {
                size += 1;
                for &w in self.adjacency(v) {
                    if label[w as usize] == u32::MAX {
                        label[w as usize] = id;
                        queue.push(w);
                    }
                }
            }
            sizes.push(size);
        }
        // Promote the largest component (first occurrence wins ties, which is
        // the one containing the smallest vertex) to id 0.
        if let Some(best) = sizes
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.cmp(y.1).then(y.0.cmp(&x.0)))
            .map(|(i, _)| i)
        {
            if best != 0 {
                for l in label.iter_mut() {
                    let old = *l as usize;
                    *l = match old {
                        o if o == best => 0,
                        o if o < best => (o + 1) as u32,
                        o => o as u32,
                    };
                }
                let moved = sizes.remove(best);
                sizes.insert(0, moved);
            }
        }
        ComponentLabeling {
            count: sizes.len(),
            label,
            sizes,
        }
    }

    /// Sum over components of (edges - vertices + 1). Zero exactly for
    /// forests.
    pub fn excess(&self) -> usize {
        let comps = self.connected_components();
        self.m + comps.count - self.n
    }

    /// True iff `seq` lists distinct vertices where consecutive pairs are
    /// adjacent and no other pair is. Empty and single-vertex sequences
    /// qualify.
    pub fn is_induced_path(&self, seq: &[u32]) -> bool {
        self.check_sequence(seq, false)
    }

    /// True iff `seq` lists >= 3 distinct vertices forming a chordless cycle
    /// in the given cyclic order.
    pub fn is_induced_cycle(&self, seq: &[u32]) -> bool {
        seq.len() >= 3 && self.check_sequence(seq, true)
    }

    fn check_sequence(&self, seq: &[u32], cyclic: bool) -> bool {
        let k = seq.len();
        let mut pos = vec![u32::MAX; self.n];
        for (i, &v) in seq.iter().enumerate() {
            if v as usize >= self.n || pos[v as usize] != u32::MAX {
                return false;
            }
            pos[v as usize] = i as u32;
        }
        for (i, &v) in seq.iter().enumerate() {
            let mut path_neighbors = 0usize;
            for &w in self.adjacency(v) {
                let j = pos[w as usize];
                if j == u32::MAX {
                    continue;
                }
                let j = j as usize;
                let adjacent_on_seq = if cyclic {
                    (i + 1) % k == j || (j + 1) % k == i
                } else {
                    i + 1 == j || j + 1 == i
                };
                if !adjacent_on_seq {
                    return false;
                }
                path_neighbors += 1;
            }
            // Consecutive pairs must actually be edges.
            let expected = if cyclic {
                2
            } else if k == 1 {
                0
            } else if i == 0 || i == k - 1 {
                1
            } else {
                2
            };
            if path_neighbors != expected {
                return false;
            }
        }
        true
    }
}

/// Set of vertex indices, stored sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexSet {
    members: Vec<u32>,
}

impl VertexSet {
    pub fn new(mut members: Vec<u32>) -> VertexSet {
        members.sort_unstable();
        members.dedup();
        VertexSet { members }
    }

    /// `members` must already be strictly increasing.
    pub fn from_sorted(members: Vec<u32>) -> VertexSet {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        VertexSet { members }
    }

    pub fn empty() -> VertexSet {
        VertexSet { members: Vec::new() }
    }

    pub fn full(n: usize) -> VertexSet {
        VertexSet {
            members: (0..n as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.members
    }

    pub fn is_valid_for(&self, g: &Graph) -> bool {
        self.members.last().map_or(true, |&v| (v as usize) < g.vertex_count())
    }

    pub fn to_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &v in &self.members {
            mask[v as usize] = true;
        }
        mask
    }

    pub fn from_mask(mask: &[bool]) -> VertexSet {
        VertexSet {
            members: mask
                .iter()
                .enumerate()
                .filter_map(|(i, &b)| b.then_some(i as u32))
                .collect(),
        }
    }
}

impl FromIterator<u32> for VertexSet {
    fn from_iter<T: IntoIterator<Item = u32>>(iter: T) -> Self {
        VertexSet::new(iter.into_iter().collect())
    }
}

/// Per-vertex component ids with component sizes; ids are contiguous in
/// [0, count) and sizes sum to the vertex count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabeling {
    pub label: Vec<u32>,
    pub count: usize,
    pub sizes: Vec<usize>,
}

impl ComponentLabeling {
    pub fn members_of(&self, id: u32) -> Vec<u32> {
        self.label
            .iter()
            .enumerate()
            .filter_map(|(v, &l)| (l == id).then_some(v as u32))
            .collect()
    }
}

/// Convenience constructors used all over the tests and generators.
pub mod families {
    use super::Graph;

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                edges.push((u, v));
            }
        }
        Graph::build(n, &edges).expect("complete graph")
    }

    pub fn empty(n: usize) -> Graph {
        Graph::build(n, &[]).expect("empty graph")
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n as u32).map(|v| (v - 1, v)).collect();
        Graph::build(n, &edges).expect("path graph")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut edges: Vec<_> = (1..n as u32).map(|v| (v - 1, v)).collect();
        edges.push((0, n as u32 - 1));
        Graph::build(n, &edges).expect("cycle graph")
    }

    pub fn petersen() -> Graph {
        let mut edges = vec![];
        for i in 0..5u32 {
            edges.push((i, (i + 1) % 5)); // outer 5-cycle
            edges.push((i, i + 5)); // spokes
            edges.push((i + 5, (i + 2) % 5 + 5)); // inner pentagram
        }
        Graph::build(10, &edges).expect("petersen graph")
    }
}
