//! Brute-force ground truth at small scale: exact longest induced paths and
//! cycles, exact counts of induced-subgraph isomorphism classes via canonical
//! forms, and dense spectra via cyclic Jacobi. Everything here is
//! deliberately independent of the iterative and randomized code paths it is
//! used to verify.

use std::collections::HashSet;

use thiserror::Error;

use crate::graph::Graph;
use crate::num::Real;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph on {n} vertices exceeds the oracle budget of {max}")]
    TooLarge { n: usize, max: usize },
}

pub const MAX_EXACT_SEARCH: usize = 30;
pub const MAX_MU: usize = 12;
pub const MAX_DENSE_SPECTRUM: usize = 256;

/// Isomorphism-class key: vertex count plus the upper-triangle adjacency
/// bits of the lexicographically minimal relabeling. Bits are laid out
/// column by column -- all pairs (i, k) with i < k appear before any pair
/// involving k+1 -- packed from the most significant bit of the word down,
/// so integer order on `bits` is lexicographic order on the bit string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n: u8,
    pub bits: u128,
}

impl CanonicalForm {
    pub fn of(g: &Graph) -> Result<CanonicalForm, OracleError> {
        let n = g.vertex_count();
        if n > MAX_MU + 4 {
            return Err(OracleError::TooLarge { n, max: MAX_MU + 4 });
        }
        let rows: Vec<u16> = (0..n as u32)
            .map(|v| {
                g.adjacency(v)
                    .iter()
                    .fold(0u16, |acc, &w| acc | 1 << w)
            })
            .collect();
        Ok(CanonicalForm {
            n: n as u8,
            bits: canonical_bits(&rows),
        })
    }
}

/// Minimal column-major upper-triangle bit string over all vertex orderings.
/// Backtracking over placements with prefix pruning; a greedy first pass
/// seeds the incumbent so most branches die immediately.
fn canonical_bits(rows: &[u16]) -> u128 {
    let n = rows.len();
    if n <= 1 {
        return 0;
    }
    let total_bits = n * (n - 1) / 2;

    // Greedy incumbent: repeatedly place the vertex whose adjacency bits to
    // the already-placed prefix are smallest (ties by degree, then index).
    let mut placed: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    for _ in 0..n {
        let best = (0..n)
            .filter(|&v| !used[v])
            .min_by_key(|&v| {
                let bits = placement_bits(rows, &placed, v);
                (bits, rows[v].count_ones(), v)
            })
            .unwrap();
        used[best] = true;
        placed.push(best);
    }
    let mut best_bits = bits_of_order(rows, &placed, total_bits);

    // Exhaustive search with prefix pruning.
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    search(rows, &mut order, &mut used, 0, 0, total_bits, &mut best_bits);
    best_bits
}

/// Adjacency of candidate `v` to `placed`, as bits in placement order
/// (earliest placed vertex = most significant of the new chunk).
fn placement_bits(rows: &[u16], placed: &[usize], v: usize) -> u32 {
    let mut bits = 0u32;
    for &p in placed {
        bits = bits << 1 | u32::from(rows[v] >> p & 1);
    }
    bits
}

fn bits_of_order(rows: &[u16], order: &[usize], total_bits: usize) -> u128 {
    let mut bits = 0u128;
    let mut shift = 128;
    for (k, &v) in order.iter().enumerate().skip(1) {
        let chunk = placement_bits(rows, &order[..k], v);
        shift -= k;
        bits |= u128::from(chunk) << shift;
    }
    debug_assert_eq!(shift, 128 - total_bits);
    bits
}

fn search(
    rows: &[u16],
    order: &mut Vec<usize>,
    used: &mut [bool],
    prefix: u128,
    prefix_len: usize,
    total_bits: usize,
    best: &mut u128,
) {
    let n = rows.len();
    let k = order.len();
    if k == n {
        if prefix < *best {
            *best = prefix;
        }
        return;
    }
    for v in 0..n {
        if used[v] {
            continue;
        }
        let chunk = placement_bits(rows, order, v);
        let new_len = prefix_len + k;
        let new_prefix = if new_len == 0 {
            prefix
        } else {
            prefix | u128::from(chunk) << (128 - new_len)
        };
        // Compare against the incumbent on the first new_len bits.
        let best_prefix = if new_len == 0 {
            0
        } else {
            *best >> (128 - new_len) << (128 - new_len)
        };
        if new_prefix > best_prefix {
            continue;
        }
        used[v] = true;
        order.push(v);
        search(rows, order, used, new_prefix, new_len, total_bits, best);
        order.pop();
        used[v] = false;
    }
}

/// Number of isomorphism classes among all 2^n induced subgraphs, the empty
/// subgraph included (so the answer is always >= 1).
pub fn mu_exact(g: &Graph) -> Result<usize, OracleError> {
    let n = g.vertex_count();
    if n > MAX_MU {
        return Err(OracleError::TooLarge { n, max: MAX_MU });
    }
    let rows: Vec<u16> = (0..n as u32)
        .map(|v| g.adjacency(v).iter().fold(0u16, |acc, &w| acc | 1 << w))
        .collect();
    let mut classes: HashSet<CanonicalForm> = HashSet::new();
    for subset in 0u32..1 << n {
        let members: Vec<usize> = (0..n).filter(|&v| subset >> v & 1 == 1).collect();
        let sub_rows: Vec<u16> = members
            .iter()
            .map(|&v| {
                members
                    .iter()
                    .enumerate()
                    .fold(0u16, |acc, (j, &w)| acc | (rows[v] >> w & 1) << j)
            })
            .collect();
        classes.insert(CanonicalForm {
            n: members.len() as u8,
            bits: canonical_bits(&sub_rows),
        });
    }
    Ok(classes.len())
}

/// A maximum-vertex induced path, as the lexicographically least witness
/// sequence. Depth-first search over (path, still-eligible set) states,
/// pruned when the eligible count cannot beat the incumbent.
pub fn longest_induced_path_exact(g: &Graph) -> Result<Vec<u32>, OracleError> {
    let n = g.vertex_count();
    if n > MAX_EXACT_SEARCH {
        return Err(OracleError::TooLarge {
            n,
            max: MAX_EXACT_SEARCH,
        });
    }
    let adj = adjacency_masks(g);
    let mut best: Vec<u32> = Vec::new();
    let mut path: Vec<u32> = Vec::new();
    for start in 0..n as u32 {
        path.push(start);
        let allowed = !(1u32 << start) & mask_all(n);
        extend_path(&adj, &mut path, allowed, &mut best);
        path.pop();
    }
    Ok(best)
}

fn extend_path(adj: &[u32], path: &mut Vec<u32>, allowed: u32, best: &mut Vec<u32>) {
    if path.len() > best.len() {
        *best = path.clone();
    }
    if path.len() + allowed.count_ones() as usize <= best.len() {
        return;
    }
    let tail = *path.last().unwrap();
    let mut cand = adj[tail as usize] & allowed;
    while cand != 0 {
        let v = cand.trailing_zeros();
        cand &= cand - 1;
        // The old tail becomes interior: its other neighbours are now off
        // limits, as is v itself.
        let next_allowed = allowed & !(adj[tail as usize] | 1 << v);
        path.push(v);
        extend_path(adj, path, next_allowed, best);
        path.pop();
    }
}

/// A maximum-vertex induced cycle (length >= 3), or `None` when the graph is
/// a forest. Rooted search: the root is the smallest vertex of the cycle and
/// the orientation with the smaller second vertex is the one reported.
pub fn longest_induced_cycle_exact(g: &Graph) -> Result<Option<Vec<u32>>, OracleError> {
    let n = g.vertex_count();
    if n > MAX_EXACT_SEARCH {
        return Err(OracleError::TooLarge {
            n,
            max: MAX_EXACT_SEARCH,
        });
    }
    let adj = adjacency_masks(g);
    let mut best: Vec<u32> = Vec::new();
    let mut path: Vec<u32> = Vec::new();
    for root in 0..n as u32 {
        let root_and_below = (1u32 << root) | ((1u32 << root) - 1);
        let above = mask_all(n) & !root_and_below;
        let mut firsts = adj[root as usize] & above;
        while firsts != 0 {
            let c1 = firsts.trailing_zeros();
            firsts &= firsts - 1;
            path.clear();
            path.push(root);
            path.push(c1);
            let allowed = above & !(1 << c1);
            extend_cycle(&adj, root, c1, &mut path, allowed, &mut best);
        }
    }
    Ok((!best.is_empty()).then_some(best))
}

fn extend_cycle(
    adj: &[u32],
    root: u32,
    c1: u32,
    path: &mut Vec<u32>,
    allowed: u32,
    best: &mut Vec<u32>,
) {
    // No closure possible any more: every potential closing vertex must be
    // allowed and adjacent to the root.
    if allowed & adj[root as usize] == 0 {
        return;
    }
    if path.len() + 1 + allowed.count_ones() as usize <= best.len() {
        return;
    }
    let tail = *path.last().unwrap();
    let mut cand = adj[tail as usize] & allowed;
    while cand != 0 {
        let v = cand.trailing_zeros();
        cand &= cand - 1;
        if adj[root as usize] >> v & 1 == 1 {
            // Closing vertex: cycle root..tail,v. Orientation dedup: the
            // reported direction starts with the smaller of (c1, v).
            if path.len() + 1 >= 3 && c1 < v && path.len() + 1 > best.len() {
                *best = path.clone();
                best.push(v);
            }
        } else {
            let next_allowed = allowed & !(adj[tail as usize] | 1 << v);
            path.push(v);
            extend_cycle(adj, root, c1, path, next_allowed, best);
            path.pop();
        }
    }
}

fn adjacency_masks(g: &Graph) -> Vec<u32> {
    (0..g.vertex_count() as u32)
        .map(|v| g.adjacency(v).iter().fold(0u32, |acc, &w| acc | 1 << w))
        .collect()
}

fn mask_all(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// All adjacency eigenvalues in descending order, computed by cyclic Jacobi
/// sweeps on a dense copy.
pub fn dense_spectrum<R: Real>(g: &Graph) -> Result<Vec<R>, OracleError> {
    let n = g.vertex_count();
    if n > MAX_DENSE_SPECTRUM {
        return Err(OracleError::TooLarge {
            n,
            max: MAX_DENSE_SPECTRUM,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a = vec![R::zero(); n * n];
    for (u, v) in g.edges() {
        a[u as usize * n + v as usize] = R::one();
        a[v as usize * n + u as usize] = R::one();
    }
    let mut vals = jacobi_eigenvalues(&mut a, n);
    vals.sort_by(|x, y| y.partial_cmp(x).expect("no NaN eigenvalues"));
    Ok(vals)
}

fn jacobi_eigenvalues<R: Real>(a: &mut [R], n: usize) -> Vec<R> {
    let eps = R::epsilon();
    let tiny = eps * eps;
    let frobenius = a.iter().map(|&x| x * x).sum::<R>().sqrt();
    let target = eps * R::from_count(n) * (frobenius + R::one());
    for _sweep in 0..100 {
        let mut off = R::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= tiny {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (R::from_count(2) * apq);
                let t = {
                    let sign = if theta >= R::zero() { R::one() } else { -R::one() };
                    sign / (theta.abs() + (theta * theta + R::one()).sqrt())
                };
                let c = R::one() / (t * t + R::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::graph::Graph;

    fn spectrum64(g: &Graph) -> Vec<f64> {
        dense_spectrum::<f64>(g).unwrap()
    }

    fn assert_close(actual: &[f64], expected: &[f64], tol: f64) {
        assert_eq!(actual.len(), expected.len());
        for (a, e) in actual.iter().zip(expected) {
            assert!((a - e).abs() < tol, "{actual:?} vs {expected:?}");
        }
    }

    #[test]
    fn spectrum_complete_and_empty() {
        assert_close(&spectrum64(&complete(6)), &[5., -1., -1., -1., -1., -1.], 1e-9);
        assert_close(&spectrum64(&empty(3)), &[0., 0., 0.], 1e-12);
    }

    #[test]
    fn spectrum_c4_and_petersen() {
        assert_close(&spectrum64(&cycle(4)), &[2., 0., 0., -2.], 1e-9);
        let expected = [3., 1., 1., 1., 1., 1., -2., -2., -2., -2.];
        assert_close(&spectrum64(&petersen()), &expected, 1e-9);
    }

    #[test]
    fn spectrum_trace_identities() {
        let g = petersen();
        let s = spectrum64(&g);
        let trace: f64 = s.iter().sum();
        let square: f64 = s.iter().map(|x| x * x).sum();
        assert!(trace.abs() < 1e-6);
        assert!((square - 2.0 * g.edge_count() as f64).abs() < 1e-6);
    }

    #[test]
    fn canonical_form_invariant_under_relabeling() {
        let g = petersen();
        let base = CanonicalForm::of(&g).unwrap();
        // Rotate labels.
        let edges: Vec<(u32, u32)> = g.edges().map(|(u, v)| ((u + 3) % 10, (v + 3) % 10)).collect();
        let h = Graph::build(10, &edges).unwrap();
        assert_eq!(CanonicalForm::of(&h).unwrap(), base);
        // A different 3-regular graph on 10 vertices must differ.
        let prism = {
            let mut e: Vec<(u32, u32)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
            e.extend((0..5).map(|i| (i + 5, (i + 1) % 5 + 5)));
            e.extend((0..5).map(|i| (i, i + 5)));
            Graph::build(10, &e).unwrap()
        };
        assert_ne!(CanonicalForm::of(&prism).unwrap(), base);
    }

    /// Reference canonicalization by plain enumeration of all n! orders.
    fn canonical_by_enumeration(g: &Graph) -> u128 {
        let n = g.vertex_count();
        let rows: Vec<u16> = (0..n as u32)
            .map(|v| g.adjacency(v).iter().fold(0u16, |acc, &w| acc | 1 << w))
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        let mut best = u128::MAX;
        permute(&mut order, 0, &mut |perm| {
            let mut bits = 0u128;
            let mut shift = 128;
            for (k, &v) in perm.iter().enumerate().skip(1) {
                let mut chunk = 0u32;
                for &p in &perm[..k] {
                    chunk = chunk << 1 | u32::from(rows[v] >> p & 1);
                }
                shift -= k;
                bits |= u128::from(chunk) << shift;
            }
            best = best.min(bits);
        });
        best
    }

    fn permute(xs: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == xs.len() {
            f(xs);
            return;
        }
        for i in k..xs.len() {
            xs.swap(k, i);
            permute(xs, k + 1, f);
            xs.swap(k, i);
        }
    }

    #[test]
    fn canonical_matches_exhaustive_enumeration() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let n = rng.gen_range(1..=6);
            let mut edges = Vec::new();
            for u in 0..n as u32 {
                for v in (u + 1)..n as u32 {
                    if rng.gen_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::build(n, &edges).unwrap();
            assert_eq!(
                CanonicalForm::of(&g).unwrap().bits,
                canonical_by_enumeration(&g),
                "n={n} edges={edges:?}"
            );
        }
    }

    #[test]
    fn mu_exact_small_cases() {
        assert_eq!(mu_exact(&complete(3)).unwrap(), 4);
        assert_eq!(mu_exact(&empty(3)).unwrap(), 4);
        assert_eq!(mu_exact(&path(3)).unwrap(), 5);
        assert!(matches!(
            mu_exact(&empty(13)),
            Err(OracleError::TooLarge { .. })
        ));
    }

    /// (size, edge count) is a coarser invariant than the isomorphism class,
    /// so the class count can never fall below the number of distinct
    /// (size, edge count) pairs over all subsets.
    #[test]
    fn mu_exact_dominates_size_edge_profile() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..25 {
            let n = rng.gen_range(1..=9usize);
            let mut edges = Vec::new();
            for u in 0..n as u32 {
                for v in (u + 1)..n as u32 {
                    if rng.gen_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::build(n, &edges).unwrap();
            let mut profiles = HashSet::new();
            for subset in 0u32..1 << n {
                let members: Vec<u32> =
                    (0..n as u32).filter(|&v| subset >> v & 1 == 1).collect();
                let within = members
                    .iter()
                    .map(|&v| {
                        g.adjacency(v)
                            .iter()
                            .filter(|w| members.contains(w))
                            .count()
                    })
                    .sum::<usize>()
                    / 2;
                profiles.insert((members.len(), within));
            }
            assert!(mu_exact(&g).unwrap() >= profiles.len());
        }
    }

    #[test]
    fn spectrum_identities_on_random_inputs() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..30 {
            let n = rng.gen_range(1..=40usize);
            let mut edges = Vec::new();
            for u in 0..n as u32 {
                for v in (u + 1)..n as u32 {
                    if rng.gen_bool(0.2) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::build(n, &edges).unwrap();
            let s = spectrum64(&g);
            let trace: f64 = s.iter().sum();
            let square: f64 = s.iter().map(|x| x * x).sum();
            assert!(trace.abs() < 1e-6, "trace {trace}");
            assert!((square - 2.0 * g.edge_count() as f64).abs() < 1e-6);
        }
    }

    #[test]
    fn longest_induced_path_examples() {
        assert_eq!(longest_induced_path_exact(&path(6)).unwrap().len(), 6);
        assert_eq!(longest_induced_path_exact(&complete(5)).unwrap().len(), 2);
        assert_eq!(longest_induced_path_exact(&cycle(6)).unwrap().len(), 5);
        assert_eq!(longest_induced_path_exact(&petersen()).unwrap().len(), 5);
        let w = longest_induced_path_exact(&cycle(6)).unwrap();
        assert!(cycle(6).is_induced_path(&w));
    }

    #[test]
    fn longest_induced_cycle_examples() {
        assert_eq!(
            longest_induced_cycle_exact(&cycle(7)).unwrap().unwrap().len(),
            7
        );
        assert_eq!(
            longest_induced_cycle_exact(&complete(4)).unwrap().unwrap().len(),
            3
        );
        assert_eq!(
            longest_induced_cycle_exact(&petersen()).unwrap().unwrap().len(),
            6
        );
        assert_eq!(longest_induced_cycle_exact(&path(8)).unwrap(), None);
        let w = longest_induced_cycle_exact(&petersen()).unwrap().unwrap();
        assert!(petersen().is_induced_cycle(&w));
    }

    #[test]
    fn exact_search_budget() {
        assert!(matches!(
            longest_induced_path_exact(&empty(31)),
            Err(OracleError::TooLarge { .. })
        ));
        assert!(matches!(
            longest_induced_cycle_exact(&empty(31)),
            Err(OracleError::TooLarge { .. })
        ));
    }
}
