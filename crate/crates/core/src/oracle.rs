//! Slow reference implementations that share no code with the fast engines.
//!
//! Everything here works on plain vertex permutations and subsets, so it is
//! only usable on very small inputs. The test suites and `verify` compare the
//! engines against these.

use std::collections::HashSet;

use itertools::Itertools;

use crate::berge::Hypergraph;
use crate::error::{Error, Result};
use crate::graph::SmallGraph;

/// Pairs `(i, j)` with `i < j < k`, indexed row by row.
fn pair_index(k: usize) -> Vec<Vec<usize>> {
    let mut idx = vec![vec![usize::MAX; k]; k];
    let mut next = 0;
    for i in 0..k {
        for j in i + 1..k {
            idx[i][j] = next;
            idx[j][i] = next;
            next += 1;
        }
    }
    idx
}

fn edge_mask(h: &SmallGraph, perm: &[usize], idx: &[Vec<usize>]) -> u64 {
    h.edges().fold(0, |m, (u, v)| m | 1 << idx[perm[u]][perm[v]])
}

/// All labeled copies of `h` on the vertex set `0..|h|`, as pair masks.
fn labeled_copies(h: &SmallGraph) -> HashSet<u64> {
    let k = h.order();
    let idx = pair_index(k);
    (0..k)
        .permutations(k)
        .map(|p| edge_mask(h, &p, &idx))
        .collect()
}

/// `N(h, g)` by checking every vertex subset of size `|h|` for every labeled
/// copy of `h` it spans.
pub fn subgraph_count(h: &SmallGraph, g: &SmallGraph) -> u128 {
    let k = h.order();
    if k > g.order() {
        return 0;
    }
    let copies: Vec<u64> = labeled_copies(h).into_iter().collect();
    let idx = pair_index(k);
    let mut total = 0u128;
    for subset in (0..g.order()).combinations(k) {
        let mut spanned = 0u64;
        for i in 0..k {
            for j in i + 1..k {
                if g.has_edge(subset[i], subset[j]) {
                    spanned |= 1 << idx[i][j];
                }
            }
        }
        total += copies.iter().filter(|&&c| c & spanned == c).count() as u128;
    }
    total
}

/// Whether some injective vertex map sends every edge of `f` onto an edge of `g`.
pub fn contains(g: &SmallGraph, f: &SmallGraph) -> bool {
    let k = f.order();
    if k > g.order() {
        return false;
    }
    let edges: Vec<(usize, usize)> = f.edges().collect();
    (0..g.order())
        .permutations(k)
        .any(|m| edges.iter().all(|&(u, v)| g.has_edge(m[u], m[v])))
}

/// Automorphism count by trying every permutation.
pub fn automorphism_count(g: &SmallGraph) -> u128 {
    let n = g.order();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    (0..n)
        .permutations(n)
        .filter(|p| edges.iter().all(|&(u, v)| g.has_edge(p[u], p[v])))
        .count() as u128
}

/// Smallest pair mask over all relabelings; equal exactly for isomorphic graphs.
pub fn certificate(g: &SmallGraph) -> u64 {
    let n = g.order();
    let idx = pair_index(n);
    (0..n)
        .permutations(n)
        .map(|p| edge_mask(g, &p, &idx))
        .min()
        .unwrap_or(0)
}

pub fn isomorphic(a: &SmallGraph, b: &SmallGraph) -> bool {
    a.order() == b.order() && a.edge_count() == b.edge_count() && certificate(a) == certificate(b)
}

/// Every labeled graph on `n ≤ 6` vertices, edges taken from a pair mask.
pub fn labeled_graphs(n: usize) -> Result<Vec<SmallGraph>> {
    if n > 6 {
        return Err(Error::Infeasible {
            reason: format!("labeled enumeration on {n} vertices"),
            estimate: format!("2^{}", n * n.saturating_sub(1) / 2),
        });
    }
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            SmallGraph::from_edges(n, &edges)
        })
        .collect()
}

/// One representative per isomorphism class of `f`-free graphs on `n ≤ 6`
/// vertices, found by filtering all labeled graphs.
pub fn free_graph_classes(n: usize, f: &SmallGraph) -> Result<Vec<SmallGraph>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for g in labeled_graphs(n)? {
        if !contains(&g, f) && seen.insert(certificate(&g)) {
            out.push(g);
        }
    }
    Ok(out)
}

/// Largest `Σ N(H_i, layer i)` over all total colorings of `g`'s edges.
pub fn best_coloring_value(g: &SmallGraph, patterns: &[SmallGraph]) -> Result<u128> {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let k = patterns.len();
    if k == 0 {
        return Err(Error::InvalidColoring("at least one pattern is required".into()));
    }
    if (k as f64).powi(edges.len() as i32) > 1e7 {
        return Err(Error::Infeasible {
            reason: format!("{k}^{} colorings", edges.len()),
            estimate: format!("{k}^{}", edges.len()),
        });
    }
    let mut best = 0;
    for colors in (0..edges.len()).map(|_| 0..k).multi_cartesian_product() {
        let mut layers = vec![SmallGraph::empty(g.order())?; k];
        for (&(u, v), &c) in edges.iter().zip(&colors) {
            layers[c].add_edge(u, v);
        }
        let value = patterns.iter().zip(&layers).map(|(h, l)| subgraph_count(h, l)).sum();
        best = best.max(value);
    }
    if edges.is_empty() {
        let empty = SmallGraph::empty(g.order())?;
        best = patterns.iter().map(|h| subgraph_count(h, &empty)).sum();
    }
    Ok(best)
}

/// Berge containment by trying every injective vertex map and every
/// assignment of distinct hyperedges to the edges of `f`.
pub fn contains_berge(h: &Hypergraph, f: &SmallGraph) -> bool {
    let k = f.order();
    if k > h.order() {
        return false;
    }
    let edges: Vec<(usize, usize)> = f.edges().collect();
    if edges.len() > h.len() {
        return false;
    }
    (0..h.order()).permutations(k).any(|m| {
        let pairs: Vec<u32> = edges.iter().map(|&(u, v)| 1 << m[u] | 1 << m[v]).collect();
        h.edges()
            .iter()
            .copied()
            .permutations(pairs.len())
            .any(|chosen| pairs.iter().zip(&chosen).all(|(&p, &e)| e & p == p))
    })
}

/// `ex_r(n, Berge-f)` by checking every subset of the `r`-sets.
pub fn ex_berge(n: usize, r: usize, f: &SmallGraph) -> Result<usize> {
    let all = Hypergraph::complete(n, r)?;
    if all.len() > 20 {
        return Err(Error::Infeasible {
            reason: format!("{} candidate hyperedges", all.len()),
            estimate: format!("2^{}", all.len()),
        });
    }
    let mut best = 0;
    for mask in 0u32..1 << all.len() {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let chosen = all.edges().iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
        if !contains_berge(&Hypergraph::new(n, r, chosen)?, f) {
            best = size;
        }
    }
    Ok(best)
}

/// Chromatic number by trying all colorings with an increasing palette.
pub fn chromatic_number(g: &SmallGraph) -> usize {
    let n = g.order();
    if n == 0 {
        return 0;
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    (1..=n)
        .find(|&c| {
            (0..n)
                .map(|_| 0..c)
                .multi_cartesian_product()
                .any(|col| edges.iter().all(|&(u, v)| col[u] != col[v]))
        })
        .expect("n colors always suffice")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let k4 = SmallGraph::complete(4).unwrap();
        let p3 = SmallGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(subgraph_count(&p3, &k4), 12);
        assert_eq!(subgraph_count(&SmallGraph::complete(3).unwrap(), &k4), 4);
        assert_eq!(automorphism_count(&k4), 24);
        assert_eq!(chromatic_number(&k4), 4);
    }

    #[test]
    fn class_counts() {
        let k2 = SmallGraph::complete(2).unwrap();
        let k5 = SmallGraph::complete(5).unwrap();
        assert_eq!(free_graph_classes(4, &k5).unwrap().len(), 11);
        assert_eq!(free_graph_classes(4, &k2).unwrap().len(), 1);
    }

    #[test]
    fn berge_triangle_on_four_vertices() {
        let k3 = SmallGraph::complete(3).unwrap();
        assert_eq!(ex_berge(4, 3, &k3).unwrap(), 2);
    }
}
