//! Bitset-adjacency simple graphs on at most 32 vertices.
//!
//! Row `v` of the adjacency array is the neighbor set of `v`. Rows are kept
//! symmetric, loop-free and zero beyond `order`; every mutator re-checks this
//! in debug builds.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph6;

pub const MAX_ORDER: usize = 32;

/// Iterates over the set bits of a mask, lowest first.
#[derive(Clone, Copy, Debug)]
pub struct Bits(pub u32);

impl Iterator for Bits {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let v = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(v)
        }
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Bits {}

#[inline]
pub(crate) const fn bit(v: usize) -> u32 {
    1u32 << v
}

/// Mask with the lowest `n` bits set.
#[inline]
pub const fn low_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SmallGraph {
    order: u8,
    adj: [u32; MAX_ORDER],
}

impl SmallGraph {
    pub fn empty(order: usize) -> Result<Self> {
        if order > MAX_ORDER {
            return Err(Error::OrderTooLarge(order));
        }
        Ok(Self {
            order: order as u8,
            adj: [0; MAX_ORDER],
        })
    }

    pub fn complete(order: usize) -> Result<Self> {
        let mut g = Self::empty(order)?;
        let all = low_mask(order);
        for v in 0..order {
            g.adj[v] = all & !bit(v);
        }
        Ok(g)
    }

    pub fn from_edges(order: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(order)?;
        for &(u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Builds a graph from raw neighbor rows, validating every invariant.
    pub fn from_rows(order: usize, rows: &[u32]) -> Result<Self> {
        let mut g = Self::empty(order)?;
        if rows.len() != order {
            return Err(Error::InvalidEdge(rows.len(), order));
        }
        g.adj[..order].copy_from_slice(rows);
        if !g.is_valid() {
            return Err(Error::InvalidEdge(order, order));
        }
        Ok(g)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order as usize
    }

    #[inline]
    pub fn vertex_mask(&self) -> u32 {
        low_mask(self.order())
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> u32 {
        self.adj[v]
    }

    pub fn rows(&self) -> &[u32] {
        &self.adj[..self.order()]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && v < self.order() && self.adj[u] & bit(v) != 0
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn max_degree(&self) -> usize {
        (0..self.order()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.rows().iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order. This is the
    /// canonical edge order used by colorings and witnesses.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.order()).flat_map(move |u| Bits(self.adj[u] & !low_mask(u + 1)).map(move |v| (u, v)))
    }

    pub fn try_add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u == v || u >= self.order() || v >= self.order() {
            return Err(Error::InvalidEdge(u, v));
        }
        self.adj[u] |= bit(v);
        self.adj[v] |= bit(u);
        Ok(())
    }

    /// Panics on a loop or an out-of-range endpoint.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.try_add_edge(u, v).expect("edge endpoints must be distinct vertices of the graph");
        debug_assert!(self.is_valid());
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        if u < self.order() && v < self.order() {
            self.adj[u] &= !bit(v);
            self.adj[v] &= !bit(u);
        }
        debug_assert!(self.is_valid());
    }

    /// Returns a copy with one extra vertex (index `order`) adjacent to `neighbors`.
    pub fn with_vertex(&self, neighbors: u32) -> Result<Self> {
        let n = self.order();
        if n + 1 > MAX_ORDER {
            return Err(Error::OrderTooLarge(n + 1));
        }
        let neighbors = neighbors & self.vertex_mask();
        let mut g = *self;
        g.order += 1;
        g.adj[n] = neighbors;
        for u in Bits(neighbors) {
            g.adj[u] |= bit(n);
        }
        debug_assert!(g.is_valid());
        Ok(g)
    }

    /// Removes vertex `v`, shifting higher labels down by one.
    pub fn without_vertex(&self, v: usize) -> Self {
        let n = self.order();
        assert!(v < n);
        let low = low_mask(v);
        let squeeze = |row: u32| (row & low) | ((row >> 1) & !low);
        let mut g = Self {
            order: (n - 1) as u8,
            adj: [0; MAX_ORDER],
        };
        for (i, u) in (0..n).filter(|&u| u != v).enumerate() {
            g.adj[i] = squeeze(self.adj[u] & !bit(v));
        }
        debug_assert!(g.is_valid());
        g
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.order();
        debug_assert_eq!(perm.len(), n);
        let mut g = Self {
            order: self.order,
            adj: [0; MAX_ORDER],
        };
        for u in 0..n {
            let mut row = 0;
            for w in Bits(self.adj[u]) {
                row |= bit(perm[w]);
            }
            g.adj[perm[u]] = row;
        }
        debug_assert!(g.is_valid());
        g
    }

    pub fn complement(&self) -> Self {
        let all = self.vertex_mask();
        let mut g = *self;
        for v in 0..self.order() {
            g.adj[v] = all & !self.adj[v] & !bit(v);
        }
        g
    }

    /// Vertex-disjoint union; `other`'s vertices are shifted after ours.
    pub fn disjoint_union(&self, other: &SmallGraph) -> Result<Self> {
        let n = self.order();
        let mut g = Self::empty(n + other.order())?;
        g.adj[..n].copy_from_slice(self.rows());
        for (i, &row) in other.rows().iter().enumerate() {
            g.adj[n + i] = row << n;
        }
        Ok(g)
    }

    pub fn isolated_vertices(&self) -> u32 {
        (0..self.order())
            .filter(|&v| self.adj[v] == 0)
            .fold(0, |m, v| m | bit(v))
    }

    pub fn is_valid(&self) -> bool {
        let n = self.order();
        if n > MAX_ORDER {
            return false;
        }
        let mask = self.vertex_mask();
        for v in 0..MAX_ORDER {
            let row = self.adj[v];
            if v >= n {
                if row != 0 {
                    return false;
                }
                continue;
            }
            if row & !mask != 0 || row & bit(v) != 0 {
                return false;
            }
            if Bits(row).any(|u| self.adj[u] & bit(v) == 0) {
                return false;
            }
        }
        true
    }

    pub fn is_connected(&self) -> bool {
        let n = self.order();
        if n == 0 {
            return true;
        }
        let mut seen = 1u32;
        let mut frontier = 1u32;
        while frontier != 0 {
            let mut next = 0;
            for v in Bits(frontier) {
                next |= self.adj[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == self.vertex_mask()
    }

    pub fn clique_number(&self) -> usize {
        fn grow(g: &SmallGraph, cand: u32, size: usize, best: &mut usize) {
            if cand == 0 {
                *best = (*best).max(size);
                return;
            }
            if size + cand.count_ones() as usize <= *best {
                return;
            }
            let mut rest = cand;
            while rest != 0 {
                if size + rest.count_ones() as usize <= *best {
                    return;
                }
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                grow(g, rest & g.adj[v], size + 1, best);
            }
        }
        let mut best = 0;
        grow(self, self.vertex_mask(), 0, &mut best);
        best
    }

    /// Minimum number of colors in a proper vertex coloring.
    pub fn chromatic_number(&self) -> usize {
        let n = self.order();
        if n == 0 {
            return 0;
        }
        if self.edge_count() == 0 {
            return 1;
        }
        // largest-degree-first order keeps the backtracking shallow
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(self.degree(v)));
        let lower = self.clique_number().max(2);
        (lower..=n)
            .find(|&k| self.is_colorable(&order, k))
            .unwrap_or(n)
    }

    fn is_colorable(&self, order: &[usize], k: usize) -> bool {
        fn place(g: &SmallGraph, order: &[usize], i: usize, classes: &mut Vec<u32>, k: usize) -> bool {
            if i == order.len() {
                return true;
            }
            let v = order[i];
            for c in 0..classes.len() {
                if classes[c] & g.adj[v] == 0 {
                    classes[c] |= bit(v);
                    if place(g, order, i + 1, classes, k) {
                        return true;
                    }
                    classes[c] &= !bit(v);
                }
            }
            // opening a fresh class is symmetric, so try it once
            if classes.len() < k {
                classes.push(bit(v));
                if place(g, order, i + 1, classes, k) {
                    return true;
                }
                classes.pop();
            }
            false
        }
        place(self, order, 0, &mut Vec::with_capacity(k), k)
    }

    pub fn to_graph6(&self) -> String {
        graph6::emit(self)
    }

    pub fn from_graph6(text: &str) -> Result<Self> {
        graph6::parse(text)
    }
}

impl fmt::Debug for SmallGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SmallGraph({}; ", self.order())?;
        let mut first = true;
        for (u, v) in self.edges() {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{u}-{v}")?;
            first = false;
        }
        write!(f, ")")
    }
}

impl fmt::Display for SmallGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_graph6())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> SmallGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        SmallGraph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn rejects_loops_and_out_of_range() {
        let mut g = SmallGraph::empty(3).unwrap();
        assert!(g.try_add_edge(1, 1).is_err());
        assert!(g.try_add_edge(0, 3).is_err());
        assert!(SmallGraph::empty(33).is_err());
    }

    #[test]
    fn edges_are_lexicographic() {
        let g = SmallGraph::from_edges(4, &[(2, 3), (0, 2), (1, 0)]).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (2, 3)]);
    }

    #[test]
    fn vertex_removal_shifts_labels() {
        let g = cycle(5).without_vertex(2);
        assert_eq!(g.order(), 4);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 3), (2, 3)]);
    }

    #[test]
    fn chromatic_numbers() {
        assert_eq!(SmallGraph::empty(0).unwrap().chromatic_number(), 0);
        assert_eq!(SmallGraph::empty(4).unwrap().chromatic_number(), 1);
        assert_eq!(cycle(5).chromatic_number(), 3);
        assert_eq!(cycle(6).chromatic_number(), 2);
        assert_eq!(SmallGraph::complete(6).unwrap().chromatic_number(), 6);
    }

    #[test]
    fn petersen_is_three_chromatic() {
        let mut edges = vec![];
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        let g = SmallGraph::from_edges(10, &edges).unwrap();
        assert_eq!(g.clique_number(), 2);
        assert!(!g.is_colorable(&(0..10).collect::<Vec<_>>(), 2));
        assert_eq!(g.chromatic_number(), 3);
    }

    #[test]
    fn full_order_graph() {
        let g = SmallGraph::complete(32).unwrap();
        assert_eq!(g.edge_count(), 496);
        assert!(g.is_valid());
        assert_eq!(g.complement().edge_count(), 0);
    }
}
