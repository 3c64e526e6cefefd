//! Total edge colorings with colors `1..=k`.
//!
//! A coloring is stored as one spanning subgraph per color. Color lists in
//! text and JSON are aligned to the canonical edge order of the base graph
//! (see [`SmallGraph::edges`]).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{bit, SmallGraph};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EdgeColoring {
    base: SmallGraph,
    layers: Vec<SmallGraph>,
}

impl EdgeColoring {
    /// Every edge of `base` gets `color`.
    pub fn uniform(base: SmallGraph, k: usize, color: usize) -> Result<Self> {
        check_color(color, k)?;
        let mut layers = vec![SmallGraph::empty(base.order())?; k];
        layers[color - 1] = base;
        Ok(Self { base, layers })
    }

    /// `colors[i]` is the color of the `i`-th edge in canonical edge order.
    pub fn from_colors(base: SmallGraph, k: usize, colors: &[u8]) -> Result<Self> {
        let m = base.edge_count();
        if colors.len() != m {
            return Err(Error::InvalidColoring(format!(
                "{} colors given for {m} edges",
                colors.len()
            )));
        }
        let mut layers = vec![SmallGraph::empty(base.order())?; k];
        for ((u, v), &c) in base.edges().zip(colors) {
            check_color(c as usize, k)?;
            layers[c as usize - 1].add_edge(u, v);
        }
        Ok(Self { base, layers })
    }

    /// Builds a coloring from its color classes; they must be edge-disjoint
    /// graphs of one order.
    pub fn from_layers(layers: Vec<SmallGraph>) -> Result<Self> {
        let Some(first) = layers.first() else {
            return Err(Error::InvalidColoring("at least one color is required".into()));
        };
        let n = first.order();
        let mut rows = vec![0u32; n];
        for layer in &layers {
            if layer.order() != n {
                return Err(Error::InvalidColoring("color classes of different orders".into()));
            }
            for (v, &row) in layer.rows().iter().enumerate() {
                if rows[v] & row != 0 {
                    return Err(Error::InvalidColoring("an edge has two colors".into()));
                }
                rows[v] |= row;
            }
        }
        let base = SmallGraph::from_rows(n, &rows)?;
        Ok(Self { base, layers })
    }

    pub fn base(&self) -> &SmallGraph {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.base.order()
    }

    pub fn k(&self) -> usize {
        self.layers.len()
    }

    /// Spanning subgraph of the edges with color `c` (1-based).
    pub fn layer(&self, c: usize) -> &SmallGraph {
        &self.layers[c - 1]
    }

    pub fn layers(&self) -> &[SmallGraph] {
        &self.layers
    }

    pub fn color(&self, u: usize, v: usize) -> Option<usize> {
        self.layers.iter().position(|l| l.has_edge(u, v)).map(|i| i + 1)
    }

    /// Colors in canonical edge order.
    pub fn colors(&self) -> Vec<u8> {
        self.base
            .edges()
            .map(|(u, v)| self.color(u, v).expect("every edge is colored") as u8)
            .collect()
    }

    /// Colored neighborhood of `v`: one neighbor mask per color.
    pub fn colored_neighbors(&self, v: usize) -> Vec<u32> {
        self.layers.iter().map(|l| l.neighbors(v)).collect()
    }

    /// Adds edge `uv` with color `c`, or recolors it if present.
    pub fn set_edge(&mut self, u: usize, v: usize, c: usize) -> Result<()> {
        check_color(c, self.k())?;
        self.remove_edge(u, v);
        self.base.try_add_edge(u, v)?;
        self.layers[c - 1].add_edge(u, v);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.base.remove_edge(u, v);
        for l in &mut self.layers {
            l.remove_edge(u, v);
        }
    }

    /// Deletes every edge at `v`.
    pub fn isolate(&mut self, v: usize) {
        let nbrs = self.base.neighbors(v);
        for w in crate::graph::Bits(nbrs) {
            self.remove_edge(v, w);
        }
        debug_assert_eq!(self.base.neighbors(v) & !bit(v), 0);
    }

    /// `<graph6>:<digits>`, one color digit per edge in canonical order. The
    /// colon is outside the graph6 alphabet, so the split is unambiguous.
    pub fn to_text(&self) -> String {
        let digits: String = self.colors().iter().map(|&c| char::from(b'0' + c)).collect();
        format!("{}:{}", self.base.to_graph6(), digits)
    }

    /// Parses `<graph6>:<digits>`; a bare graph6 string colors every edge 1.
    pub fn parse(text: &str, k: usize) -> Result<Self> {
        let text = text.trim();
        match text.split_once(':') {
            None => Self::uniform(SmallGraph::from_graph6(text)?, k, 1),
            Some((g6, digits)) => {
                let base = SmallGraph::from_graph6(g6)?;
                let colors = digits
                    .chars()
                    .map(|ch| {
                        ch.to_digit(10)
                            .map(|d| d as u8)
                            .ok_or_else(|| Error::InvalidColoring(format!("bad color digit {ch:?}")))
                    })
                    .collect::<Result<Vec<u8>>>()?;
                Self::from_colors(base, k, &colors)
            }
        }
    }
}

impl FromStr for EdgeColoring {
    type Err = Error;

    /// Uses the largest digit present as the number of colors (at least 1).
    fn from_str(s: &str) -> Result<Self> {
        let k = s
            .split_once(':')
            .map(|(_, d)| d.chars().filter_map(|c| c.to_digit(10)).max().unwrap_or(1))
            .unwrap_or(1)
            .max(1);
        Self::parse(s, k as usize)
    }
}

fn check_color(c: usize, k: usize) -> Result<()> {
    if c == 0 || c > k {
        Err(Error::InvalidColoring(format!("color {c} outside 1..={k}")))
    } else {
        Ok(())
    }
}

impl fmt::Debug for EdgeColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EdgeColoring({}, k={})", self.to_text(), self.k())
    }
}

impl fmt::Display for EdgeColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colors_follow_canonical_edge_order() {
        let k4 = SmallGraph::complete(4).unwrap();
        let c = EdgeColoring::from_colors(k4, 2, &[1, 2, 1, 1, 2, 1]).unwrap();
        assert_eq!(c.color(0, 2), Some(2));
        assert_eq!(c.color(1, 3), Some(2));
        assert_eq!(c.layer(2).edge_count(), 2);
        assert_eq!(c.to_text(), "C~:121121");
        assert_eq!(EdgeColoring::parse("C~:121121", 2).unwrap(), c);
    }

    #[test]
    fn rejects_out_of_range_colors() {
        let k3 = SmallGraph::complete(3).unwrap();
        assert!(EdgeColoring::from_colors(k3, 2, &[1, 3, 1]).is_err());
        assert!(EdgeColoring::from_colors(k3, 2, &[1, 0, 1]).is_err());
        assert!(EdgeColoring::from_colors(k3, 2, &[1, 1]).is_err());
    }

    #[test]
    fn recoloring_keeps_layers_disjoint() {
        let mut c = EdgeColoring::uniform(SmallGraph::complete(3).unwrap(), 2, 1).unwrap();
        c.set_edge(0, 1, 2).unwrap();
        assert_eq!(c.colors(), vec![2, 1, 1]);
        assert!(EdgeColoring::from_layers(c.layers().to_vec()).is_ok());
        c.isolate(0);
        assert_eq!(c.base().edge_count(), 1);
    }
}
