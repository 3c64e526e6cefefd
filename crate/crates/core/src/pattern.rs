//! Named small graphs used as counted patterns and forbidden graphs.
//!
//! Paths, cycles and stars are indexed by their number of vertices, so
//! `Path(5)` has four edges and `Star(4)` is `K_{1,3}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{SmallGraph, MAX_ORDER};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum PatternSpec {
    Clique(usize),
    Path(usize),
    Cycle(usize),
    Star(usize),
    CompleteBipartite(usize, usize),
    /// Two independent edges plus an isolated vertex.
    TwoMatchPlusIsolated,
    /// A three-vertex path plus an independent edge.
    PathPlusEdge,
    /// A four-cycle with a pendant vertex attached to one of its vertices.
    CycleWithTail,
    /// Two triangles sharing a vertex.
    Fan2,
    /// The star on `n` vertices plus a maximum matching on its leaves.
    StarPlusMatching(usize),
    Matching(usize),
    Custom(SmallGraph),
}

impl PatternSpec {
    pub fn expand(&self) -> Result<SmallGraph> {
        use PatternSpec::*;
        let bad = |msg: String| Err(Error::InvalidPattern(msg));
        let check = |n: usize| {
            if n > MAX_ORDER {
                Err(Error::InvalidPattern(format!("{self} needs {n} vertices, above {MAX_ORDER}")))
            } else {
                Ok(())
            }
        };
        match *self {
            Clique(r) => {
                if r == 0 {
                    return bad("clique order must be at least 1".into());
                }
                check(r)?;
                SmallGraph::complete(r)
            }
            Path(l) => {
                if l == 0 {
                    return bad("path needs at least one vertex".into());
                }
                check(l)?;
                let edges: Vec<_> = (1..l).map(|i| (i - 1, i)).collect();
                SmallGraph::from_edges(l, &edges)
            }
            Cycle(l) => {
                if l < 3 {
                    return bad(format!("cycle length {l} is below 3"));
                }
                check(l)?;
                let edges: Vec<_> = (0..l).map(|i| (i, (i + 1) % l)).collect();
                SmallGraph::from_edges(l, &edges)
            }
            Star(l) => {
                if l == 0 {
                    return bad("star needs at least one vertex".into());
                }
                check(l)?;
                let edges: Vec<_> = (1..l).map(|i| (0, i)).collect();
                SmallGraph::from_edges(l, &edges)
            }
            CompleteBipartite(a, b) => {
                if a == 0 || b == 0 {
                    return bad("complete bipartite parts must be nonempty".into());
                }
                check(a + b)?;
                let mut g = SmallGraph::empty(a + b)?;
                for u in 0..a {
                    for v in a..a + b {
                        g.add_edge(u, v);
                    }
                }
                Ok(g)
            }
            TwoMatchPlusIsolated => SmallGraph::from_edges(5, &[(0, 1), (2, 3)]),
            PathPlusEdge => SmallGraph::from_edges(5, &[(0, 1), (1, 2), (3, 4)]),
            CycleWithTail => SmallGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)]),
            Fan2 => SmallGraph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]),
            StarPlusMatching(n) => {
                if n == 0 {
                    return bad("star needs at least one vertex".into());
                }
                check(n)?;
                let mut edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
                for j in 0..(n - 1) / 2 {
                    edges.push((2 * j + 1, 2 * j + 2));
                }
                SmallGraph::from_edges(n, &edges)
            }
            Matching(t) => {
                if t == 0 {
                    return bad("matching needs at least one edge".into());
                }
                check(2 * t)?;
                let edges: Vec<_> = (0..t).map(|i| (2 * i, 2 * i + 1)).collect();
                SmallGraph::from_edges(2 * t, &edges)
            }
            Custom(g) => Ok(g),
        }
    }

    /// The clique order if this pattern is a complete graph.
    pub fn clique_order(&self) -> Option<usize> {
        let g = self.expand().ok()?;
        let n = g.order();
        (n > 0 && g.edge_count() == n * (n - 1) / 2).then_some(n)
    }

    /// Part sizes `(a, b)` with `a <= b` if this pattern is a complete bipartite graph.
    pub fn bipartite_parts(&self) -> Option<(usize, usize)> {
        use PatternSpec::*;
        let (a, b) = match *self {
            CompleteBipartite(a, b) => (a, b),
            Star(l) if l >= 2 => (1, l - 1),
            Clique(2) | Path(2) => (1, 1),
            Path(3) => (1, 2),
            Cycle(4) => (2, 2),
            _ => return None,
        };
        Some((a.min(b), a.max(b)))
    }

    /// Parses a comma-separated list such as `K3,K2` or `Kb:3,3,S5`.
    pub fn parse_list(text: &str) -> Result<Vec<PatternSpec>> {
        let tokens: Vec<&str> = text.split(',').map(str::trim).collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            let tok = tokens[i];
            if tok.is_empty() {
                return Err(Error::InvalidPattern(format!("empty entry in pattern list '{text}'")));
            }
            if tok.starts_with("Kb:") && !tok.contains('x') {
                let Some(second) = tokens.get(i + 1) else {
                    return Err(Error::InvalidPattern(format!("'{tok}' needs two part sizes")));
                };
                out.push(format!("{tok},{second}").parse()?);
                i += 2;
            } else {
                out.push(tok.parse()?);
                i += 1;
            }
        }
        Ok(out)
    }

    pub fn list_to_string(list: &[PatternSpec]) -> String {
        list.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for PatternSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use PatternSpec::*;
        match self {
            Clique(r) => write!(f, "K{r}"),
            Path(l) => write!(f, "P{l}"),
            Cycle(l) => write!(f, "C{l}"),
            Star(l) => write!(f, "S{l}"),
            CompleteBipartite(a, b) => write!(f, "Kb:{a},{b}"),
            TwoMatchPlusIsolated => write!(f, "M"),
            PathPlusEdge => write!(f, "Mprime"),
            CycleWithTail => write!(f, "C4tail"),
            Fan2 => write!(f, "F2"),
            StarPlusMatching(n) => write!(f, "Fn:{n}"),
            Matching(t) => write!(f, "Mt:{t}"),
            Custom(g) => write!(f, "custom:{}", g.to_graph6()),
        }
    }
}

impl FromStr for PatternSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use PatternSpec::*;
        let s = s.trim();
        let bad = || Error::InvalidPattern(format!("unrecognized pattern '{s}'"));
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let spec = match s {
            "M" => TwoMatchPlusIsolated,
            "Mprime" | "M'" => PathPlusEdge,
            "C4tail" | "C4'" => CycleWithTail,
            "F2" => Fan2,
            _ => {
                if let Some(rest) = s.strip_prefix("custom:") {
                    Custom(SmallGraph::from_graph6(rest)?)
                } else if let Some(rest) = s.strip_prefix("Kb:") {
                    let (a, b) = rest.split_once([',', 'x']).ok_or_else(bad)?;
                    CompleteBipartite(num(a)?, num(b)?)
                } else if let Some(rest) = s.strip_prefix("Fn:") {
                    StarPlusMatching(num(rest)?)
                } else if let Some(rest) = s.strip_prefix("Mt:") {
                    Matching(num(rest)?)
                } else if let Some(rest) = s.strip_prefix('K') {
                    Clique(num(rest)?)
                } else if let Some(rest) = s.strip_prefix('P') {
                    Path(num(rest)?)
                } else if let Some(rest) = s.strip_prefix('C') {
                    Cycle(num(rest)?)
                } else if let Some(rest) = s.strip_prefix('S') {
                    Star(num(rest)?)
                } else {
                    return Err(bad());
                }
            }
        };
        spec.expand()?;
        Ok(spec)
    }
}

impl From<PatternSpec> for String {
    fn from(p: PatternSpec) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for PatternSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}
