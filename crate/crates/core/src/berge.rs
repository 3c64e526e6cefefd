//! Uniform hypergraphs and Berge copies of graphs.
//!
//! A hypergraph contains a Berge copy of `F` if some injective map of
//! `V(F)` into its vertices admits distinct hyperedges, one per edge `uv` of
//! `F`, each containing the images of `u` and `v`.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::counting::{binomial_u128, core_graph};
use crate::embed::EmbeddingPlan;
use crate::error::{Error, Result};
use crate::graph::{bit, Bits, SmallGraph, MAX_ORDER};
use crate::pattern::PatternSpec;
use crate::search::{cex_multi, ex_multi, SearchOptions, SearchProblem};

/// Largest number of candidate hyperedges the exact search accepts.
pub const MAX_CANDIDATE_EDGES: u128 = 30;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Hypergraph {
    n: usize,
    r: usize,
    edges: Vec<u32>,
}

impl Hypergraph {
    pub fn new(n: usize, r: usize, edges: impl IntoIterator<Item = u32>) -> Result<Self> {
        if n > MAX_ORDER {
            return Err(Error::OrderTooLarge(n));
        }
        let mask = crate::graph::low_mask(n);
        let mut edges: Vec<u32> = edges.into_iter().collect();
        for &e in &edges {
            if e & !mask != 0 || e.count_ones() as usize != r {
                return Err(Error::InvalidHypergraph(format!(
                    "hyperedge {:?} is not an {r}-subset of {n} vertices",
                    Bits(e).collect::<Vec<_>>()
                )));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self { n, r, edges })
    }

    pub fn from_vertex_lists(n: usize, r: usize, lists: &[Vec<usize>]) -> Result<Self> {
        let mut edges = Vec::with_capacity(lists.len());
        for list in lists {
            if list.iter().any(|&v| v >= n) {
                return Err(Error::InvalidHypergraph(format!("vertex out of range in {list:?}")));
            }
            let e = list.iter().fold(0u32, |m, &v| m | bit(v));
            if e.count_ones() as usize != list.len() {
                return Err(Error::InvalidHypergraph(format!("repeated vertex in {list:?}")));
            }
            edges.push(e);
        }
        Self::new(n, r, edges)
    }

    /// Every `r`-subset of `n` vertices, sorted by bit pattern.
    pub fn complete(n: usize, r: usize) -> Result<Self> {
        Self::new(n, r, all_subsets(n, r))
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn uniformity(&self) -> usize {
        self.r
    }

    pub fn edges(&self) -> &[u32] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `n r m` on the first line, then one sorted vertex list per hyperedge.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.n, self.r, self.edges.len());
        for &e in &self.edges {
            out.push_str(&Bits(e).join(" "));
            out.push('\n');
        }
        out
    }
}

fn all_subsets(n: usize, r: usize) -> Vec<u32> {
    let mut out: Vec<u32> = (0..n)
        .combinations(r)
        .map(|c| c.iter().fold(0u32, |m, &v| m | bit(v)))
        .collect();
    out.sort_unstable();
    out
}

impl FromStr for Hypergraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let bad = |msg: &str| Error::InvalidHypergraph(msg.to_string());
        let header: Vec<usize> = lines
            .next()
            .ok_or_else(|| bad("missing header"))?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("header must be three integers")))
            .collect::<Result<_>>()?;
        let [n, r, m] = header[..] else {
            return Err(bad("header must be `n r m`"));
        };
        let lists: Vec<Vec<usize>> = lines
            .map(|l| {
                l.split_whitespace()
                    .map(|t| t.parse().map_err(|_| bad("vertex indices must be integers")))
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<_>>()?;
        if lists.len() != m {
            return Err(bad(&format!("header announces {m} hyperedges, found {}", lists.len())));
        }
        let h = Self::from_vertex_lists(n, r, &lists)?;
        if h.len() != m {
            return Err(bad("duplicate hyperedges"));
        }
        Ok(h)
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl From<Hypergraph> for String {
    fn from(h: Hypergraph) -> String {
        h.to_text()
    }
}

impl TryFrom<String> for Hypergraph {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Berge containment tester for one fixed graph.
#[derive(Clone, Debug)]
pub struct BergeTester {
    order: usize,
    /// Core vertices in matching order.
    core: Vec<u8>,
    /// Edges as pairs of positions in `core`, listed once both ends are placed:
    /// `closing[i]` holds the edges whose later endpoint is position `i`.
    closing: Vec<Vec<(u8, u8)>>,
    edge_count: usize,
}

impl BergeTester {
    pub fn new(f: &SmallGraph) -> Self {
        let plan = EmbeddingPlan::new(f);
        let core = plan.core_vertices().to_vec();
        let mut position = [0u8; MAX_ORDER];
        for (i, &v) in core.iter().enumerate() {
            position[v as usize] = i as u8;
        }
        let mut closing = vec![Vec::new(); core.len()];
        for (u, v) in f.edges() {
            let (a, b) = (position[u], position[v]);
            closing[a.max(b) as usize].push((a.min(b), a.max(b)));
        }
        debug_assert_eq!(core_graph(f).edge_count(), f.edge_count());
        Self {
            order: f.order(),
            core,
            closing,
            edge_count: f.edge_count(),
        }
    }

    pub fn contains(&self, h: &Hypergraph) -> bool {
        if h.order() < self.order || h.len() < self.edge_count {
            return false;
        }
        if self.core.is_empty() {
            return true;
        }
        let mut search = BergeSearch {
            t: self,
            h,
            images: vec![0; self.core.len()],
            placed: Vec::new(),
            used: 0,
        };
        search.place(0)
    }
}

struct BergeSearch<'a> {
    t: &'a BergeTester,
    h: &'a Hypergraph,
    images: Vec<usize>,
    /// Host vertex pairs of the edges whose endpoints are both placed.
    placed: Vec<u32>,
    used: u32,
}

impl BergeSearch<'_> {
    fn place(&mut self, i: usize) -> bool {
        if i == self.t.core.len() {
            return true;
        }
        for x in 0..self.h.order() {
            if self.used & bit(x) != 0 {
                continue;
            }
            self.images[i] = x;
            let mark = self.placed.len();
            for &(a, b) in &self.t.closing[i] {
                let pair = bit(self.images[a as usize]) | bit(self.images[b as usize]);
                self.placed.push(pair);
            }
            if has_system_of_distinct_edges(&self.placed, self.h.edges()) {
                self.used |= bit(x);
                if self.place(i + 1) {
                    return true;
                }
                self.used &= !bit(x);
            }
            self.placed.truncate(mark);
        }
        false
    }
}

/// Whether every pair can be assigned its own hyperedge containing it
/// (bipartite matching by augmenting paths).
fn has_system_of_distinct_edges(pairs: &[u32], edges: &[u32]) -> bool {
    if pairs.len() > edges.len() {
        return false;
    }
    let mut owner: Vec<Option<usize>> = vec![None; edges.len()];
    for p in 0..pairs.len() {
        let mut visited = vec![false; edges.len()];
        if !augment(p, pairs, edges, &mut owner, &mut visited) {
            return false;
        }
    }
    true
}

fn augment(p: usize, pairs: &[u32], edges: &[u32], owner: &mut [Option<usize>], visited: &mut [bool]) -> bool {
    for (e, &he) in edges.iter().enumerate() {
        if he & pairs[p] != pairs[p] || visited[e] {
            continue;
        }
        visited[e] = true;
        if owner[e].is_none_or(|q| augment(q, pairs, edges, owner, visited)) {
            owner[e] = Some(p);
            return true;
        }
    }
    false
}

pub fn contains_berge(h: &Hypergraph, f: &SmallGraph) -> bool {
    BergeTester::new(f).contains(h)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BergeSearchResult {
    pub n: usize,
    pub r: usize,
    pub forbidden: PatternSpec,
    pub value: usize,
    pub witness: Hypergraph,
    pub exact: bool,
    pub nodes: u64,
    pub elapsed: f64,
}

/// `ex_r(n, Berge-F)` by branch and bound over the `r`-subsets.
pub fn ex_berge(n: usize, r: usize, f: &PatternSpec) -> Result<BergeSearchResult> {
    let start = Instant::now();
    let g = f.expand()?;
    if g.edge_count() == 0 {
        return Err(Error::InvalidPattern(format!("forbidden graph {f} must have an edge")));
    }
    if r == 0 || r > n.max(1) {
        return Err(Error::InvalidHypergraph(format!("uniformity {r} does not fit {n} vertices")));
    }
    let candidates_count = binomial_u128(n, r).unwrap_or(u128::MAX);
    if candidates_count > MAX_CANDIDATE_EDGES {
        return Err(Error::Infeasible {
            reason: format!("C({n},{r}) = {candidates_count} candidate hyperedges exceed {MAX_CANDIDATE_EDGES}"),
            estimate: format!("2^{candidates_count}"),
        });
    }
    let candidates = all_subsets(n, r);
    let tester = BergeTester::new(&g);
    let mut bb = BergeBranch {
        n,
        r,
        tester: &tester,
        candidates: &candidates,
        chosen: Vec::new(),
        best: Vec::new(),
        nodes: 0,
    };
    bb.dfs(0);
    let witness = Hypergraph::new(n, r, bb.best.clone())?;
    if tester.contains(&witness) {
        return Err(Error::InvariantViolation(format!(
            "Berge search witness contains Berge-{f}:\n{}",
            witness.to_text()
        )));
    }
    Ok(BergeSearchResult {
        n,
        r,
        forbidden: f.clone(),
        value: witness.len(),
        witness,
        exact: true,
        nodes: bb.nodes,
        elapsed: start.elapsed().as_secs_f64(),
    })
}

struct BergeBranch<'a> {
    n: usize,
    r: usize,
    tester: &'a BergeTester,
    candidates: &'a [u32],
    chosen: Vec<u32>,
    best: Vec<u32>,
    nodes: u64,
}

impl BergeBranch<'_> {
    fn dfs(&mut self, i: usize) {
        self.nodes += 1;
        if self.chosen.len() + (self.candidates.len() - i) <= self.best.len() {
            return;
        }
        if i == self.candidates.len() {
            self.best = self.chosen.clone();
            return;
        }
        self.chosen.push(self.candidates[i]);
        let h = Hypergraph {
            n: self.n,
            r: self.r,
            edges: self.chosen.clone(),
        };
        if !self.tester.contains(&h) {
            self.dfs(i + 1);
        }
        self.chosen.pop();
        self.dfs(i + 1);
    }
}

/// `ex(n,K_r,F) ≤ ex_r(n,Berge-F) ≤ cex(n,(K_r,K_2),F)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BergeSandwichReport {
    pub n: usize,
    pub r: usize,
    pub forbidden: PatternSpec,
    pub clique_ex: u128,
    pub berge_ex: usize,
    pub colored_ex: u128,
    pub exact: bool,
}

impl BergeSandwichReport {
    pub fn holds(&self) -> bool {
        self.clique_ex <= self.berge_ex as u128 && self.berge_ex as u128 <= self.colored_ex
    }
}

pub fn berge_sandwich_check(n: usize, r: usize, f: &PatternSpec, opts: &SearchOptions) -> Result<BergeSandwichReport> {
    let to_u128 = |v: num_bigint::BigUint| -> Result<u128> {
        u128::try_from(v).map_err(|_| Error::Unsupported("value exceeds 128 bits".into()))
    };
    let lower = ex_multi(&SearchProblem::monochrome(n, vec![PatternSpec::Clique(r)], f.clone())?, opts)?;
    let upper = cex_multi(
        &SearchProblem::colored(n, vec![PatternSpec::Clique(r), PatternSpec::Clique(2)], f.clone())?,
        opts,
    )?;
    let berge = ex_berge(n, r, f)?;
    let report = BergeSandwichReport {
        n,
        r,
        forbidden: f.clone(),
        clique_ex: to_u128(lower.value)?,
        berge_ex: berge.value,
        colored_ex: to_u128(upper.value)?,
        exact: upper.exact,
    };
    if report.exact && !report.holds() {
        return Err(Error::InvariantViolation(format!(
            "Berge chain fails for n={n}, r={r}, F={f}: {} <= {} <= {} (Berge witness:\n{})",
            report.clique_ex,
            report.berge_ex,
            report.colored_ex,
            berge.witness.to_text()
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use PatternSpec::*;

    fn hg(n: usize, lists: &[&[usize]]) -> Hypergraph {
        let lists: Vec<Vec<usize>> = lists.iter().map(|l| l.to_vec()).collect();
        Hypergraph::from_vertex_lists(n, 3, &lists).unwrap()
    }

    fn graph(p: PatternSpec) -> SmallGraph {
        p.expand().unwrap()
    }

    #[test]
    fn containment_examples() {
        assert!(contains_berge(&hg(3, &[&[0, 1, 2]]), &graph(Clique(2))));
        assert!(!contains_berge(&hg(6, &[&[0, 1, 2], &[3, 4, 5]]), &graph(Path(3))));
        assert!(contains_berge(&Hypergraph::complete(4, 3).unwrap(), &graph(Clique(3))));
        assert!(!contains_berge(&hg(4, &[&[0, 1, 2], &[0, 1, 3]]), &graph(Clique(3))));
    }

    #[test]
    fn small_extremal_values() {
        assert_eq!(ex_berge(4, 3, &Clique(3)).unwrap().value, 2);
        for n in 3..=6 {
            assert_eq!(ex_berge(n, 3, &Clique(2)).unwrap().value, 0);
        }
        assert!(matches!(ex_berge(7, 3, &Clique(3)), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn text_format_roundtrip() {
        let h = hg(5, &[&[2, 3, 4], &[0, 1, 2]]);
        let text = h.to_text();
        assert_eq!(text, "5 3 2\n0 1 2\n2 3 4\n");
        assert_eq!(text.parse::<Hypergraph>().unwrap(), h);
        assert!("5 3 3\n0 1 2\n".parse::<Hypergraph>().is_err());
        assert!("4 3 1\n0 1 9\n".parse::<Hypergraph>().is_err());
        assert!(Hypergraph::new(4, 3, [0b11]).is_err());
    }

    #[test]
    fn sandwich_small() {
        let r = berge_sandwich_check(4, 3, &Clique(3), &SearchOptions::default()).unwrap();
        assert_eq!((r.clique_ex, r.berge_ex, r.colored_ex), (0, 2, 4));
    }
}
