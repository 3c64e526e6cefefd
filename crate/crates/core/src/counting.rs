//! Exact subgraph-copy counts.
//!
//! A copy of `h` in `g` is a pair (vertex subset, edge subset) of `g` forming
//! a graph isomorphic to `h`; copies are not required to be induced. The count
//! is the number of injective edge-preserving maps of the non-isolated core of
//! `h`, divided by the automorphism count of the core, times the number of
//! ways to pick distinct spare vertices for the isolated vertices of `h`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::canon::automorphism_count;
use crate::coloring::EdgeColoring;
use crate::embed::EmbeddingPlan;
use crate::error::{Error, Result};
use crate::graph::SmallGraph;
use crate::pattern::PatternSpec;

/// A pattern prepared for repeated counting.
#[derive(Clone, Debug)]
pub struct CompiledPattern {
    graph: SmallGraph,
    plan: EmbeddingPlan,
    core_automorphisms: u128,
}

impl CompiledPattern {
    pub fn new(h: &SmallGraph) -> Self {
        let plan = EmbeddingPlan::new(h);
        let core = core_graph(h);
        Self {
            graph: *h,
            plan,
            core_automorphisms: automorphism_count(&core),
        }
    }

    pub fn from_spec(spec: &PatternSpec) -> Result<Self> {
        Ok(Self::new(&spec.expand()?))
    }

    pub fn graph(&self) -> &SmallGraph {
        &self.graph
    }

    pub fn plan(&self) -> &EmbeddingPlan {
        &self.plan
    }

    pub fn core_automorphisms(&self) -> u128 {
        self.core_automorphisms
    }

    /// Number of ways to place the isolated pattern vertices once the core
    /// occupies `core_size` host vertices of a host of order `n`.
    pub fn isolated_factor(&self, n: usize) -> u128 {
        if n < self.graph.order() {
            return 0;
        }
        binomial_u128(n - self.plan.core_size(), self.plan.isolated()).expect("C(32, k) fits in u128")
    }

    /// Copies of the core, ignoring isolated pattern vertices.
    pub fn core_copies(&self, g: &SmallGraph) -> u128 {
        let emb = self.plan.count(g);
        debug_assert_eq!(emb % self.core_automorphisms, 0);
        emb / self.core_automorphisms
    }

    pub fn count(&self, g: &SmallGraph) -> BigUint {
        if g.order() < self.graph.order() {
            return BigUint::zero();
        }
        BigUint::from(self.core_copies(g)) * BigUint::from(self.isolated_factor(g.order()))
    }

    /// The same count in machine arithmetic; `None` on overflow.
    pub fn count_u128(&self, g: &SmallGraph) -> Option<u128> {
        if g.order() < self.graph.order() {
            return Some(0);
        }
        self.core_copies(g).checked_mul(self.isolated_factor(g.order()))
    }
}

/// Subgraph of `h` induced on its non-isolated vertices.
pub fn core_graph(h: &SmallGraph) -> SmallGraph {
    let core: Vec<usize> = (0..h.order()).filter(|&v| h.degree(v) > 0).collect();
    let mut index = vec![usize::MAX; h.order()];
    for (i, &v) in core.iter().enumerate() {
        index[v] = i;
    }
    let edges: Vec<_> = h.edges().map(|(u, v)| (index[u], index[v])).collect();
    SmallGraph::from_edges(core.len(), &edges).expect("core is no larger than h")
}

pub fn count_copies(h: &SmallGraph, g: &SmallGraph) -> BigUint {
    CompiledPattern::new(h).count(g)
}

/// Per-pattern copy counts and their total.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountVector {
    #[serde(with = "big_list")]
    pub entries: Vec<BigUint>,
    #[serde(with = "big")]
    pub sum: BigUint,
}

impl CountVector {
    pub fn new(entries: Vec<BigUint>) -> Self {
        let sum = entries.iter().sum();
        Self { entries, sum }
    }

    /// The largest entry, zero for an empty vector.
    pub fn max_entry(&self) -> BigUint {
        self.entries.iter().max().cloned().unwrap_or_default()
    }
}

impl fmt::Display for CountVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        write!(f, "({}) sum {}", parts.join(", "), self.sum)
    }
}

/// Counts pattern `i` among the edges of color `i + 1` only.
pub fn count_colored(patterns: &[PatternSpec], c: &EdgeColoring) -> Result<CountVector> {
    let compiled = patterns.iter().map(CompiledPattern::from_spec).collect::<Result<Vec<_>>>()?;
    count_colored_compiled(&compiled, c)
}

pub fn count_colored_compiled(patterns: &[CompiledPattern], c: &EdgeColoring) -> Result<CountVector> {
    if patterns.len() != c.k() {
        return Err(Error::InvalidColoring(format!(
            "{} patterns but the coloring uses {} colors",
            patterns.len(),
            c.k()
        )));
    }
    Ok(CountVector::new(
        patterns.iter().enumerate().map(|(i, p)| p.count(c.layer(i + 1))).collect(),
    ))
}

/// Counts every pattern in the whole uncolored graph.
pub fn count_all(patterns: &[CompiledPattern], g: &SmallGraph) -> CountVector {
    CountVector::new(patterns.iter().map(|p| p.count(g)).collect())
}

/// Part sizes of a complete multipartite graph, largest first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultipartiteShape {
    parts: Vec<usize>,
}

impl MultipartiteShape {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidConstruction("part sizes must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { parts })
    }

    /// Shape of the Turán graph `T_m(n)`; empty parts are dropped when `m > n`.
    pub fn turan(m: usize, n: usize) -> Self {
        assert!(m >= 1, "Turán graph needs at least one part");
        let parts = (0..m).map(|i| n / m + usize::from(i < n % m)).filter(|&s| s > 0).collect();
        Self { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn order(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn is_turan(&self) -> bool {
        match (self.parts.first(), self.parts.last()) {
            (Some(max), Some(min)) => max - min <= 1,
            _ => true,
        }
    }

    /// The complete multipartite graph; parts occupy consecutive labels.
    pub fn graph(&self) -> Result<SmallGraph> {
        let n = self.order();
        let mut part_of = Vec::with_capacity(n);
        for (p, &s) in self.parts.iter().enumerate() {
            part_of.extend(std::iter::repeat_n(p, s));
        }
        let mut g = SmallGraph::empty(n)?;
        for u in 0..n {
            for v in u + 1..n {
                if part_of[u] != part_of[v] {
                    g.add_edge(u, v);
                }
            }
        }
        Ok(g)
    }
}

/// Copies of `K_r` in the complete multipartite graph of the given shape:
/// the elementary symmetric polynomial of degree `r` in the part sizes.
pub fn count_cliques_multipartite(r: usize, shape: &MultipartiteShape) -> BigUint {
    let mut e = vec![BigUint::zero(); r + 1];
    e[0] = BigUint::one();
    for &s in shape.parts() {
        for j in (1..=r).rev() {
            let add = &e[j - 1] * BigUint::from(s);
            e[j] += add;
        }
    }
    std::mem::take(&mut e[r])
}

/// Copies of `K_{a,b}` in `K_{x,y}`.
pub fn count_bipartite_closed_form(a: usize, b: usize, x: usize, y: usize) -> BigUint {
    let (a, b) = (a.min(b), a.max(b));
    if a == b {
        binomial(x, a) * binomial(y, a)
    } else {
        binomial(x, a) * binomial(y, b) + binomial(x, b) * binomial(y, a)
    }
}

/// `Σ_{uv ∈ E} (d(u) − 1)(d(v) − 1)`, which equals `N(P_4, g) + 3 N(K_3, g)`.
pub fn reduced_zagreb(g: &SmallGraph) -> u64 {
    g.edges()
        .map(|(u, v)| ((g.degree(u) - 1) * (g.degree(v) - 1)) as u64)
        .sum()
}

/// Copies of `h` in `g` that use vertex `v`.
pub fn copies_through(p: &CompiledPattern, g: &SmallGraph, v: usize) -> BigUint {
    p.count(g) - p.count(&g.without_vertex(v))
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

pub fn binomial_u128(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i + 1) as u128;
    }
    Some(acc)
}

/// Serde helpers writing big integers as decimal strings.
pub(crate) mod big {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

mod big_list {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(ToString::to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigUint>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::PatternSpec::*;

    fn g(p: PatternSpec) -> SmallGraph {
        p.expand().unwrap()
    }

    fn n(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn copy_counts() {
        assert_eq!(count_copies(&g(Clique(3)), &g(Clique(4))), n(4));
        assert_eq!(count_copies(&g(Path(5)), &g(Cycle(5))), n(5));
        assert_eq!(count_copies(&g(TwoMatchPlusIsolated), &g(Cycle(5))), n(5));
        assert_eq!(count_copies(&g(Clique(5)), &g(Clique(4))), n(0));
        assert_eq!(count_copies(&g(Clique(1)), &g(Cycle(5))), n(5));
        // one C4 in K_{2,2}
        assert_eq!(count_copies(&g(Cycle(4)), &g(Cycle(4))), n(1));
    }

    #[test]
    fn matchings_in_cliques() {
        // 8! / (2^3 * 3! * 2!)
        let m3 = CompiledPattern::new(&g(Matching(3)));
        assert_eq!(m3.count(&SmallGraph::complete(8).unwrap()), n(420));
        assert_eq!(m3.count_u128(&SmallGraph::complete(8).unwrap()), Some(420));
    }

    #[test]
    fn multipartite_cliques() {
        let s = MultipartiteShape::new(vec![3, 2]).unwrap();
        assert_eq!(count_cliques_multipartite(2, &s), n(6));
        let s = MultipartiteShape::turan(3, 6);
        assert_eq!(count_cliques_multipartite(3, &s), n(8));
        let s = MultipartiteShape::turan(3, 7);
        assert_eq!(s.parts(), &[3, 2, 2]);
        assert_eq!(count_cliques_multipartite(3, &s), n(12));
        assert_eq!(count_copies(&g(Clique(3)), &s.graph().unwrap()), n(12));
    }

    #[test]
    fn bipartite_closed_form() {
        assert_eq!(count_bipartite_closed_form(1, 1, 2, 3), n(6));
        assert_eq!(count_bipartite_closed_form(2, 2, 2, 2), n(1));
        assert_eq!(count_bipartite_closed_form(1, 2, 2, 2), n(4));
        assert_eq!(count_copies(&g(Path(3)), &g(Cycle(4))), n(4));
    }

    #[test]
    fn zagreb_examples() {
        assert_eq!(reduced_zagreb(&g(Cycle(4))), 4);
        assert_eq!(reduced_zagreb(&g(Clique(3))), 3);
        assert_eq!(reduced_zagreb(&SmallGraph::empty(5).unwrap()), 0);
    }

    #[test]
    fn colored_counts() {
        let k6k2 = g(Clique(6)).disjoint_union(&g(Clique(2))).unwrap();
        let mut colors = vec![1u8; 16];
        colors[15] = 2;
        let c = EdgeColoring::from_colors(k6k2, 2, &colors).unwrap();
        let v = count_colored(&[Clique(3), Clique(2)], &c).unwrap();
        assert_eq!(v.entries, vec![n(20), n(1)]);
        assert_eq!(v.sum, n(21));
        let mono = EdgeColoring::uniform(g(Clique(4)), 2, 1).unwrap();
        assert_eq!(count_colored(&[Clique(3), Clique(2)], &mono).unwrap().entries, vec![n(4), n(0)]);
        assert!(count_colored(&[Clique(3)], &mono).is_err());
    }

    #[test]
    fn count_vector_json_uses_strings() {
        let v = CountVector::new(vec![n(20), n(1)]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"entries":["20","1"],"sum":"21"}"#);
        assert_eq!(serde_json::from_str::<CountVector>(&s).unwrap(), v);
    }

    #[test]
    fn copies_through_vertex() {
        let k3 = CompiledPattern::new(&g(Clique(3)));
        let k4 = g(Clique(4));
        assert_eq!(copies_through(&k3, &k4, 0), n(3));
    }
}
