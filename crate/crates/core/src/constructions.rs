//! Named extremal constructions, plain and colored.
//!
//! Colored constructions use two colors: color 1 ("blue") for the first
//! pattern of a pair and color 2 ("red") for the second.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coloring::EdgeColoring;
use crate::counting::{count_all, count_colored, CompiledPattern, CountVector, MultipartiteShape};
use crate::embed::contains_subgraph;
use crate::error::{Error, Result};
use crate::graph::{SmallGraph, MAX_ORDER};
use crate::pattern::PatternSpec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum ConstructionSpec {
    /// `T_m(n)`.
    TuranGraph(usize, usize),
    /// `T_2(n)` plus the edge joining the two lowest vertices of the larger part.
    TuranPlusEdge(usize),
    /// Each base vertex `v` becomes an independent set of `sizes[v]` vertices.
    Blowup(PatternSpec, Vec<usize>),
    /// `⌊n/(ℓ−1)⌋` disjoint copies of `K_{ℓ−1}` and a clique on the rest.
    DisjointCliquesPlusRemainder(usize, usize),
    /// The star on `n` vertices with a maximum matching on its leaves.
    StarPlusMatching(usize),
    /// As `StarPlusMatching`, star edges blue and matching edges red.
    ColoredFnStar(usize),
    /// Blue `T_2(n)` plus a red edge inside the larger part.
    BlueTuranRedEdge(usize),
    /// `p` disjoint blue copies of `K_6` and one red edge on the last two vertices.
    BlueK6PacksRedEdge(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Built {
    Plain(SmallGraph),
    Colored(EdgeColoring),
}

impl Built {
    pub fn graph(&self) -> &SmallGraph {
        match self {
            Built::Plain(g) => g,
            Built::Colored(c) => c.base(),
        }
    }

    pub fn coloring(&self) -> Option<&EdgeColoring> {
        match self {
            Built::Plain(_) => None,
            Built::Colored(c) => Some(c),
        }
    }
}

impl ConstructionSpec {
    pub fn is_colored(&self) -> bool {
        matches!(
            self,
            Self::ColoredFnStar(_) | Self::BlueTuranRedEdge(_) | Self::BlueK6PacksRedEdge(_)
        )
    }

    pub fn order(&self) -> usize {
        use ConstructionSpec::*;
        match self {
            TuranGraph(_, n)
            | TuranPlusEdge(n)
            | DisjointCliquesPlusRemainder(_, n)
            | StarPlusMatching(n)
            | ColoredFnStar(n)
            | BlueTuranRedEdge(n) => *n,
            Blowup(_, sizes) => sizes.iter().sum(),
            BlueK6PacksRedEdge(p) => 6 * p + 2,
        }
    }

    /// The forbidden graph this construction is designed to avoid.
    pub fn designated_forbidden(&self) -> Option<PatternSpec> {
        use ConstructionSpec::*;
        Some(match self {
            TuranGraph(m, _) => PatternSpec::Clique(m + 1),
            TuranPlusEdge(_) | BlueTuranRedEdge(_) => PatternSpec::Fan2,
            StarPlusMatching(_) | ColoredFnStar(_) => PatternSpec::Cycle(4),
            DisjointCliquesPlusRemainder(l, _) => PatternSpec::Star(*l),
            Blowup(PatternSpec::Cycle(5), _) => PatternSpec::Clique(3),
            Blowup(..) => return None,
            BlueK6PacksRedEdge(_) => PatternSpec::Star(7),
        })
    }

    pub fn build(&self) -> Result<Built> {
        use ConstructionSpec::*;
        let bad = |msg: String| Err(Error::InvalidConstruction(format!("{self}: {msg}")));
        let n = self.order();
        if n > MAX_ORDER {
            return bad(format!("order {n} exceeds {MAX_ORDER}"));
        }
        match self {
            TuranGraph(m, n) => {
                if *m == 0 {
                    return bad("needs at least one part".into());
                }
                Ok(Built::Plain(turan(*m, *n)?))
            }
            TuranPlusEdge(n) => {
                if *n < 3 {
                    return bad("needs at least 3 vertices".into());
                }
                let mut g = turan(2, *n)?;
                g.add_edge(0, 1);
                Ok(Built::Plain(g))
            }
            Blowup(base, sizes) => {
                let b = base.expand()?;
                if sizes.len() != b.order() {
                    return bad(format!("{} part sizes for a base of order {}", sizes.len(), b.order()));
                }
                if sizes.contains(&0) {
                    return bad("part sizes must be positive".into());
                }
                let mut part = Vec::with_capacity(n);
                for (v, &s) in sizes.iter().enumerate() {
                    part.extend(std::iter::repeat_n(v, s));
                }
                let mut g = SmallGraph::empty(n)?;
                for x in 0..n {
                    for y in x + 1..n {
                        if b.has_edge(part[x], part[y]) {
                            g.add_edge(x, y);
                        }
                    }
                }
                Ok(Built::Plain(g))
            }
            DisjointCliquesPlusRemainder(l, n) => {
                if *l < 2 {
                    return bad("clique order ℓ−1 must be at least 1".into());
                }
                let s = l - 1;
                let mut g = SmallGraph::empty(*n)?;
                let full = n / s;
                let mut blocks: Vec<(usize, usize)> = (0..full).map(|i| (i * s, s)).collect();
                blocks.push((full * s, n % s));
                for (start, size) in blocks {
                    for u in start..start + size {
                        for v in u + 1..start + size {
                            g.add_edge(u, v);
                        }
                    }
                }
                Ok(Built::Plain(g))
            }
            StarPlusMatching(n) => Ok(Built::Plain(fn_graph(*n)?)),
            ColoredFnStar(n) => {
                let g = fn_graph(*n)?;
                let mut c = EdgeColoring::uniform(g, 2, 1)?;
                for (u, v) in g.edges().filter(|&(u, _)| u != 0) {
                    c.set_edge(u, v, 2)?;
                }
                Ok(Built::Colored(c))
            }
            BlueTuranRedEdge(n) => {
                if *n < 3 {
                    return bad("needs at least 3 vertices".into());
                }
                let mut c = EdgeColoring::uniform(turan(2, *n)?, 2, 1)?;
                c.set_edge(0, 1, 2)?;
                Ok(Built::Colored(c))
            }
            BlueK6PacksRedEdge(p) => {
                if *p == 0 {
                    return bad("needs at least one pack".into());
                }
                let mut c = EdgeColoring::uniform(SmallGraph::empty(n)?, 2, 1)?;
                for i in 0..*p {
                    for u in 6 * i..6 * i + 6 {
                        for v in u + 1..6 * i + 6 {
                            c.set_edge(u, v, 1)?;
                        }
                    }
                }
                c.set_edge(n - 2, n - 1, 2)?;
                Ok(Built::Colored(c))
            }
        }
    }

    /// Pattern counts of the construction; colored constructions count
    /// pattern `i` in color `i + 1`.
    pub fn evaluate(&self, patterns: &[PatternSpec]) -> Result<CountVector> {
        match self.build()? {
            Built::Plain(g) => {
                let compiled = patterns.iter().map(CompiledPattern::from_spec).collect::<Result<Vec<_>>>()?;
                Ok(count_all(&compiled, &g))
            }
            Built::Colored(c) => {
                if patterns.len() != c.k() {
                    return Err(Error::InvalidConstruction(format!(
                        "{self} is {}-colored but {} patterns were given",
                        c.k(),
                        patterns.len()
                    )));
                }
                count_colored(patterns, &c)
            }
        }
    }

    /// Whether the underlying uncolored graph avoids `f`.
    pub fn is_free(&self, f: &PatternSpec) -> Result<bool> {
        let built = self.build()?;
        Ok(!contains_subgraph(built.graph(), &f.expand()?))
    }
}

fn turan(m: usize, n: usize) -> Result<SmallGraph> {
    MultipartiteShape::turan(m, n).graph()
}

fn fn_graph(n: usize) -> Result<SmallGraph> {
    if n == 0 {
        return Err(Error::InvalidConstruction("fn needs at least one vertex".into()));
    }
    PatternSpec::StarPlusMatching(n).expand()
}

impl fmt::Display for ConstructionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ConstructionSpec::*;
        match self {
            TuranGraph(m, n) => write!(f, "turan:{m},{n}"),
            TuranPlusEdge(n) => write!(f, "turanplus:{n}"),
            Blowup(base, sizes) => {
                let s: Vec<String> = sizes.iter().map(ToString::to_string).collect();
                write!(f, "blowup:{base}@{}", s.join(","))
            }
            DisjointCliquesPlusRemainder(l, n) => write!(f, "cliques:{l},{n}"),
            StarPlusMatching(n) => write!(f, "fn:{n}"),
            ColoredFnStar(n) => write!(f, "fnstar:{n}"),
            BlueTuranRedEdge(n) => write!(f, "blueturan:{n}"),
            BlueK6PacksRedEdge(p) => write!(f, "k6packs:{p}"),
        }
    }
}

impl FromStr for ConstructionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use ConstructionSpec::*;
        let bad = || Error::InvalidConstruction(format!("unrecognized construction '{s}'"));
        let (name, args) = s.trim().split_once(':').ok_or_else(bad)?;
        let nums = |t: &str| -> Result<Vec<usize>> {
            t.split(',').map(|x| x.trim().parse::<usize>().map_err(|_| bad())).collect()
        };
        let one = |t: &str| -> Result<usize> {
            match nums(t)?.as_slice() {
                [a] => Ok(*a),
                _ => Err(bad()),
            }
        };
        let two = |t: &str| -> Result<(usize, usize)> {
            match nums(t)?.as_slice() {
                [a, b] => Ok((*a, *b)),
                _ => Err(bad()),
            }
        };
        Ok(match name {
            "turan" => {
                let (m, n) = two(args)?;
                TuranGraph(m, n)
            }
            "turanplus" => TuranPlusEdge(one(args)?),
            "blowup" => {
                let (base, sizes) = args.rsplit_once('@').ok_or_else(bad)?;
                Blowup(base.parse()?, nums(sizes)?)
            }
            "cliques" => {
                let (l, n) = two(args)?;
                DisjointCliquesPlusRemainder(l, n)
            }
            "fn" => StarPlusMatching(one(args)?),
            "fnstar" => ColoredFnStar(one(args)?),
            "blueturan" => BlueTuranRedEdge(one(args)?),
            "k6packs" => BlueK6PacksRedEdge(one(args)?),
            _ => return Err(bad()),
        })
    }
}

impl From<ConstructionSpec> for String {
    fn from(c: ConstructionSpec) -> String {
        c.to_string()
    }
}

impl TryFrom<String> for ConstructionSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use ConstructionSpec::*;
    use PatternSpec::*;

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn builds_have_expected_shapes() {
        let g = TuranGraph(2, 5).build().unwrap();
        assert_eq!(g.graph().edge_count(), 6);
        let fnstar = ColoredFnStar(9).build().unwrap();
        let c = fnstar.coloring().unwrap();
        assert_eq!(c.layer(1).edge_count(), 8);
        assert_eq!(c.layer(2).edge_count(), 4);
        let g = DisjointCliquesPlusRemainder(7, 8).build().unwrap();
        let expected = SmallGraph::complete(6).unwrap().disjoint_union(&SmallGraph::complete(2).unwrap()).unwrap();
        assert_eq!(*g.graph(), expected);
        let g = Blowup(Cycle(5), vec![2, 2, 2, 1, 1]).build().unwrap();
        assert_eq!(g.graph().edge_count(), 4 + 4 + 2 + 1 + 2);
    }

    #[test]
    fn evaluations() {
        assert_eq!(BlueK6PacksRedEdge(1).evaluate(&[Clique(3), Clique(2)]).unwrap().entries, big(&[20, 1]));
        let v = ColoredFnStar(9).evaluate(&[Star(4), Matching(2)]).unwrap();
        assert_eq!(v.entries, big(&[56, 6]));
        assert_eq!(v.sum, BigUint::from(62u32));
        assert_eq!(TuranGraph(2, 6).evaluate(&[Clique(3)]).unwrap().entries, big(&[0]));
        assert!(BlueK6PacksRedEdge(1).evaluate(&[Clique(3)]).is_err());
    }

    #[test]
    fn constructions_avoid_their_forbidden_graphs() {
        assert!(TuranPlusEdge(8).is_free(&Fan2).unwrap());
        assert!(TuranGraph(3, 9).is_free(&Clique(4)).unwrap());
        assert!(DisjointCliquesPlusRemainder(7, 8).is_free(&Star(7)).unwrap());
        assert!(!TuranPlusEdge(8).is_free(&Clique(3)).unwrap());
    }

    #[test]
    fn parameter_errors() {
        assert!(TuranGraph(0, 4).build().is_err());
        assert!(BlueK6PacksRedEdge(0).build().is_err());
        assert!(BlueK6PacksRedEdge(6).build().is_err());
        assert!(Blowup(Cycle(5), vec![1, 2]).build().is_err());
    }

    #[test]
    fn cli_strings_roundtrip() {
        for s in ["turan:3,9", "turanplus:8", "blowup:C5@2,2,2,1,1", "cliques:7,8", "fn:9", "fnstar:9", "blueturan:6", "k6packs:1"] {
            let spec: ConstructionSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("turan:3".parse::<ConstructionSpec>().is_err());
        assert!("pentagon:5".parse::<ConstructionSpec>().is_err());
    }
}
