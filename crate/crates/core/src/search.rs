//! Exact generalized Turán numbers by exhaustive enumeration.

use std::sync::Mutex;
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::colorsearch::{self, DEFAULT_NODE_BUDGET};
use crate::counting::{count_bipartite_closed_form, CompiledPattern};
use crate::enumerate::{free_graphs, EnumerationOptions, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::graph::{SmallGraph, MAX_ORDER};
use crate::pattern::PatternSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Monochrome,
    Colored,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchProblem {
    pub n: usize,
    pub patterns: Vec<PatternSpec>,
    pub forbidden: PatternSpec,
    pub mode: Mode,
}

impl SearchProblem {
    pub fn new(n: usize, patterns: Vec<PatternSpec>, forbidden: PatternSpec, mode: Mode) -> Result<Self> {
        let p = Self {
            n,
            patterns,
            forbidden,
            mode,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn monochrome(n: usize, patterns: Vec<PatternSpec>, forbidden: PatternSpec) -> Result<Self> {
        Self::new(n, patterns, forbidden, Mode::Monochrome)
    }

    pub fn colored(n: usize, patterns: Vec<PatternSpec>, forbidden: PatternSpec) -> Result<Self> {
        Self::new(n, patterns, forbidden, Mode::Colored)
    }

    pub fn k(&self) -> usize {
        self.patterns.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.patterns.is_empty() {
            return Err(Error::InvalidPattern("at least one counted pattern is required".into()));
        }
        if self.n > MAX_ORDER {
            return Err(Error::OrderTooLarge(self.n));
        }
        if self.forbidden.expand()?.edge_count() == 0 {
            return Err(Error::InvalidPattern(format!(
                "forbidden graph {} must have an edge",
                self.forbidden
            )));
        }
        for p in &self.patterns {
            p.expand()?;
        }
        Ok(())
    }

    fn with_mode(&self, mode: Mode) -> Self {
        Self { mode, ..self.clone() }
    }

    fn single(&self, i: usize) -> Self {
        Self {
            patterns: vec![self.patterns[i].clone()],
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub problem: SearchProblem,
    #[serde(with = "crate::counting::big")]
    pub value: BigUint,
    pub witness_graph: String,
    pub witness_coloring: Option<Vec<u8>>,
    pub exact: bool,
    pub graphs_enumerated: u64,
    pub colorings_explored: u64,
    pub elapsed: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub enumeration_cap: usize,
    pub node_budget: u64,
    pub progress: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            node_budget: DEFAULT_NODE_BUDGET,
            progress: false,
        }
    }
}

impl SearchOptions {
    fn enumeration(&self) -> EnumerationOptions {
        EnumerationOptions {
            cap: self.enumeration_cap,
            progress: self.progress,
        }
    }
}

fn compile(patterns: &[PatternSpec]) -> Result<Vec<CompiledPattern>> {
    patterns.iter().map(CompiledPattern::from_spec).collect()
}

fn total(patterns: &[CompiledPattern], g: &SmallGraph) -> BigUint {
    patterns.iter().map(|p| p.count(g)).sum()
}

/// `ex(n, (H_1..H_k), F)`: the largest total copy count over F-free graphs.
pub fn ex_multi(p: &SearchProblem, opts: &SearchOptions) -> Result<SearchResult> {
    p.validate()?;
    if p.mode != Mode::Monochrome {
        return Err(Error::InvalidPattern("ex_multi expects a monochrome problem".into()));
    }
    let start = Instant::now();
    let f = p.forbidden.expand()?;
    let patterns = compile(&p.patterns)?;
    let graphs = free_graphs(p.n, &f, &opts.enumeration())?;
    let scored: Vec<(BigUint, String)> = graphs
        .par_iter()
        .map(|g| (total(&patterns, g), g.to_graph6()))
        .collect();
    let (value, witness) = scored
        .into_iter()
        .reduce(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
        .expect("the edgeless graph is always F-free");
    Ok(SearchResult {
        problem: p.clone(),
        value,
        witness_graph: witness,
        witness_coloring: None,
        exact: true,
        graphs_enumerated: graphs.len() as u64,
        colorings_explored: 0,
        elapsed: start.elapsed().as_secs_f64(),
    })
}

/// `cex(n, (H_1..H_k), F)`: the largest colored total over F-free graphs and
/// all total k-colorings of their edges.
pub fn cex_multi(p: &SearchProblem, opts: &SearchOptions) -> Result<SearchResult> {
    p.validate()?;
    if p.mode != Mode::Colored {
        return Err(Error::InvalidPattern("cex_multi expects a colored problem".into()));
    }
    let start = Instant::now();
    let f = p.forbidden.expand()?;
    let patterns = compile(&p.patterns)?;
    let graphs = free_graphs(p.n, &f, &opts.enumeration())?;

    // Hosts with the largest uncolored totals first: they tend to hold the
    // optimum, which then prunes everything whose total is smaller.
    let mut order: Vec<(u128, usize)> = graphs
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            let ub = patterns
                .iter()
                .try_fold(0u128, |acc, q| acc.checked_add(q.count_u128(g)?))
                .ok_or_else(|| Error::Unsupported("copy count exceeds 128 bits".into()))?;
            Ok((ub, i))
        })
        .collect::<Result<_>>()?;
    order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));

    struct Best {
        value: u128,
        witness: Option<(String, Vec<u8>)>,
    }
    let best = Mutex::new(Best {
        value: 0,
        witness: None,
    });
    let explored = std::sync::atomic::AtomicU64::new(0);
    let inexact = std::sync::atomic::AtomicBool::new(false);
    let failure: Mutex<Option<Error>> = Mutex::new(None);

    order.par_iter().for_each(|&(ub, i)| {
        let floor = {
            let b = best.lock().expect("best lock");
            if b.witness.is_some() && ub < b.value {
                return;
            }
            b.witness.as_ref().map(|_| b.value)
        };
        let g = &graphs[i];
        match colorsearch::search(g, &patterns, &p.patterns, floor, opts.node_budget) {
            Err(e) => {
                failure.lock().expect("failure lock").get_or_insert(e);
            }
            Ok(found) => {
                if let Some(r) = found {
                    explored.fetch_add(r.explored, std::sync::atomic::Ordering::Relaxed);
                    if !r.exact {
                        inexact.store(true, std::sync::atomic::Ordering::Relaxed);
                    }
                    let cand = (g.to_graph6(), r.coloring.colors());
                    let mut b = best.lock().expect("best lock");
                    let better = match &b.witness {
                        None => true,
                        Some(w) => r.value > b.value || (r.value == b.value && cand < *w),
                    };
                    if better {
                        b.value = r.value;
                        b.witness = Some(cand);
                    }
                }
            }
        }
    });
    if let Some(e) = failure.into_inner().expect("failure lock") {
        return Err(e);
    }
    let best = best.into_inner().expect("best lock");
    let (witness_graph, colors) = best.witness.expect("some host is always searched");
    Ok(SearchResult {
        problem: p.clone(),
        value: BigUint::from(best.value),
        witness_graph,
        witness_coloring: Some(colors),
        exact: !inexact.into_inner(),
        graphs_enumerated: graphs.len() as u64,
        colorings_explored: explored.into_inner(),
        elapsed: start.elapsed().as_secs_f64(),
    })
}

/// Every term of the chain
/// `max_i ex(n,H_i,F) ≤ cex(n,(H_i),F) ≤ ex(n,(H_i),F) ≤ Σ_i ex(n,H_i,F)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub problem: SearchProblem,
    #[serde(with = "big_vec")]
    pub singles: Vec<BigUint>,
    #[serde(with = "crate::counting::big")]
    pub cex: BigUint,
    #[serde(with = "crate::counting::big")]
    pub ex: BigUint,
    #[serde(with = "crate::counting::big")]
    pub sum_of_singles: BigUint,
    pub exact: bool,
}

impl SandwichReport {
    pub fn max_single(&self) -> BigUint {
        self.singles.iter().max().cloned().unwrap_or_default()
    }

    pub fn holds(&self) -> bool {
        self.max_single() <= self.cex && self.cex <= self.ex && self.ex <= self.sum_of_singles
    }
}

pub fn sandwich_check(p: &SearchProblem, opts: &SearchOptions) -> Result<SandwichReport> {
    let mono = p.with_mode(Mode::Monochrome);
    let singles = (0..p.k())
        .map(|i| ex_multi(&mono.single(i), opts).map(|r| r.value))
        .collect::<Result<Vec<_>>>()?;
    let ex = ex_multi(&mono, opts)?;
    let cex = cex_multi(&p.with_mode(Mode::Colored), opts)?;
    let report = SandwichReport {
        problem: p.with_mode(Mode::Colored),
        sum_of_singles: singles.iter().sum(),
        singles,
        cex: cex.value,
        ex: ex.value,
        exact: cex.exact,
    };
    if report.exact && !report.holds() {
        return Err(Error::InvariantViolation(format!(
            "sandwich chain fails: singles {:?}, cex {} (witness {} colors {:?}), ex {} (witness {})",
            report.singles.iter().map(ToString::to_string).collect::<Vec<_>>(),
            report.cex,
            cex.witness_graph,
            cex.witness_coloring,
            report.ex,
            ex.witness_graph
        )));
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteScan {
    pub n: usize,
    pub patterns: Vec<PatternSpec>,
    /// Smaller part size of the best split (smallest on ties).
    pub best_x: usize,
    #[serde(with = "crate::counting::big")]
    pub value: BigUint,
    /// `(x, Σ_i N(H_i, K_{x,n−x}))` for `x = 0..=n/2`.
    pub table: Vec<ScanRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub x: usize,
    #[serde(with = "crate::counting::big")]
    pub value: BigUint,
}

pub fn bipartite_scan(n: usize, patterns: &[PatternSpec]) -> Result<BipartiteScan> {
    if patterns.is_empty() {
        return Err(Error::InvalidPattern("at least one pattern is required".into()));
    }
    let parts = patterns
        .iter()
        .map(|p| {
            p.bipartite_parts()
                .ok_or_else(|| Error::InvalidPattern(format!("{p} is not a complete bipartite graph")))
        })
        .collect::<Result<Vec<_>>>()?;
    let table: Vec<ScanRow> = (0..=n / 2)
        .map(|x| ScanRow {
            x,
            value: parts
                .iter()
                .map(|&(a, b)| count_bipartite_closed_form(a, b, x, n - x))
                .sum(),
        })
        .collect();
    let best = table
        .iter()
        .fold(None::<&ScanRow>, |acc, row| match acc {
            Some(b) if b.value >= row.value => Some(b),
            _ => Some(row),
        })
        .expect("table has at least one row");
    Ok(BipartiteScan {
        n,
        patterns: patterns.to_vec(),
        best_x: best.x,
        value: best.value.clone(),
        table,
    })
}

mod big_vec {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(ToString::to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use PatternSpec::*;

    fn opts() -> SearchOptions {
        SearchOptions::default()
    }

    #[test]
    fn turan_edges() {
        let p = SearchProblem::monochrome(5, vec![Clique(2)], Clique(3)).unwrap();
        let r = ex_multi(&p, &opts()).unwrap();
        assert_eq!(r.value, BigUint::from(6u32));
        let w = SmallGraph::from_graph6(&r.witness_graph).unwrap();
        assert!(crate::canon::is_isomorphic(&w, &Kb(2, 3)));
    }

    #[allow(non_snake_case)]
    fn Kb(a: usize, b: usize) -> SmallGraph {
        CompleteBipartite(a, b).expand().unwrap()
    }

    #[test]
    fn paths_and_pentagons() {
        let p = SearchProblem::monochrome(5, vec![Path(5), Cycle(5)], Clique(3)).unwrap();
        assert_eq!(ex_multi(&p, &opts()).unwrap().value, BigUint::from(6u32));
        let p = SearchProblem::monochrome(4, vec![Clique(3)], Clique(4)).unwrap();
        assert_eq!(ex_multi(&p, &opts()).unwrap().value, BigUint::from(2u32));
    }

    #[test]
    fn single_color_matches_monochrome() {
        let mono = SearchProblem::monochrome(5, vec![Path(3)], Clique(3)).unwrap();
        let col = SearchProblem::colored(5, vec![Path(3)], Clique(3)).unwrap();
        assert_eq!(ex_multi(&mono, &opts()).unwrap().value, cex_multi(&col, &opts()).unwrap().value);
    }

    #[test]
    fn sandwich_examples() {
        let p = SearchProblem::colored(4, vec![Clique(2)], Clique(3)).unwrap();
        let r = sandwich_check(&p, &opts()).unwrap();
        let four = BigUint::from(4u32);
        assert_eq!((r.max_single(), r.cex.clone(), r.ex.clone(), r.sum_of_singles.clone()), (four.clone(), four.clone(), four.clone(), four));
        let p = SearchProblem::colored(5, vec![Clique(3), Clique(2)], Clique(4)).unwrap();
        assert!(sandwich_check(&p, &opts()).unwrap().holds());
    }

    #[test]
    fn scans() {
        let s = bipartite_scan(6, &[Path(3)]).unwrap();
        assert_eq!((s.best_x, s.value.clone()), (3, BigUint::from(18u32)));
        let s = bipartite_scan(4, &[Clique(2)]).unwrap();
        assert_eq!((s.best_x, s.value.clone()), (2, BigUint::from(4u32)));
        assert!(bipartite_scan(6, &[Clique(3)]).is_err());
    }

    #[test]
    fn problem_validation() {
        assert!(SearchProblem::monochrome(5, vec![], Clique(3)).is_err());
        assert!(SearchProblem::monochrome(5, vec![Clique(2)], Clique(1)).is_err());
        assert!(SearchProblem::monochrome(33, vec![Clique(2)], Clique(3)).is_err());
    }
}
