//! Best total k-coloring of a fixed host.
//!
//! Edges are colored in canonical edge order with colors tried in increasing
//! order, so the first optimal coloring reached is the lexicographically
//! smallest one. The bound gives every copy of pattern `i` a share of its
//! weight on each of its edges; an undecided edge is credited with the best
//! total share it could still collect in any single color.

use num_bigint::BigUint;

use crate::coloring::EdgeColoring;
use crate::counting::{binomial_u128, CompiledPattern};
use crate::error::{Error, Result};
use crate::graph::SmallGraph;
use crate::pattern::PatternSpec;

pub const DEFAULT_NODE_BUDGET: u64 = 1 << 24;

/// Exact search gives up above this many pattern copies in the host.
const MAX_COPIES: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringResult {
    pub coloring: EdgeColoring,
    pub value: u128,
    pub exact: bool,
    /// Branch-and-bound nodes plus heuristic evaluations.
    pub explored: u64,
}

impl ColoringResult {
    pub fn value_big(&self) -> BigUint {
        BigUint::from(self.value)
    }
}

pub fn best_coloring(g: &SmallGraph, patterns: &[PatternSpec]) -> Result<ColoringResult> {
    let compiled = patterns.iter().map(CompiledPattern::from_spec).collect::<Result<Vec<_>>>()?;
    let out = search(g, &compiled, patterns, None, DEFAULT_NODE_BUDGET)?;
    Ok(out.expect("without a floor the search always returns a coloring"))
}

/// Like [`best_coloring`] but the exact search only reports colorings worth
/// at least `floor`, and `Ok(None)` certifies that none exists. A heuristic
/// result (`exact == false`) is returned whatever its value. Pattern specs are used to detect
/// interchangeable colors.
pub fn search(
    g: &SmallGraph,
    patterns: &[CompiledPattern],
    specs: &[PatternSpec],
    floor: Option<u128>,
    budget: u64,
) -> Result<Option<ColoringResult>> {
    let k = patterns.len();
    if k == 0 {
        return Err(Error::InvalidColoring("at least one pattern is required".into()));
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let problem = Problem::new(g, &edges, patterns)?;
    let mono = (1..=k)
        .map(|c| {
            let colors = vec![c as u8; edges.len()];
            let v = evaluate(g, patterns, &colors)?;
            Ok((v, colors))
        })
        .collect::<Result<Vec<_>>>()?;
    let (mono_value, _) = mono.iter().max_by_key(|(v, _)| *v).cloned().expect("k >= 1");
    let floor_value = floor.unwrap_or(0).max(mono_value);

    if let Some(problem) = problem {
        let groups = color_groups(patterns, specs);
        let mut bb = BranchAndBound::new(&problem, groups, floor_value, budget);
        if bb.run() {
            let explored = bb.nodes;
            return match bb.best {
                Some((value, colors)) => Ok(Some(ColoringResult {
                    coloring: EdgeColoring::from_colors(*g, k, &colors)?,
                    value,
                    exact: true,
                    explored,
                })),
                None => Ok(None),
            }
            .and_then(|r| check_floor(r, floor));
        }
    }

    // Budget exhausted or instance too large for the exact search.
    let (start_value, start) = mono.into_iter().max_by_key(|(v, _)| *v).expect("k >= 1");
    let (value, colors, evals) = local_search(g, patterns, start, start_value)?;
    Ok(Some(ColoringResult {
        coloring: EdgeColoring::from_colors(*g, k, &colors)?,
        value,
        exact: false,
        explored: evals,
    }))
}

fn check_floor(r: Option<ColoringResult>, floor: Option<u128>) -> Result<Option<ColoringResult>> {
    Ok(r.filter(|r| floor.is_none_or(|f| r.value >= f)))
}

/// Objective of a color vector by full recount.
pub fn evaluate(g: &SmallGraph, patterns: &[CompiledPattern], colors: &[u8]) -> Result<u128> {
    let c = EdgeColoring::from_colors(*g, patterns.len(), colors)?;
    patterns
        .iter()
        .enumerate()
        .try_fold(0u128, |acc, (i, p)| acc.checked_add(p.count_u128(c.layer(i + 1))?))
        .ok_or_else(|| Error::Unsupported("copy count exceeds 128 bits".into()))
}

/// Greedy single-edge recoloring until no move improves the objective.
fn local_search(
    g: &SmallGraph,
    patterns: &[CompiledPattern],
    mut colors: Vec<u8>,
    mut value: u128,
) -> Result<(u128, Vec<u8>, u64)> {
    let k = patterns.len() as u8;
    let mut evals = 0;
    loop {
        let mut improved = false;
        for e in 0..colors.len() {
            let old = colors[e];
            for c in 1..=k {
                if c == old {
                    continue;
                }
                colors[e] = c;
                evals += 1;
                let v = evaluate(g, patterns, &colors)?;
                if v > value {
                    value = v;
                    improved = true;
                    break;
                }
                colors[e] = old;
            }
        }
        if !improved {
            return Ok((value, colors, evals));
        }
    }
}

/// Colors whose patterns are isomorphic may be permuted freely.
fn color_groups(patterns: &[CompiledPattern], specs: &[PatternSpec]) -> Vec<usize> {
    let mut group: Vec<usize> = (0..patterns.len()).collect();
    for i in 0..patterns.len() {
        for j in 0..i {
            let same = match (specs.get(i), specs.get(j)) {
                (Some(a), Some(b)) if a == b => true,
                _ => crate::canon::is_isomorphic(patterns[i].graph(), patterns[j].graph()),
            };
            if same {
                group[i] = group[j];
                break;
            }
        }
    }
    group
}

struct PatternCopy {
    pattern: usize,
    share: u128,
    edges: Vec<u16>,
}

struct Problem {
    m: usize,
    k: usize,
    /// Scale factor making every share an integer.
    scale: u128,
    /// Value of edgeless patterns, independent of the coloring.
    constant: u128,
    copies: Vec<PatternCopy>,
    copies_at: Vec<Vec<u32>>,
}

impl Problem {
    /// `None` when the instance is too large for the exact search.
    fn new(g: &SmallGraph, edges: &[(usize, usize)], patterns: &[CompiledPattern]) -> Result<Option<Self>> {
        let n = g.order();
        let m = edges.len();
        let mut index = vec![[u16::MAX; 32]; n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            index[u][v] = i as u16;
            index[v][u] = i as u16;
        }
        let overflow = || Error::Unsupported("copy weights exceed 128 bits".into());
        let mut scale: u128 = 1;
        for p in patterns {
            let e = p.graph().edge_count() as u128;
            if e > 0 {
                scale = lcm(scale, e).ok_or_else(overflow)?;
            }
        }
        let mut constant: u128 = 0;
        let mut copies = Vec::new();
        for (pi, p) in patterns.iter().enumerate() {
            let weight = if n < p.graph().order() { 0 } else { p.isolated_factor(n) };
            let e = p.graph().edge_count();
            if e == 0 {
                let c = binomial_u128(n, p.graph().order()).ok_or_else(overflow)?;
                constant = constant.checked_add(c).ok_or_else(overflow)?;
                continue;
            }
            if weight == 0 || e > m {
                continue;
            }
            let share = weight.checked_mul(scale / e as u128).ok_or_else(overflow)?;
            let core = p.plan().core_vertices().to_vec();
            let h = p.graph();
            let mut position = [0usize; 32];
            for (i, &v) in core.iter().enumerate() {
                position[v as usize] = i;
            }
            let pattern_edges: Vec<(usize, usize)> =
                h.edges().map(|(a, b)| (position[a], position[b])).collect();
            let mut found: Vec<Vec<u16>> = Vec::new();
            let mut too_many = false;
            let _ = p.plan().for_each(g, None, |images| {
                let mut es: Vec<u16> = pattern_edges
                    .iter()
                    .map(|&(a, b)| index[images[a] as usize][images[b] as usize])
                    .collect();
                es.sort_unstable();
                found.push(es);
                if found.len() > MAX_COPIES * 4 {
                    too_many = true;
                    return std::ops::ControlFlow::Break(());
                }
                std::ops::ControlFlow::Continue(())
            });
            if too_many {
                return Ok(None);
            }
            found.sort_unstable();
            found.dedup();
            copies.extend(found.into_iter().map(|edges| PatternCopy {
                pattern: pi,
                share,
                edges,
            }));
            if copies.len() > MAX_COPIES {
                return Ok(None);
            }
        }
        let mut copies_at = vec![Vec::new(); m];
        for (ci, c) in copies.iter().enumerate() {
            for &e in &c.edges {
                copies_at[e as usize].push(ci as u32);
            }
        }
        Ok(Some(Self {
            m,
            k: patterns.len(),
            scale,
            constant,
            copies,
            copies_at,
        }))
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u128, b: u128) -> Option<u128> {
    (a / gcd(a, b)).checked_mul(b)
}

struct BranchAndBound<'a> {
    p: &'a Problem,
    group: Vec<usize>,
    /// `potential[e * k + c]`: total share of live color-`c` copies through `e`.
    potential: Vec<u128>,
    alive: Vec<bool>,
    decided: Vec<u32>,
    /// Shares already collected on decided edges of live copies.
    collected: u128,
    colors: Vec<u8>,
    used: Vec<bool>,
    trail: Vec<u32>,
    /// Scaled value a coloring must reach to be reported.
    floor: u128,
    best: Option<(u128, Vec<u8>)>,
    nodes: u64,
    budget: u64,
}

impl<'a> BranchAndBound<'a> {
    fn new(p: &'a Problem, group: Vec<usize>, floor: u128, budget: u64) -> Self {
        let mut potential = vec![0u128; p.m * p.k];
        for c in &p.copies {
            for &e in &c.edges {
                potential[e as usize * p.k + c.pattern] += c.share;
            }
        }
        let floor_scaled = floor.saturating_sub(p.constant).saturating_mul(p.scale);
        Self {
            p,
            group,
            potential,
            alive: vec![true; p.copies.len()],
            decided: vec![0; p.copies.len()],
            collected: 0,
            colors: vec![0; p.m],
            used: vec![false; p.k],
            trail: Vec::new(),
            floor: floor_scaled,
            best: None,
            nodes: 0,
            budget,
        }
    }

    /// Returns false if the node budget ran out.
    fn run(&mut self) -> bool {
        self.dfs(0)
    }

    fn bound(&self, next: usize) -> u128 {
        let k = self.p.k;
        let rest: u128 = (next..self.p.m)
            .map(|e| self.potential[e * k..(e + 1) * k].iter().copied().max().unwrap_or(0))
            .sum();
        self.collected + rest
    }

    fn pruned(&self, bound: u128) -> bool {
        match &self.best {
            Some((v, _)) => bound <= (v - self.p.constant) * self.p.scale,
            None => bound < self.floor,
        }
    }

    fn dfs(&mut self, e: usize) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        if self.pruned(self.bound(e)) {
            return true;
        }
        if e == self.p.m {
            debug_assert_eq!(self.collected % self.p.scale, 0);
            let value = self.collected / self.p.scale + self.p.constant;
            self.best = Some((value, self.colors.clone()));
            return true;
        }
        for c in 0..self.p.k {
            if !self.used[c] && (0..c).any(|d| !self.used[d] && self.group[d] == self.group[c]) {
                continue;
            }
            let fresh = !self.used[c];
            self.used[c] = true;
            self.colors[e] = c as u8 + 1;
            let mark = self.trail.len();
            self.assign(e, c);
            let ok = self.dfs(e + 1);
            self.unassign(e, c, mark);
            if fresh {
                self.used[c] = false;
            }
            if !ok {
                return false;
            }
        }
        true
    }

    fn assign(&mut self, e: usize, c: usize) {
        let k = self.p.k;
        for &ci in &self.p.copies_at[e] {
            let ci = ci as usize;
            if !self.alive[ci] {
                continue;
            }
            let copy = &self.p.copies[ci];
            if copy.pattern == c {
                self.decided[ci] += 1;
                self.collected += copy.share;
            } else {
                self.alive[ci] = false;
                self.collected -= copy.share * self.decided[ci] as u128;
                for &f in copy.edges.iter().filter(|&&f| f as usize > e) {
                    self.potential[f as usize * k + copy.pattern] -= copy.share;
                }
                self.trail.push(ci as u32);
            }
        }
    }

    fn unassign(&mut self, e: usize, c: usize, mark: usize) {
        let k = self.p.k;
        while self.trail.len() > mark {
            let ci = self.trail.pop().expect("trail above mark") as usize;
            let copy = &self.p.copies[ci];
            self.alive[ci] = true;
            self.collected += copy.share * self.decided[ci] as u128;
            for &f in copy.edges.iter().filter(|&&f| f as usize > e) {
                self.potential[f as usize * k + copy.pattern] += copy.share;
            }
        }
        for &ci in &self.p.copies_at[e] {
            let ci = ci as usize;
            let copy = &self.p.copies[ci];
            if self.alive[ci] && copy.pattern == c {
                self.decided[ci] -= 1;
                self.collected -= copy.share;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::PatternSpec::*;

    fn g(p: PatternSpec) -> SmallGraph {
        p.expand().unwrap()
    }

    #[test]
    fn four_cycle_prefers_edges() {
        let r = best_coloring(&g(Cycle(4)), &[Cycle(4), Clique(2)]).unwrap();
        assert_eq!(r.value, 4);
        assert!(r.exact);
        assert_eq!(r.coloring.colors(), vec![2, 2, 2, 2]);
    }

    #[test]
    fn edgeless_host() {
        let r = best_coloring(&SmallGraph::empty(4).unwrap(), &[Clique(3), Clique(2)]).unwrap();
        assert_eq!(r.value, 0);
    }

    #[test]
    fn six_clique_plus_red_edge() {
        let host = g(Clique(6)).disjoint_union(&g(Clique(2))).unwrap();
        let r = best_coloring(&host, &[Clique(3), Clique(2)]).unwrap();
        assert_eq!(r.value, 21);
        let mut expected = vec![1u8; 15];
        expected.push(2);
        assert_eq!(r.coloring.colors(), expected);
    }

    #[test]
    fn isolated_vertex_patterns_use_spare_vertices() {
        // M in color 1 needs a fifth vertex; C5 in color 2.
        let host = g(Cycle(5));
        let r = best_coloring(&host, &[TwoMatchPlusIsolated, Cycle(5)]).unwrap();
        assert_eq!(r.value, 5);
    }

    #[test]
    fn identical_patterns_give_monochrome_optimum() {
        let host = g(Clique(5));
        let r = best_coloring(&host, &[Clique(3), Clique(3)]).unwrap();
        assert_eq!(r.value, 10);
        assert_eq!(r.coloring.colors(), vec![1; 10]);
    }

    #[test]
    fn floor_filters_results() {
        let compiled: Vec<_> = [Cycle(4), Clique(2)].iter().map(|p| CompiledPattern::from_spec(p).unwrap()).collect();
        let none = search(&g(Cycle(4)), &compiled, &[], Some(5), DEFAULT_NODE_BUDGET).unwrap();
        assert!(none.is_none());
        let some = search(&g(Cycle(4)), &compiled, &[], Some(4), DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(some.unwrap().value, 4);
    }

    #[test]
    fn tiny_budget_falls_back_to_local_search() {
        let compiled: Vec<_> = [Clique(3), Clique(2)].iter().map(|p| CompiledPattern::from_spec(p).unwrap()).collect();
        let host = g(Clique(6)).disjoint_union(&g(Clique(2))).unwrap();
        let r = search(&host, &compiled, &[], None, 3).unwrap().unwrap();
        assert!(!r.exact);
        assert!(r.value >= 20);
    }
}
