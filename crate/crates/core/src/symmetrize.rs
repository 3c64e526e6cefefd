//! Zykov symmetrization on edge-colored `K_m`-free graphs whose counted
//! patterns are all cliques.
//!
//! Vertex steps copy the colored neighborhood of one vertex onto a
//! non-neighbor. Phases turn the host into a complete multipartite graph
//! whose blocks between parts ("small packs") are monochromatic. Class steps
//! then recolor whole blocks so that the blue relation, and afterwards the
//! red relation, become equivalence relations on the packs. Every applied
//! step is checked by a full recount; class steps that would lower the
//! objective are rejected and recorded as such.

use serde::{Deserialize, Serialize};

use crate::coloring::EdgeColoring;
use crate::counting::CompiledPattern;
use crate::embed::ContainmentTester;
use crate::error::{Error, Result};
use crate::graph::{Bits, SmallGraph};
use crate::pattern::PatternSpec;

/// Upper bound on vertex steps in one run of phases.
const MAX_VERTEX_STEPS: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Vertex,
    Class,
    RecolorToBlue,
    RecolorPackToRed,
}

/// One engine step, as exported in the line-delimited trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: StepKind,
    /// Vertices whose edges were rewritten.
    pub targets: Vec<usize>,
    /// Vertices whose edges served as the template (empty for recolorings).
    pub sources: Vec<usize>,
    pub before: u64,
    pub after: u64,
    pub accepted: bool,
    /// Host after the step, as `<graph6>:<colors>`.
    pub host: String,
}

#[derive(Clone, Debug)]
pub struct SymmetrizationState {
    coloring: EdgeColoring,
    patterns: Vec<PatternSpec>,
    compiled: Vec<CompiledPattern>,
    clique_orders: Vec<usize>,
    m: usize,
    forbidden: ContainmentTester,
    objective: u64,
    trace: Vec<TraceStep>,
}

impl SymmetrizationState {
    pub fn new(coloring: EdgeColoring, patterns: Vec<PatternSpec>, m: usize) -> Result<Self> {
        if patterns.len() != coloring.k() {
            return Err(Error::InvalidColoring(format!(
                "{} patterns for a {}-coloring",
                patterns.len(),
                coloring.k()
            )));
        }
        let clique_orders = patterns
            .iter()
            .map(|p| {
                p.clique_order()
                    .ok_or_else(|| Error::Unsupported(format!("symmetrization needs clique patterns, got {p}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if m < 2 {
            return Err(Error::Precondition("forbidden clique order must be at least 2".into()));
        }
        let forbidden = ContainmentTester::new(&SmallGraph::complete(m)?);
        if forbidden.contains(coloring.base()) {
            return Err(Error::Precondition(format!("host contains K{m}")));
        }
        let compiled = patterns.iter().map(CompiledPattern::from_spec).collect::<Result<Vec<_>>>()?;
        let mut state = Self {
            coloring,
            patterns,
            compiled,
            clique_orders,
            m,
            forbidden,
            objective: 0,
            trace: Vec::new(),
        };
        state.objective = state.recount();
        Ok(state)
    }

    pub fn coloring(&self) -> &EdgeColoring {
        &self.coloring
    }

    pub fn patterns(&self) -> &[PatternSpec] {
        &self.patterns
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn objective(&self) -> u64 {
        self.objective
    }

    pub fn trace(&self) -> &[TraceStep] {
        &self.trace
    }

    /// The trace as JSON lines.
    pub fn trace_jsonl(&self) -> Result<String> {
        let mut out = String::new();
        for step in &self.trace {
            out.push_str(&serde_json::to_string(step)?);
            out.push('\n');
        }
        Ok(out)
    }

    fn count_of(&self, c: &EdgeColoring) -> u64 {
        self.compiled
            .iter()
            .enumerate()
            .map(|(i, p)| p.count_u128(c.layer(i + 1)).expect("clique counts on 32 vertices fit") as u64)
            .sum()
    }

    /// Objective recomputed from scratch.
    pub fn recount(&self) -> u64 {
        self.count_of(&self.coloring)
    }

    /// Total number of pattern copies through `v`, each pattern counted in its color.
    pub fn dstar(&self, v: usize) -> u64 {
        let without = self.count_of(&without_vertex(&self.coloring, v));
        self.recount() - without
    }

    fn record(&mut self, step: StepKind, targets: Vec<usize>, sources: Vec<usize>, before: u64, after: u64, accepted: bool) {
        self.trace.push(TraceStep {
            step,
            targets,
            sources,
            before,
            after,
            accepted,
            host: self.coloring.to_text(),
        });
    }

    /// Replaces the edges of `u` by a color-preserving copy of the edges of `v`.
    pub fn symmetrize_vertex(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.coloring.order();
        if u >= n || v >= n || u == v {
            return Err(Error::InvalidStep(format!("cannot symmetrize {u} to {v}")));
        }
        if self.coloring.base().has_edge(u, v) {
            return Err(Error::InvalidStep(format!("{u} and {v} are adjacent")));
        }
        let (du, dv) = (self.dstar(u), self.dstar(v));
        if du > dv {
            return Err(Error::Precondition(format!("d*({u}) = {du} exceeds d*({v}) = {dv}")));
        }
        let before = self.objective;
        let mut next = self.coloring.clone();
        next.isolate(u);
        for c in 1..=next.k() {
            for w in Bits(self.coloring.layer(c).neighbors(v)) {
                next.set_edge(u, w, c)?;
            }
        }
        if self.forbidden.contains_through(next.base(), u) {
            return Err(Error::InvariantViolation(format!(
                "symmetrizing {u} to {v} created K{}",
                self.m
            )));
        }
        let after = self.count_of(&next);
        if after < before {
            return Err(Error::InvariantViolation(format!(
                "symmetrizing {u} to {v} lowered the objective from {before} to {after}"
            )));
        }
        self.coloring = next;
        self.objective = after;
        self.record(StepKind::Vertex, vec![u], vec![v], before, after, true);
        Ok(())
    }

    /// Repeatedly picks a vertex of largest `d*` and symmetrizes all its
    /// non-neighbors to it, removing the resulting independent set from
    /// consideration. Returns the parts (small packs).
    pub fn run_phases(&mut self) -> Result<PackStructure> {
        let n = self.coloring.order();
        let mut remaining: Vec<usize> = (0..n).collect();
        let mut packs = Vec::new();
        let mut steps = 0;
        while !remaining.is_empty() {
            let mut v = self.argmax_dstar(&remaining);
            'phase: loop {
                let others: Vec<usize> = remaining
                    .iter()
                    .copied()
                    .filter(|&u| u != v && !self.coloring.base().has_edge(u, v))
                    .collect();
                for u in others {
                    if self.coloring.base().has_edge(u, v) {
                        continue;
                    }
                    if self.dstar(u) > self.dstar(v) {
                        v = u;
                        continue 'phase;
                    }
                    steps += 1;
                    if steps > MAX_VERTEX_STEPS {
                        return Err(Error::InvariantViolation("symmetrization phases did not terminate".into()));
                    }
                    if !self.is_twin(u, v) {
                        self.symmetrize_vertex(u, v)?;
                    }
                }
                break;
            }
            let pack: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&u| u == v || !self.coloring.base().has_edge(u, v))
                .collect();
            remaining.retain(|u| !pack.contains(u));
            packs.push(pack);
        }
        let structure = PackStructure::from_small_packs(&self.coloring, packs)?;
        if structure.small.len() >= self.m {
            return Err(Error::InvariantViolation(format!(
                "{} parts in a K{}-free complete multipartite host",
                structure.small.len(),
                self.m
            )));
        }
        Ok(structure)
    }

    fn argmax_dstar(&self, among: &[usize]) -> usize {
        let mut best = among[0];
        let mut best_d = self.dstar(best);
        for &u in &among[1..] {
            let d = self.dstar(u);
            if d > best_d {
                best = u;
                best_d = d;
            }
        }
        best
    }

    fn is_twin(&self, u: usize, v: usize) -> bool {
        (1..=self.coloring.k()).all(|c| {
            let l = self.coloring.layer(c);
            l.neighbors(u) == l.neighbors(v)
        })
    }

    /// Colors ordered by the order of their clique, smallest first, ties by
    /// color index.
    pub fn default_color_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (1..=self.coloring.k()).collect();
        order.sort_by_key(|&c| (self.clique_orders[c - 1], c));
        order
    }

    /// Class-level symmetrization for blue and then red, followed by the
    /// pack recoloring steps.
    pub fn symmetrize_classes(&mut self, packs: &PackStructure, color_order: &[usize]) -> Result<ClassOutcome> {
        packs.validate(&self.coloring)?;
        let mut sorted = color_order.to_vec();
        sorted.sort_unstable();
        if sorted != (1..=self.coloring.k()).collect::<Vec<_>>() {
            return Err(Error::InvalidStep("color order must list every color once".into()));
        }
        let small = packs.small.clone();
        let mut outcome = ClassOutcome {
            packs: packs.clone(),
            blue: None,
            red: None,
            blue_equivalence: true,
            red_equivalence: true,
            applied: 0,
            rejected: 0,
        };
        let present = |c: &EdgeColoring, color: usize| c.layer(color).edge_count() > 0;
        let Some(blue) = color_order.iter().copied().find(|&c| present(&self.coloring, c)) else {
            return Ok(outcome);
        };
        outcome.blue = Some(blue);
        let singletons: Vec<Vec<usize>> = (0..small.len()).map(|i| vec![i]).collect();
        let medium = self.class_level(&small, &singletons, blue, &mut outcome)?;
        outcome.blue_equivalence = is_equivalence(&self.coloring, &small, &medium, &[blue]);
        outcome.packs.medium = medium.clone();
        outcome.packs.large = medium.clone();

        let red = color_order
            .iter()
            .copied()
            .skip_while(|&c| c != blue)
            .skip(1)
            .find(|&c| present(&self.coloring, c));
        let Some(red) = red else {
            return Ok(outcome);
        };
        outcome.red = Some(red);
        let large = self.class_level(&small, &medium, red, &mut outcome)?;
        outcome.red_equivalence = is_equivalence(&self.coloring, &small, &large, &[blue, red]);
        outcome.packs.large = large;

        self.final_recolorings(&small, &medium, blue, red, &mut outcome)?;
        Ok(outcome)
    }

    /// One level of class symmetrization: groups joined by `color` are
    /// merged around a group of largest `d*`.
    fn class_level(
        &mut self,
        small: &[Vec<usize>],
        groups: &[Vec<usize>],
        color: usize,
        outcome: &mut ClassOutcome,
    ) -> Result<Vec<Vec<usize>>> {
        let mut remaining: Vec<usize> = (0..groups.len()).collect();
        let mut merged = Vec::new();
        while !remaining.is_empty() {
            let b = *remaining
                .iter()
                .max_by_key(|&&g| (self.group_dstar(small, &groups[g]), std::cmp::Reverse(g)))
                .expect("remaining is nonempty");
            let mut members = vec![b];
            for &a in remaining.iter().filter(|&&a| a != b) {
                if self.block_color(small, &groups[a], &groups[b]) != Some(color) {
                    continue;
                }
                if self.class_step(small, groups, &remaining, a, b)? {
                    outcome.applied += 1;
                    members.push(a);
                } else {
                    outcome.rejected += 1;
                }
            }
            remaining.retain(|g| !members.contains(g));
            members.sort_unstable();
            merged.push(members.iter().flat_map(|&g| groups[g].iter().copied()).collect());
        }
        Ok(merged)
    }

    fn group_dstar(&self, small: &[Vec<usize>], group: &[usize]) -> u64 {
        group.iter().flat_map(|&p| small[p].iter()).map(|&v| self.dstar(v)).sum()
    }

    /// The common color of all edges between two groups of packs.
    fn block_color(&self, small: &[Vec<usize>], a: &[usize], b: &[usize]) -> Option<usize> {
        let mut color = None;
        for &x in a.iter().flat_map(|&p| small[p].iter()) {
            for &y in b.iter().flat_map(|&p| small[p].iter()) {
                let c = self.coloring.color(x, y);
                match (color, c) {
                    (_, None) => return None,
                    (None, c) => color = c,
                    (Some(old), Some(c)) if old != c => return None,
                    _ => {}
                }
            }
        }
        color
    }

    /// Recolors the blocks between group `a` and every third group like the
    /// blocks of group `b`; kept only if the objective does not drop.
    fn class_step(&mut self, small: &[Vec<usize>], groups: &[Vec<usize>], among: &[usize], a: usize, b: usize) -> Result<bool> {
        let before = self.objective;
        let mut next = self.coloring.clone();
        for &c in among.iter().filter(|&&c| c != a && c != b) {
            let Some(color) = self.block_color(small, &groups[b], &groups[c]) else {
                return Err(Error::InvalidStep("block between classes is not monochromatic".into()));
            };
            for &x in groups[a].iter().flat_map(|&p| small[p].iter()) {
                for &z in groups[c].iter().flat_map(|&p| small[p].iter()) {
                    next.set_edge(x, z, color)?;
                }
            }
        }
        let after = self.count_of(&next);
        let accepted = after >= before;
        let targets = vertices_of(small, &groups[a]);
        let sources = vertices_of(small, &groups[b]);
        if accepted {
            self.coloring = next;
            self.objective = after;
        }
        self.record(StepKind::Class, targets, sources, before, after, accepted);
        Ok(accepted)
    }

    fn final_recolorings(
        &mut self,
        small: &[Vec<usize>],
        medium: &[Vec<usize>],
        blue: usize,
        red: usize,
        outcome: &mut ClassOutcome,
    ) -> Result<()> {
        let q = self.clique_orders[red - 1];
        let red_neighbors = |s: &Self, pack: &[usize]| -> Vec<usize> {
            (0..small.len())
                .filter(|p| !pack.contains(p))
                .filter(|&p| s.block_color(small, pack, &[p]) == Some(red))
                .collect()
        };
        for pack in medium {
            let adjacent = red_neighbors(self, pack);
            if adjacent.is_empty() || adjacent.len() >= q - 1 {
                continue;
            }
            let mut next = self.coloring.clone();
            for &x in pack.iter().flat_map(|&p| small[p].iter()) {
                for &z in adjacent.iter().flat_map(|&p| small[p].iter()) {
                    next.set_edge(x, z, blue)?;
                }
            }
            self.apply_recoloring(next, StepKind::RecolorToBlue, vertices_of(small, pack), outcome);
        }
        if let Some(pack) = medium.iter().find(|pack| red_neighbors(self, pack).len() >= q - 1) {
            let mut next = self.coloring.clone();
            let vs = vertices_of(small, pack);
            for (i, &x) in vs.iter().enumerate() {
                for &y in &vs[i + 1..] {
                    if next.base().has_edge(x, y) {
                        next.set_edge(x, y, red)?;
                    }
                }
            }
            self.apply_recoloring(next, StepKind::RecolorPackToRed, vs, outcome);
        }
        Ok(())
    }

    fn apply_recoloring(&mut self, next: EdgeColoring, kind: StepKind, targets: Vec<usize>, outcome: &mut ClassOutcome) {
        let before = self.objective;
        let after = self.count_of(&next);
        let accepted = after >= before && next != self.coloring;
        if accepted {
            self.coloring = next;
            self.objective = after;
            outcome.applied += 1;
        } else {
            outcome.rejected += 1;
        }
        self.record(kind, targets, vec![], before, after, accepted);
    }

    /// Phases followed by class symmetrization with the default color order.
    pub fn run_pipeline(&mut self) -> Result<ClassOutcome> {
        let packs = self.run_phases()?;
        let order = self.default_color_order();
        self.symmetrize_classes(&packs, &order)
    }
}

fn vertices_of(small: &[Vec<usize>], group: &[usize]) -> Vec<usize> {
    let mut vs: Vec<usize> = group.iter().flat_map(|&p| small[p].iter().copied()).collect();
    vs.sort_unstable();
    vs
}

fn without_vertex(c: &EdgeColoring, v: usize) -> EdgeColoring {
    let layers = c.layers().iter().map(|l| l.without_vertex(v)).collect();
    EdgeColoring::from_layers(layers).expect("layers stay disjoint")
}

/// Whether "same group, or joined by one of `colors` inside a group" is the
/// partition `groups`: blocks inside a group use `colors`, blocks between
/// groups are monochromatic in some other color.
fn is_equivalence(c: &EdgeColoring, small: &[Vec<usize>], groups: &[Vec<usize>], colors: &[usize]) -> bool {
    let group_of = |p: usize| groups.iter().position(|g| g.contains(&p));
    for a in 0..small.len() {
        for b in a + 1..small.len() {
            let color = block(c, &small[a], &small[b]);
            let inside = group_of(a) == group_of(b);
            match color {
                Some(col) if inside != colors.contains(&col) => return false,
                None => return false,
                _ => {}
            }
        }
    }
    true
}

fn block(c: &EdgeColoring, a: &[usize], b: &[usize]) -> Option<usize> {
    let first = c.color(*a.first()?, *b.first()?)?;
    a.iter()
        .all(|&x| b.iter().all(|&y| c.color(x, y) == Some(first)))
        .then_some(first)
}

/// Small packs (parts of the complete multipartite host) grouped into medium
/// and large packs; groups list small-pack indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackStructure {
    pub small: Vec<Vec<usize>>,
    pub medium: Vec<Vec<usize>>,
    pub large: Vec<Vec<usize>>,
    /// `colors[a][b]`: color of the block between small packs `a` and `b`
    /// (0 on the diagonal).
    pub colors: Vec<Vec<usize>>,
}

impl PackStructure {
    pub fn from_small_packs(c: &EdgeColoring, mut small: Vec<Vec<usize>>) -> Result<Self> {
        for p in &mut small {
            p.sort_unstable();
        }
        let singletons: Vec<Vec<usize>> = (0..small.len()).map(|i| vec![i]).collect();
        let mut s = Self {
            colors: vec![vec![0; small.len()]; small.len()],
            medium: singletons.clone(),
            large: singletons,
            small,
        };
        s.validate(c)?;
        for a in 0..s.small.len() {
            for b in 0..s.small.len() {
                if a != b {
                    s.colors[a][b] = block(c, &s.small[a], &s.small[b]).expect("validated");
                }
            }
        }
        Ok(s)
    }

    /// Checks that the small packs partition the vertices into independent
    /// sets joined completely by monochromatic blocks.
    pub fn validate(&self, c: &EdgeColoring) -> Result<()> {
        let n = c.order();
        let mut seen = vec![false; n];
        for p in &self.small {
            if p.is_empty() {
                return Err(Error::InvalidStep("empty pack".into()));
            }
            for &v in p {
                if v >= n || seen[v] {
                    return Err(Error::InvalidStep("packs do not partition the vertices".into()));
                }
                seen[v] = true;
            }
        }
        if seen.contains(&false) {
            return Err(Error::InvalidStep("packs do not cover every vertex".into()));
        }
        if !is_complete_multipartite(c, &self.small) {
            return Err(Error::InvalidStep(
                "host is not complete multipartite with monochromatic blocks over these packs".into(),
            ));
        }
        Ok(())
    }
}

/// Each part independent, parts pairwise completely joined, each block
/// monochromatic.
pub fn is_complete_multipartite(c: &EdgeColoring, parts: &[Vec<usize>]) -> bool {
    for (i, a) in parts.iter().enumerate() {
        for (j, &x) in a.iter().enumerate() {
            if a[j + 1..].iter().any(|&y| c.base().has_edge(x, y)) {
                return false;
            }
        }
        if parts[i + 1..].iter().any(|b| block(c, a, b).is_none()) {
            return false;
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassOutcome {
    pub packs: PackStructure,
    pub blue: Option<usize>,
    pub red: Option<usize>,
    pub blue_equivalence: bool,
    pub red_equivalence: bool,
    pub applied: usize,
    pub rejected: usize,
}
