//! The verification suite: eleven checks with fixed instances, tolerances
//! and runtime limits, shared by the CLI and the acceptance tests.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::berge::{berge_sandwich_check, ex_berge, BergeSandwichReport};
use crate::coloring::EdgeColoring;
use crate::constructions::ConstructionSpec;
use crate::counting::{count_all, count_cliques_multipartite, count_copies, reduced_zagreb, CompiledPattern, MultipartiteShape};
use crate::embed::ContainmentTester;
use crate::error::{Error, Result};
use crate::graph::SmallGraph;
use crate::oracle;
use crate::pattern::PatternSpec::{self, *};
use crate::search::{bipartite_scan, ex_multi, sandwich_check, SandwichReport, SearchOptions, SearchProblem};
use crate::symmetrize::SymmetrizationState;

/// Seed for the randomized checks, so the suite is deterministic.
pub const SEED: u64 = 0x5eed_2024;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed: f64,
    /// Runtime limit in seconds, if the criterion has one.
    pub limit: Option<f64>,
}

impl CriterionReport {
    /// `PASS [3] title (1.23s): detail`
    pub fn line(&self) -> String {
        format!(
            "{} [{:>2}] {} ({:.2}s{}): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed,
            self.limit.map(|l| format!(" of {l:.0}s")).unwrap_or_default(),
            self.detail
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub extended: bool,
    pub criteria: Vec<CriterionReport>,
    /// Additional checks run only with `extended`.
    pub extras: Vec<CriterionReport>,
    pub sandwiches: Vec<SandwichReport>,
    pub berge: Vec<BergeSandwichReport>,
    pub passed: bool,
}

/// Shared state across criteria: every sandwich chain computed along the way.
#[derive(Debug, Default)]
pub struct Context {
    pub opts: SearchOptions,
    pub sandwiches: Vec<SandwichReport>,
    pub berge: Vec<BergeSandwichReport>,
    /// Chains that could not be computed or failed, with the reason.
    pub violations: Vec<String>,
}

impl Context {
    pub fn new(opts: SearchOptions) -> Self {
        Self {
            opts,
            ..Self::default()
        }
    }

    fn sandwich(&mut self, p: &SearchProblem) -> Result<SandwichReport> {
        match sandwich_check(p, &self.opts) {
            Ok(r) => {
                if !r.exact {
                    self.violations.push(format!("{} not computed exactly", describe(p)));
                }
                self.sandwiches.push(r.clone());
                Ok(r)
            }
            Err(e) => {
                self.violations.push(format!("{}: {e}", describe(p)));
                Err(e)
            }
        }
    }
}

fn describe(p: &SearchProblem) -> String {
    format!("n={} ({}) forbid {}", p.n, PatternSpec::list_to_string(&p.patterns), p.forbidden)
}

fn big(v: u128) -> BigUint {
    BigUint::from(v)
}

/// Runs `body`, turning errors into a failed report and enforcing `limit`.
fn timed(id: u8, title: &str, limit: Option<f64>, body: impl FnOnce() -> Result<(bool, String)>) -> CriterionReport {
    let start = Instant::now();
    let (mut passed, mut detail) = match body() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let elapsed = start.elapsed().as_secs_f64();
    if let Some(l) = limit {
        if elapsed > l {
            passed = false;
            detail = format!("{detail}; exceeded the {l:.0}s limit");
        }
    }
    CriterionReport {
        id,
        title: title.into(),
        passed,
        detail,
        elapsed,
        limit,
    }
}

pub fn criterion_1(ctx: &mut Context) -> CriterionReport {
    timed(1, "Turan/Zykov clique goldens", Some(120.0), || {
        let mut checked = 0;
        let mut failures = Vec::new();
        for n in 1..=8 {
            for l in [3, 4] {
                for r in 1..l {
                    let p = SearchProblem::monochrome(n, vec![Clique(r)], Clique(l))?;
                    let got = ex_multi(&p, &ctx.opts)?.value;
                    let want = count_cliques_multipartite(r, &MultipartiteShape::turan(l - 1, n));
                    checked += 1;
                    if got != want {
                        failures.push(format!("ex({n},K{r},K{l}) = {got}, Turan gives {want}"));
                    }
                }
            }
        }
        Ok(summary(checked, failures))
    })
}

fn summary(checked: usize, failures: Vec<String>) -> (bool, String) {
    if failures.is_empty() {
        (true, format!("{checked} instances exact"))
    } else {
        (false, format!("{} of {checked} failed: {}", failures.len(), failures.join("; ")))
    }
}

pub fn criterion_2(ctx: &mut Context) -> CriterionReport {
    timed(2, "clique tuples are color-resistant", Some(600.0), || {
        let mut checked = 0;
        let mut failures = Vec::new();
        for tuple in [vec![Clique(3), Clique(2)], vec![Clique(3), Clique(2), Clique(2)]] {
            for n in 1..=6 {
                let r = ctx.sandwich(&SearchProblem::colored(n, tuple.clone(), Clique(4))?)?;
                checked += 1;
                if !r.exact || r.cex != r.max_single() {
                    failures.push(format!(
                        "n={n} ({}): cex {} vs max single {} (exact {})",
                        PatternSpec::list_to_string(&tuple),
                        r.cex,
                        r.max_single(),
                        r.exact
                    ));
                }
            }
        }
        Ok(summary(checked, failures))
    })
}

/// The resistance tuples `(H, C5)`. Their optimum is the count of `H` in
/// `T_2(n)`, where the five-cycle contributes nothing.
pub fn resistance_tuples() -> Vec<Vec<PatternSpec>> {
    [Path(5), CycleWithTail, TwoMatchPlusIsolated, PathPlusEdge, CompleteBipartite(2, 3)]
        .into_iter()
        .map(|h| vec![h, Cycle(5)])
        .collect()
}

pub fn criterion_3(ctx: &mut Context) -> CriterionReport {
    timed(3, "resistance suite forbidding K3", Some(1800.0), || {
        let mut checked = 0;
        let mut failures = Vec::new();
        for tuple in resistance_tuples() {
            let compiled = tuple.iter().map(CompiledPattern::from_spec).collect::<Result<Vec<_>>>()?;
            for n in 1..=8 {
                let p = SearchProblem::monochrome(n, tuple.clone(), Clique(3))?;
                let got = ex_multi(&p, &ctx.opts)?.value;
                let want = count_all(&compiled, &MultipartiteShape::turan(2, n).graph()?).sum;
                checked += 1;
                if got != want {
                    failures.push(format!("{}: ex {got}, T2 gives {want}", describe(&p)));
                }
                ctx.sandwich(&SearchProblem::colored(n, tuple.clone(), Clique(3))?)?;
            }
        }
        Ok(summary(checked, failures))
    })
}

pub fn criterion_4(ctx: &mut Context) -> CriterionReport {
    timed(4, "S7 example: red edge beats monochrome", None, || {
        let spec = ConstructionSpec::BlueK6PacksRedEdge(1);
        if !spec.is_free(&Star(7))? {
            return Ok((false, format!("{spec} contains S7")));
        }
        let colored = spec.evaluate(&[Clique(3), Clique(2)])?.sum;
        let mut singles = Vec::new();
        for h in [Clique(3), Clique(2)] {
            singles.push(ex_multi(&SearchProblem::monochrome(8, vec![h], Star(7))?, &ctx.opts)?.value);
        }
        let best_single = singles.iter().max().cloned().unwrap_or_default();
        let passed = colored == big(21) && best_single == big(20);
        Ok((
            passed,
            format!(
                "construction {colored} vs monochrome max {best_single} (K3: {}, K2: {})",
                singles[0], singles[1]
            ),
        ))
    })
}

/// Full colored exhaustion for the S7 example.
pub fn criterion_4_extended(ctx: &mut Context) -> CriterionReport {
    timed(4, "S7 example: cex(8,(K3,K2),S7) = 21", None, || {
        let p = SearchProblem::colored(8, vec![Clique(3), Clique(2)], Star(7))?;
        let r = ctx.sandwich(&p)?;
        Ok((r.exact && r.cex == big(21), format!("cex {} (exact {})", r.cex, r.exact)))
    })
}

/// `⌊n/2⌋⌈n/2⌉(⌊n/2⌋−1)(⌈n/2⌉−1)`: labeled 4-cycles of `T_2(n)`, four per copy.
pub fn labeled_c4_in_turan(n: usize) -> u128 {
    let (a, b) = ((n / 2) as u128, n.div_ceil(2) as u128);
    a * b * a.saturating_sub(1) * b.saturating_sub(1)
}

pub fn criterion_5(ctx: &mut Context) -> CriterionReport {
    timed(5, "2-fan colored optimum at n=6", Some(600.0), || {
        let n = 6;
        let patterns = vec![Cycle(4), Clique(2)];
        let construction = ConstructionSpec::BlueTuranRedEdge(n).evaluate(&patterns)?;
        let r = ctx.sandwich(&SearchProblem::colored(n, patterns, Fan2)?)?;
        let closed = labeled_c4_in_turan(n) + 1;
        let c4 = construction.entries[0].clone();
        let normalized = big(labeled_c4_in_turan(n)) == &c4 * 4u32;
        let passed = r.exact && r.cex == construction.sum && normalized;
        Ok((
            passed,
            format!(
                "cex {} = construction {} ({c4} C4 + {} edge); closed form {closed} counts each C4 four times",
                r.cex, construction.sum, construction.entries[1]
            ),
        ))
    })
}

/// Checks every chain gathered so far. Computes the chains of the other
/// criteria first if none were run.
pub fn criterion_6(ctx: &mut Context) -> CriterionReport {
    timed(6, "sandwich chain on every instance", None, || {
        if ctx.sandwiches.is_empty() {
            for tuple in resistance_tuples() {
                for n in 1..=8 {
                    let _ = ctx.sandwich(&SearchProblem::colored(n, tuple.clone(), Clique(3))?);
                }
            }
        }
        let broken: Vec<String> = ctx
            .sandwiches
            .iter()
            .filter(|r| !r.holds())
            .map(|r| describe(&r.problem))
            .chain(ctx.violations.iter().cloned())
            .chain(
                ctx.berge
                    .iter()
                    .filter(|r| !r.holds())
                    .map(|r| format!("Berge n={} r={} F={}", r.n, r.r, r.forbidden)),
            )
            .collect();
        let total = ctx.sandwiches.len() + ctx.berge.len();
        if broken.is_empty() {
            Ok((true, format!("{total} chains, 0 violations")))
        } else {
            Ok((false, format!("{} violations of {total}: {}", broken.len(), broken.join("; "))))
        }
    })
}

pub fn criterion_7(ctx: &mut Context) -> CriterionReport {
    timed(7, "Berge sandwich", Some(600.0), || {
        let golden = ex_berge(4, 3, &Clique(3))?.value;
        let mut lines = vec![format!("ex_3(4,Berge-K3) = {golden}")];
        let mut passed = golden == 2;
        for n in [4, 5] {
            for f in [Clique(3), Clique(4), Cycle(4)] {
                let r = match berge_sandwich_check(n, 3, &f, &ctx.opts) {
                    Ok(r) => r,
                    Err(e) => {
                        ctx.violations.push(format!("Berge n={n} F={f}: {e}"));
                        passed = false;
                        continue;
                    }
                };
                passed &= r.exact && r.holds();
                lines.push(format!("n={n} F={f}: {} <= {} <= {}", r.clique_ex, r.berge_ex, r.colored_ex));
                ctx.berge.push(r);
            }
        }
        Ok((passed, lines.join(", ")))
    })
}

fn random_graph(rng: &mut StdRng, n: usize) -> SmallGraph {
    let p: f64 = rng.random_range(0.1..0.9);
    let mut g = SmallGraph::empty(n).expect("order at most 32");
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

pub fn criterion_8(_ctx: &mut Context) -> CriterionReport {
    timed(8, "reduced Zagreb identity", None, || {
        let mut rng = StdRng::seed_from_u64(SEED);
        let (p4, k3) = (Path(4).expand()?, Clique(3).expand()?);
        let mut failures = Vec::new();
        for _ in 0..1000 {
            let n = rng.random_range(1..=9);
            let g = random_graph(&mut rng, n);
            let lhs = BigUint::from(reduced_zagreb(&g));
            let rhs = count_copies(&p4, &g) + count_copies(&k3, &g) * 3u32;
            if lhs != rhs {
                failures.push(format!("{}: {lhs} vs {rhs}", g.to_graph6()));
            }
        }
        Ok(summary(1000, failures))
    })
}

/// A random `K_m`-free graph: random edges in random order, skipping any
/// edge that would close a `K_m`.
pub fn random_clique_free(rng: &mut StdRng, n: usize, m: usize) -> Result<SmallGraph> {
    let tester = ContainmentTester::new(&SmallGraph::complete(m)?);
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(rng);
    let keep = rng.random_range(0..=pairs.len());
    let mut g = SmallGraph::empty(n)?;
    for &(u, v) in &pairs[..keep] {
        g.add_edge(u, v);
        if tester.contains_through(&g, u) {
            g.remove_edge(u, v);
        }
    }
    Ok(g)
}

pub fn criterion_9(_ctx: &mut Context) -> CriterionReport {
    timed(9, "symmetrization engine", None, || {
        let mut rng = StdRng::seed_from_u64(SEED ^ 9);
        let patterns = vec![Clique(3), Clique(2)];
        let compiled = patterns.iter().map(CompiledPattern::from_spec).collect::<Result<Vec<_>>>()?;
        let k4 = ContainmentTester::new(&SmallGraph::complete(4)?);
        let mut failures = Vec::new();
        let (mut steps, mut rejected) = (0, 0);
        for run in 0..200 {
            let n = rng.random_range(1..=8);
            let g = random_clique_free(&mut rng, n, 4)?;
            let colors: Vec<u8> = (0..g.edge_count()).map(|_| rng.random_range(1..=2)).collect();
            let host = EdgeColoring::from_colors(g, 2, &colors)?;
            let text = host.to_text();
            let mut state = SymmetrizationState::new(host, patterns.clone(), 4)?;
            let packs = state.run_phases()?;
            if let Err(e) = packs.validate(state.coloring()) {
                failures.push(format!("run {run} ({text}): phases output {e}"));
            }
            let outcome = state.symmetrize_classes(&packs, &state.default_color_order())?;
            if let Err(e) = outcome.packs.validate(state.coloring()) {
                failures.push(format!("run {run} ({text}): class output {e}"));
            }
            let mut last = None;
            for step in state.trace() {
                steps += 1;
                if !step.accepted {
                    rejected += 1;
                    continue;
                }
                let after = EdgeColoring::parse(&step.host, 2)?;
                let recount: u128 = compiled
                    .iter()
                    .enumerate()
                    .map(|(i, p)| p.count_u128(after.layer(i + 1)).unwrap_or(u128::MAX))
                    .sum();
                if recount != step.after as u128 || step.after < step.before {
                    failures.push(format!(
                        "run {run} ({text}): step {:?} {} -> {} (recount {recount})",
                        step.step, step.before, step.after
                    ));
                }
                if last.is_some_and(|l| step.before != l) {
                    failures.push(format!("run {run} ({text}): trace objective jumps"));
                }
                last = Some(step.after);
                if k4.contains(after.base()) {
                    failures.push(format!("run {run} ({text}): step introduced K4"));
                }
            }
        }
        let (passed, detail) = summary(200, failures);
        Ok((passed, format!("{detail}; {steps} steps, {rejected} class steps rejected")))
    })
}

pub fn criterion_10(_ctx: &mut Context) -> CriterionReport {
    timed(10, "counting matches subset oracle", None, || {
        let mut patterns = Vec::new();
        for k in 1..=5 {
            patterns.extend(oracle::free_graph_classes(k, &SmallGraph::complete(6)?)?);
        }
        if patterns.len() != 52 {
            return Ok((false, format!("{} patterns on at most 5 vertices, expected 52", patterns.len())));
        }
        let mut rng = StdRng::seed_from_u64(SEED ^ 10);
        let mut failures = Vec::new();
        for _ in 0..500 {
            let n = rng.random_range(1..=8);
            let g = random_graph(&mut rng, n);
            for h in &patterns {
                let fast = count_copies(h, &g);
                let slow = big(oracle::subgraph_count(h, &g));
                if fast != slow {
                    failures.push(format!("N({}, {}) = {fast}, oracle {slow}", h.to_graph6(), g.to_graph6()));
                }
            }
        }
        Ok(summary(500 * patterns.len(), failures))
    })
}

pub fn criterion_11(ctx: &mut Context) -> CriterionReport {
    timed(11, "bipartite scan", Some(300.0), || {
        let both = [CompleteBipartite(3, 3), Star(6)];
        let scan = bipartite_scan(12, &both)?;
        let compiled = both.iter().map(CompiledPattern::from_spec).collect::<Result<Vec<_>>>()?;
        for row in &scan.table {
            let parts = [row.x, 12 - row.x].into_iter().filter(|&p| p > 0).collect();
            let g = MultipartiteShape::new(parts)?.graph()?;
            let counted = count_all(&compiled, &g).sum;
            if counted != row.value {
                return Ok((false, format!("scan row x={} gives {}, counting gives {counted}", row.x, row.value)));
            }
        }
        let joint = scan.best_x;
        let table: Vec<String> = scan.table.iter().map(|r| format!("{}:{}", r.x, r.value)).collect();
        let a = bipartite_scan(12, &both[..1])?.best_x;
        let b = bipartite_scan(12, &both[1..])?.best_x;
        let between = a.min(b) < joint && joint < a.max(b);
        let scan7 = bipartite_scan(7, &both)?.value;
        let p = SearchProblem::monochrome(7, both.to_vec(), Clique(3))?;
        let ex7 = ex_multi(&p, &ctx.opts)?.value;
        ctx.sandwich(&SearchProblem::colored(7, both.to_vec(), Clique(3))?)?;
        Ok((
            between && scan7 == ex7,
            format!(
                "n=12 argmax x: joint {joint}, K33 {a}, K15 {b} (table {}); n=7 scan {scan7} vs exhaustive {ex7}",
                table.join(" ")
            ),
        ))
    })
}

type Criterion = fn(&mut Context) -> CriterionReport;

/// Every criterion except the sandwich audit, which runs last.
const COMPUTING: [Criterion; 10] = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
    criterion_11,
];

/// Runs every criterion, calling `on_report` as each finishes, and returns
/// the reports ordered by id.
pub fn run_suite(extended: bool, opts: SearchOptions, mut on_report: impl FnMut(&CriterionReport)) -> SuiteReport {
    let mut ctx = Context::new(opts);
    let mut criteria = BTreeMap::new();
    let mut extras = Vec::new();
    for c in COMPUTING {
        let r = c(&mut ctx);
        on_report(&r);
        criteria.insert(r.id, r);
    }
    if extended {
        let r = criterion_4_extended(&mut ctx);
        on_report(&r);
        extras.push(r);
    }
    let r = criterion_6(&mut ctx);
    on_report(&r);
    criteria.insert(r.id, r);
    let criteria: Vec<CriterionReport> = criteria.into_values().collect();
    let passed = criteria.iter().chain(&extras).all(|r| r.passed);
    SuiteReport {
        extended,
        criteria,
        extras,
        sandwiches: ctx.sandwiches,
        berge: ctx.berge,
        passed,
    }
}

impl SuiteReport {
    pub fn table(&self) -> String {
        let mut out = String::new();
        for r in self.criteria.iter().chain(&self.extras) {
            let _ = writeln!(out, "{}", r.line());
        }
        let failed = self.criteria.iter().chain(&self.extras).filter(|r| !r.passed).count();
        let _ = writeln!(out, "{} criteria, {failed} failed", self.criteria.len() + self.extras.len());
        out
    }
}

pub fn require(report: &SuiteReport) -> Result<()> {
    if report.passed {
        Ok(())
    } else {
        Err(Error::InvariantViolation("verification suite failed".into()))
    }
}
