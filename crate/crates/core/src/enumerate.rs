//! Enumeration of F-free graphs up to isomorphism by canonical augmentation.
//!
//! Graphs of order `n + 1` are generated from the representatives of order
//! `n` by adding a vertex with every possible neighbor set. A child is kept
//! only if the added vertex lies in the automorphism orbit of a canonically
//! chosen vertex `m(G)`, so each isomorphism class has exactly one parent
//! class. Since F-freeness is inherited by induced subgraphs, every parent is
//! F-free and the containment test only needs copies through the new vertex.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::canon::{canonicalize, CanonicalCode};
use crate::embed::ContainmentTester;
use crate::error::{Error, Result};
use crate::graph::{bit, Bits, SmallGraph};

pub const DEFAULT_ENUMERATION_CAP: usize = 10;

#[derive(Clone, Copy, Debug)]
pub struct EnumerationOptions {
    /// Largest order the enumerator agrees to reach.
    pub cap: usize,
    /// Print one counter line per level to standard error.
    pub progress: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_ENUMERATION_CAP,
            progress: false,
        }
    }
}

/// Number of labeled graphs on `n` vertices, as a decimal string.
pub fn labeled_graph_count(n: usize) -> String {
    let pairs = n * n.saturating_sub(1) / 2;
    format!("2^{pairs}")
}

fn refuse(n: usize, cap: usize) -> Error {
    Error::Infeasible {
        reason: format!("enumeration of order {n} exceeds the cap of {cap} vertices"),
        estimate: labeled_graph_count(n),
    }
}

/// Canonical forms of all F-free graphs of order `n`, one per isomorphism
/// class, in a deterministic order. Results are memoized per `(n, F)`.
pub fn free_graphs(n: usize, f: &SmallGraph, opts: &EnumerationOptions) -> Result<Arc<Vec<SmallGraph>>> {
    if n > opts.cap {
        return Err(refuse(n, opts.cap));
    }
    type Memo = Mutex<HashMap<(usize, CanonicalCode), Arc<Vec<SmallGraph>>>>;
    static MEMO: OnceLock<Memo> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    let key = (n, canonicalize(f).code());
    if let Some(hit) = memo.lock().expect("memo lock").get(&key) {
        return Ok(hit.clone());
    }
    let tester = ContainmentTester::new(f);
    let mut level = vec![SmallGraph::empty(0)?];
    if tester.contains(&level[0]) {
        level.clear();
    }
    for order in 0..n {
        level = extend_level(&level, &tester);
        if opts.progress {
            eprintln!("enumerate order={} classes={}", order + 1, level.len());
        }
    }
    let out = Arc::new(level);
    memo.lock().expect("memo lock").insert(key, out.clone());
    Ok(out)
}

/// Visits one representative per isomorphism class of F-free graphs of
/// order `n`; returns the number of classes visited.
pub fn enumerate_free_graphs<V>(n: usize, f: &SmallGraph, opts: &EnumerationOptions, mut visit: V) -> Result<u64>
where
    V: FnMut(&SmallGraph),
{
    let graphs = free_graphs(n, f, opts)?;
    for g in graphs.iter() {
        visit(g);
    }
    Ok(graphs.len() as u64)
}

fn extend_level(parents: &[SmallGraph], tester: &ContainmentTester) -> Vec<SmallGraph> {
    let per_parent: Vec<Vec<SmallGraph>> = parents.par_iter().map(|p| children(p, tester)).collect();
    per_parent.into_iter().flatten().collect()
}

fn children(parent: &SmallGraph, tester: &ContainmentTester) -> Vec<SmallGraph> {
    let n = parent.order();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for s in 0..(1u64 << n) {
        let child = parent.with_vertex(s as u32).expect("order checked by caller");
        if !is_candidate(&child, n) || tester.contains_through(&child, n) {
            continue;
        }
        let canon = canonicalize(&child);
        let m = distinguished_vertex(&child, &canon.position);
        if canon.same_orbit(m, n) && seen.insert(canon.form) {
            out.push(canon.form);
        }
    }
    out
}

/// Vertices of maximum degree, then of maximum neighbor-degree sum. This set
/// is invariant under isomorphism and always contains `m(G)`.
fn invariant_set(g: &SmallGraph) -> u32 {
    let n = g.order();
    let dmax = g.max_degree();
    let top: Vec<usize> = (0..n).filter(|&v| g.degree(v) == dmax).collect();
    let nsum = |v: usize| Bits(g.neighbors(v)).map(|w| g.degree(w)).sum::<usize>();
    let best = top.iter().map(|&v| nsum(v)).max().unwrap_or(0);
    top.into_iter().filter(|&v| nsum(v) == best).fold(0, |m, v| m | bit(v))
}

fn is_candidate(child: &SmallGraph, new: usize) -> bool {
    invariant_set(child) & bit(new) != 0
}

/// The vertex of the invariant set with the largest canonical label.
fn distinguished_vertex(g: &SmallGraph, position: &[u8]) -> usize {
    Bits(invariant_set(g))
        .max_by_key(|&v| position[v])
        .expect("a nonempty graph has a nonempty invariant set")
}
