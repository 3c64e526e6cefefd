//! Canonical labeling, automorphism group order and vertex orbits.
//!
//! The search tree is the usual individualization-refinement tree: start from
//! the unit partition, refine to an equitable ordered partition, then branch by
//! individualizing each vertex of the first smallest non-singleton cell. Every
//! leaf is a discrete partition, i.e. a relabeling; the canonical form is the
//! relabeling with the lexicographically smallest adjacency rows.
//!
//! Leaves with equal rows differ by an automorphism. Those automorphisms prune
//! the tree (children in the same orbit of the pointwise stabilizer of the
//! current prefix are skipped), and the ones that map the first leaf elsewhere
//! give the group order by orbit-stabilizer along the first path.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{bit, Bits, SmallGraph, MAX_ORDER};

/// Byte string identifying an isomorphism class: the order followed by the
/// packed upper triangle of the canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode({})", self.to_hex())
    }
}

#[derive(Clone, Debug)]
pub struct Canonical {
    /// `position[v]` is the canonical label of vertex `v`.
    pub position: Vec<u8>,
    pub form: SmallGraph,
    /// Orbit representative (smallest member) of each vertex under the full group.
    pub orbit: Vec<u8>,
    pub automorphisms: u128,
}

impl Canonical {
    pub fn code(&self) -> CanonicalCode {
        code_of_form(&self.form)
    }

    pub fn same_orbit(&self, u: usize, v: usize) -> bool {
        self.orbit[u] == self.orbit[v]
    }

    /// Number of distinct vertex orbits.
    pub fn orbit_count(&self) -> usize {
        self.orbit.iter().enumerate().filter(|&(v, &o)| v == o as usize).count()
    }
}

pub fn canonical_code(g: &SmallGraph) -> CanonicalCode {
    canonicalize(g).code()
}

pub fn automorphism_count(g: &SmallGraph) -> u128 {
    canonicalize(g).automorphisms
}

pub fn is_isomorphic(a: &SmallGraph, b: &SmallGraph) -> bool {
    if a.order() != b.order() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut da: Vec<usize> = (0..a.order()).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..b.order()).map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    da == db && canonicalize(a).form == canonicalize(b).form
}

fn code_of_form(form: &SmallGraph) -> CanonicalCode {
    let n = form.order();
    let mut bytes = Vec::with_capacity(1 + (n * n.saturating_sub(1) / 2).div_ceil(8));
    bytes.push(n as u8);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | form.has_edge(i, j) as u8;
            filled += 1;
            if filled == 8 {
                bytes.push(acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        bytes.push(acc << (8 - filled));
    }
    CanonicalCode(bytes)
}

type Perm = [u8; MAX_ORDER];

struct Leaf {
    /// vertex at each canonical position
    order: Perm,
    rows: [u32; MAX_ORDER],
}

struct Search<'a> {
    g: &'a SmallGraph,
    n: usize,
    first: Option<Leaf>,
    first_path: Vec<u8>,
    best: Option<Leaf>,
    generators: Vec<Perm>,
}

enum Flow {
    Continue,
    /// Unwind to the first-path node at this depth.
    Jump(usize),
}

pub fn canonicalize(g: &SmallGraph) -> Canonical {
    let n = g.order();
    if n == 0 {
        return Canonical {
            position: vec![],
            form: *g,
            orbit: vec![],
            automorphisms: 1,
        };
    }
    let mut search = Search {
        g,
        n,
        first: None,
        first_path: Vec::new(),
        best: None,
        generators: Vec::new(),
    };
    let mut cells = vec![g.vertex_mask()];
    refine(g, &mut cells);
    let mut prefix = Vec::with_capacity(n);
    search.dfs(cells, &mut prefix);

    let best = search.best.as_ref().expect("search visits at least one leaf");
    let mut position = vec![0u8; n];
    for p in 0..n {
        position[best.order[p] as usize] = p as u8;
    }
    let form = SmallGraph::from_rows(n, &best.rows[..n]).expect("leaf rows form a valid graph");

    let mut automorphisms: u128 = 1;
    for d in 0..search.first_path.len() {
        let fixed = &search.first_path[..d];
        let mut uf = UnionFind::new(n);
        for gen in search.generators.iter().filter(|gen| fixes(gen, fixed)) {
            uf.absorb(gen, n);
        }
        automorphisms *= uf.class_size(search.first_path[d] as usize) as u128;
    }
    let mut uf = UnionFind::new(n);
    for gen in &search.generators {
        uf.absorb(gen, n);
    }
    let orbit = (0..n).map(|v| uf.min_member(v) as u8).collect();

    Canonical {
        position,
        form,
        orbit,
        automorphisms,
    }
}

fn fixes(gen: &Perm, points: &[u8]) -> bool {
    points.iter().all(|&p| gen[p as usize] == p)
}

impl Search<'_> {
    fn dfs(&mut self, cells: Vec<u32>, prefix: &mut Vec<u8>) -> Flow {
        if cells.len() == self.n {
            return self.leaf(&cells, prefix);
        }
        let target = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.count_ones() > 1)
            .min_by_key(|(i, c)| (c.count_ones(), *i))
            .map(|(i, _)| i)
            .expect("non-discrete partition has a non-singleton cell");
        let cell = cells[target];
        let mut explored: Vec<usize> = Vec::new();
        for v in Bits(cell) {
            if !explored.is_empty() && self.equivalent(v, &explored, prefix) {
                continue;
            }
            explored.push(v);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(bit(v));
            child.push(cell & !bit(v));
            child.extend_from_slice(&cells[target + 1..]);
            refine(self.g, &mut child);
            prefix.push(v as u8);
            let flow = self.dfs(child, prefix);
            prefix.pop();
            if let Flow::Jump(d) = flow {
                if d < prefix.len() {
                    return flow;
                }
            }
        }
        Flow::Continue
    }

    fn leaf(&mut self, cells: &[u32], prefix: &[u8]) -> Flow {
        let n = self.n;
        let mut order = [0u8; MAX_ORDER];
        let mut pos = [0u8; MAX_ORDER];
        for (p, c) in cells.iter().enumerate() {
            let v = c.trailing_zeros() as u8;
            order[p] = v;
            pos[v as usize] = p as u8;
        }
        let mut rows = [0u32; MAX_ORDER];
        for p in 0..n {
            let mut row = 0;
            for w in Bits(self.g.neighbors(order[p] as usize)) {
                row |= bit(pos[w] as usize);
            }
            rows[p] = row;
        }
        let leaf = Leaf { order, rows };
        let Some(first) = &self.first else {
            self.first_path = prefix.to_vec();
            self.best = Some(Leaf { order, rows });
            self.first = Some(leaf);
            return Flow::Continue;
        };
        if first.rows[..n] == leaf.rows[..n] {
            let gen = self.mapping(&first.order, &leaf.order);
            self.generators.push(gen);
            let d = prefix
                .iter()
                .zip(&self.first_path)
                .take_while(|(a, b)| a == b)
                .count();
            return Flow::Jump(d);
        }
        let best = self.best.as_ref().expect("best is set with first");
        match leaf.rows[..n].cmp(&best.rows[..n]) {
            Ordering::Less => self.best = Some(leaf),
            Ordering::Equal => {
                let gen = self.mapping(&best.order, &leaf.order);
                self.generators.push(gen);
            }
            Ordering::Greater => {}
        }
        Flow::Continue
    }

    /// The automorphism sending the vertex at each position of `from` to the
    /// vertex at the same position of `to`.
    fn mapping(&self, from: &Perm, to: &Perm) -> Perm {
        let mut gen = [0u8; MAX_ORDER];
        for p in 0..self.n {
            gen[from[p] as usize] = to[p];
        }
        debug_assert!((0..self.n).all(|u| {
            Bits(self.g.neighbors(u)).all(|w| self.g.has_edge(gen[u] as usize, gen[w] as usize))
        }));
        gen
    }

    fn equivalent(&self, v: usize, explored: &[usize], prefix: &[u8]) -> bool {
        let mut uf = UnionFind::new(self.n);
        let mut any = false;
        for gen in self.generators.iter().filter(|gen| fixes(gen, prefix)) {
            uf.absorb(gen, self.n);
            any = true;
        }
        any && explored.iter().any(|&u| uf.find(u) == uf.find(v))
    }
}

/// Splits cells by neighbor counts into each cell until the ordered
/// partition is equitable. Only cell order and counts are consulted, so the
/// result commutes with relabeling.
fn refine(g: &SmallGraph, cells: &mut Vec<u32>) {
    let mut changed = true;
    while changed {
        changed = false;
        let mut w = 0;
        while w < cells.len() {
            let splitter = cells[w];
            let mut x = 0;
            while x < cells.len() {
                let cell = cells[x];
                if cell.count_ones() < 2 {
                    x += 1;
                    continue;
                }
                let mut buckets = [0u32; MAX_ORDER + 1];
                let mut lo = MAX_ORDER;
                let mut hi = 0;
                for v in Bits(cell) {
                    let c = (g.neighbors(v) & splitter).count_ones() as usize;
                    buckets[c] |= bit(v);
                    lo = lo.min(c);
                    hi = hi.max(c);
                }
                if lo == hi {
                    x += 1;
                    continue;
                }
                let pieces: Vec<u32> = buckets[lo..=hi].iter().copied().filter(|&b| b != 0).collect();
                let len = pieces.len();
                cells.splice(x..x + 1, pieces);
                x += len;
                changed = true;
            }
            w += 1;
        }
    }
}

struct UnionFind {
    parent: [u8; MAX_ORDER],
    size: [u8; MAX_ORDER],
}

impl UnionFind {
    fn new(n: usize) -> Self {
        let mut parent = [0u8; MAX_ORDER];
        for (v, p) in parent.iter_mut().enumerate().take(n) {
            *p = v as u8;
        }
        Self {
            parent,
            size: [1; MAX_ORDER],
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] as usize != v {
            let p = self.parent[v] as usize;
            self.parent[v] = self.parent[p];
            v = p;
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (big, small) = if self.size[ra] >= self.size[rb] { (ra, rb) } else { (rb, ra) };
            self.parent[small] = big as u8;
            self.size[big] += self.size[small];
        }
    }

    fn absorb(&mut self, gen: &Perm, n: usize) {
        for v in 0..n {
            self.union(v, gen[v] as usize);
        }
    }

    fn class_size(&mut self, v: usize) -> usize {
        let r = self.find(v);
        self.size[r] as usize
    }

    fn min_member(&mut self, v: usize) -> usize {
        let r = self.find(v);
        (0..=v).find(|&u| self.find(u) == r).unwrap_or(v)
    }
}
