//! Injective edge-preserving maps from a pattern into a host.
//!
//! Pattern vertices are matched in a connectivity-first order, so every vertex
//! after the first of its component has an already-placed neighbor and its
//! candidate set is an intersection of host rows. Isolated pattern vertices
//! are never mapped here; callers account for them with a binomial factor.

use std::ops::ControlFlow;

use crate::canon::canonicalize;
use crate::graph::{bit, Bits, SmallGraph, MAX_ORDER};

#[derive(Clone, Debug)]
pub struct EmbeddingPlan {
    /// Core (non-isolated) pattern vertices in matching order.
    order: Vec<u8>,
    /// For each position, the earlier positions adjacent to it.
    anchors: Vec<Vec<u8>>,
    degree: Vec<u8>,
    pattern_order: usize,
    isolated: usize,
}

impl EmbeddingPlan {
    pub fn new(h: &SmallGraph) -> Self {
        Self::build(h, None)
    }

    /// A plan whose first matched vertex is `root`, which must not be isolated.
    pub fn rooted(h: &SmallGraph, root: usize) -> Self {
        assert!(h.degree(root) > 0, "root of a rooted plan must have an edge");
        Self::build(h, Some(root))
    }

    fn build(h: &SmallGraph, root: Option<usize>) -> Self {
        let core: u32 = (0..h.order()).filter(|&v| h.degree(v) > 0).fold(0, |m, v| m | bit(v));
        let mut remaining = core;
        let mut placed = 0u32;
        let mut order = Vec::with_capacity(core.count_ones() as usize);
        while remaining != 0 {
            let v = match (order.is_empty(), root) {
                (true, Some(r)) => r,
                _ => Bits(remaining)
                    .max_by_key(|&v| {
                        (
                            (h.neighbors(v) & placed).count_ones(),
                            h.degree(v),
                            std::cmp::Reverse(v),
                        )
                    })
                    .expect("remaining is nonempty"),
            };
            order.push(v as u8);
            placed |= bit(v);
            remaining &= !bit(v);
        }
        let mut position = [0u8; MAX_ORDER];
        for (i, &v) in order.iter().enumerate() {
            position[v as usize] = i as u8;
        }
        let anchors = order
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                Bits(h.neighbors(v as usize))
                    .map(|w| position[w])
                    .filter(|&p| (p as usize) < i)
                    .collect()
            })
            .collect();
        let degree = order.iter().map(|&v| h.degree(v as usize) as u8).collect();
        Self {
            order,
            anchors,
            degree,
            pattern_order: h.order(),
            isolated: h.order() - core.count_ones() as usize,
        }
    }

    pub fn core_size(&self) -> usize {
        self.order.len()
    }

    pub fn isolated(&self) -> usize {
        self.isolated
    }

    pub fn pattern_order(&self) -> usize {
        self.pattern_order
    }

    /// Pattern vertex matched at each position.
    pub fn core_vertices(&self) -> &[u8] {
        &self.order
    }

    /// Number of injective edge-preserving maps of the core into `g`.
    pub fn count(&self, g: &SmallGraph) -> u128 {
        if self.core_size() > g.order() {
            return 0;
        }
        if self.order.is_empty() {
            return 1;
        }
        let ctx = Ctx::new(g);
        let mut images = [0u8; MAX_ORDER];
        self.count_from(&ctx, 0, 0, &mut images)
    }

    /// Counts maps whose first position is forced to host vertex `pin`.
    pub fn count_pinned(&self, g: &SmallGraph, pin: usize) -> u128 {
        if self.order.is_empty() || self.core_size() > g.order() {
            return 0;
        }
        let ctx = Ctx::new(g);
        if ctx.deg_ge[self.degree[0] as usize] & bit(pin) == 0 {
            return 0;
        }
        let mut images = [0u8; MAX_ORDER];
        images[0] = pin as u8;
        if self.order.len() == 1 {
            return 1;
        }
        self.count_from(&ctx, 1, bit(pin), &mut images)
    }

    fn count_from(&self, ctx: &Ctx, i: usize, used: u32, images: &mut [u8; MAX_ORDER]) -> u128 {
        let cand = self.candidates(ctx, i, used, images);
        if i + 1 == self.order.len() {
            return cand.count_ones() as u128;
        }
        let mut total = 0;
        for w in Bits(cand) {
            images[i] = w as u8;
            total += self.count_from(ctx, i + 1, used | bit(w), images);
        }
        total
    }

    #[inline]
    fn candidates(&self, ctx: &Ctx, i: usize, used: u32, images: &[u8; MAX_ORDER]) -> u32 {
        let mut cand = ctx.deg_ge[self.degree[i] as usize] & !used;
        for &p in &self.anchors[i] {
            cand &= ctx.g.neighbors(images[p as usize] as usize);
        }
        cand
    }

    /// Visits every map of the core into `g`; `images[i]` is the host vertex
    /// of `core_vertices()[i]`.
    pub fn for_each<F>(&self, g: &SmallGraph, pin: Option<usize>, mut visit: F) -> ControlFlow<()>
    where
        F: FnMut(&[u8]) -> ControlFlow<()>,
    {
        if self.core_size() > g.order() {
            return ControlFlow::Continue(());
        }
        if self.order.is_empty() {
            return visit(&[]);
        }
        let ctx = Ctx::new(g);
        let mut images = [0u8; MAX_ORDER];
        match pin {
            None => self.visit_from(&ctx, 0, 0, &mut images, &mut visit),
            Some(v) => {
                if ctx.deg_ge[self.degree[0] as usize] & bit(v) == 0 {
                    return ControlFlow::Continue(());
                }
                images[0] = v as u8;
                if self.order.len() == 1 {
                    return visit(&images[..1]);
                }
                self.visit_from(&ctx, 1, bit(v), &mut images, &mut visit)
            }
        }
    }

    fn visit_from<F>(&self, ctx: &Ctx, i: usize, used: u32, images: &mut [u8; MAX_ORDER], visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[u8]) -> ControlFlow<()>,
    {
        let cand = self.candidates(ctx, i, used, images);
        let last = i + 1 == self.order.len();
        for w in Bits(cand) {
            images[i] = w as u8;
            if last {
                visit(&images[..self.order.len()])?;
            } else {
                self.visit_from(ctx, i + 1, used | bit(w), images, visit)?;
            }
        }
        ControlFlow::Continue(())
    }

    pub fn exists(&self, g: &SmallGraph, pin: Option<usize>) -> bool {
        self.for_each(g, pin, |_| ControlFlow::Break(())).is_break()
    }
}

struct Ctx<'a> {
    g: &'a SmallGraph,
    /// `deg_ge[d]` holds the host vertices of degree at least `d`.
    deg_ge: [u32; MAX_ORDER + 1],
}

impl<'a> Ctx<'a> {
    fn new(g: &'a SmallGraph) -> Self {
        let mut deg_ge = [0u32; MAX_ORDER + 1];
        for v in 0..g.order() {
            let d = g.degree(v);
            for slot in deg_ge.iter_mut().take(d + 1) {
                *slot |= bit(v);
            }
        }
        Self { g, deg_ge }
    }
}

/// Whether `g` has a (not necessarily induced) subgraph isomorphic to `f`.
pub fn contains_subgraph(g: &SmallGraph, f: &SmallGraph) -> bool {
    if f.order() > g.order() || f.edge_count() > g.edge_count() {
        return false;
    }
    EmbeddingPlan::new(f).exists(g, None)
}

/// Repeated containment tests against one fixed forbidden graph, including
/// the restricted test "is there a copy through vertex `v`".
#[derive(Clone, Debug)]
pub struct ContainmentTester {
    forbidden: SmallGraph,
    plan: EmbeddingPlan,
    /// One plan per orbit of core vertices, rooted at a representative.
    rooted: Vec<EmbeddingPlan>,
}

impl ContainmentTester {
    pub fn new(forbidden: &SmallGraph) -> Self {
        let canon = canonicalize(forbidden);
        let rooted = (0..forbidden.order())
            .filter(|&v| forbidden.degree(v) > 0 && canon.orbit[v] as usize == v)
            .map(|v| EmbeddingPlan::rooted(forbidden, v))
            .collect();
        Self {
            forbidden: *forbidden,
            plan: EmbeddingPlan::new(forbidden),
            rooted,
        }
    }

    pub fn forbidden(&self) -> &SmallGraph {
        &self.forbidden
    }

    pub fn contains(&self, g: &SmallGraph) -> bool {
        g.order() >= self.forbidden.order()
            && g.edge_count() >= self.forbidden.edge_count()
            && self.plan.exists(g, None)
    }

    /// Whether some copy of the forbidden graph uses host vertex `v`.
    ///
    /// When the forbidden graph has isolated vertices a copy can touch `v`
    /// only through an isolated pattern vertex, so this falls back to the full
    /// test.
    pub fn contains_through(&self, g: &SmallGraph, v: usize) -> bool {
        if g.order() < self.forbidden.order() || g.edge_count() < self.forbidden.edge_count() {
            return false;
        }
        if self.plan.isolated() > 0 || self.rooted.is_empty() {
            return self.plan.exists(g, None);
        }
        self.rooted.iter().any(|plan| plan.exists(g, Some(v)))
    }
}
