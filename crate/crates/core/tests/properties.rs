//! Invariants over randomly generated inputs.

use multituran_core::berge::{contains_berge, Hypergraph};
use multituran_core::coloring::EdgeColoring;
use multituran_core::counting::{
    count_bipartite_closed_form, count_cliques_multipartite, count_colored, count_copies, reduced_zagreb,
    MultipartiteShape,
};
use multituran_core::embed::ContainmentTester;
use multituran_core::symmetrize::SymmetrizationState;
use multituran_core::{automorphism_count, canonical_code, contains_subgraph, PatternSpec, SmallGraph};
use num_bigint::BigUint;
use proptest::prelude::*;
use PatternSpec::*;

/// Order and upper-triangle bits.
fn graph(max_order: usize) -> impl Strategy<Value = SmallGraph> {
    (0..=max_order).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(move |bits| {
            let mut g = SmallGraph::empty(n).unwrap();
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[i] {
                        g.add_edge(u, v);
                    }
                    i += 1;
                }
            }
            g
        })
    })
}

fn graph_and_permutation(max_order: usize) -> impl Strategy<Value = (SmallGraph, Vec<usize>)> {
    graph(max_order).prop_flat_map(|g| {
        let perm: Vec<usize> = (0..g.order()).collect();
        (Just(g), Just(perm).prop_shuffle())
    })
}

fn pattern() -> impl Strategy<Value = PatternSpec> {
    prop_oneof![
        (1usize..=4).prop_map(Clique),
        (1usize..=5).prop_map(Path),
        (3usize..=5).prop_map(Cycle),
        (2usize..=5).prop_map(Star),
        Just(TwoMatchPlusIsolated),
        Just(PathPlusEdge),
        Just(CycleWithTail),
        Just(Fan2),
        (1usize..=2, 1usize..=3).prop_map(|(a, b)| CompleteBipartite(a, b)),
    ]
}

fn colored(max_order: usize, k: usize) -> impl Strategy<Value = EdgeColoring> {
    graph(max_order).prop_flat_map(move |g| {
        proptest::collection::vec(1..=k as u8, g.edge_count())
            .prop_map(move |colors| EdgeColoring::from_colors(g, k, &colors).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn graph6_round_trips(g in graph(32)) {
        let text = g.to_graph6();
        prop_assert_eq!(SmallGraph::from_graph6(&text).unwrap(), g);
    }

    #[test]
    fn relabeling_preserves_invariants((g, perm) in graph_and_permutation(9), p in pattern()) {
        let h = g.permuted(&perm);
        prop_assert_eq!(canonical_code(&g), canonical_code(&h));
        prop_assert_eq!(automorphism_count(&g), automorphism_count(&h));
        let f = p.expand().unwrap();
        prop_assert_eq!(count_copies(&f, &g), count_copies(&f, &h));
        prop_assert_eq!(contains_subgraph(&g, &f), contains_subgraph(&h, &f));
    }

    #[test]
    fn adding_edges_is_monotone(g in graph(8), p in pattern(), u in 0usize..8, v in 0usize..8) {
        prop_assume!(u < g.order() && v < g.order() && u != v);
        let mut bigger = g;
        bigger.add_edge(u, v);
        let f = p.expand().unwrap();
        prop_assert!(count_copies(&f, &g) <= count_copies(&f, &bigger));
        prop_assert!(!contains_subgraph(&g, &f) || contains_subgraph(&bigger, &f));
        let tester = ContainmentTester::new(&f);
        prop_assert_eq!(tester.contains(&bigger), contains_subgraph(&bigger, &f));
        if !tester.contains(&g) {
            prop_assert_eq!(tester.contains_through(&bigger, u), contains_subgraph(&bigger, &f));
        }
    }

    #[test]
    fn copies_exist_iff_contained(g in graph(8), p in pattern()) {
        let f = p.expand().unwrap();
        prop_assert_eq!(count_copies(&f, &g) > BigUint::ZERO, contains_subgraph(&g, &f));
    }

    #[test]
    fn zagreb_identity(g in graph(12)) {
        let rhs = count_copies(&Path(4).expand().unwrap(), &g) + count_copies(&Clique(3).expand().unwrap(), &g) * 3u32;
        prop_assert_eq!(BigUint::from(reduced_zagreb(&g)), rhs);
    }

    #[test]
    fn multipartite_clique_formula(parts in proptest::collection::vec(1usize..=4, 1..=4), r in 1usize..=4) {
        let shape = MultipartiteShape::new(parts).unwrap();
        let g = shape.graph().unwrap();
        prop_assert_eq!(count_cliques_multipartite(r, &shape), count_copies(&Clique(r).expand().unwrap(), &g));
    }

    #[test]
    fn bipartite_formula(a in 1usize..=3, b in 1usize..=3, x in 1usize..=5, y in 1usize..=5) {
        let host = CompleteBipartite(x, y).expand().unwrap();
        let h = CompleteBipartite(a, b).expand().unwrap();
        prop_assert_eq!(count_bipartite_closed_form(a, b, x, y), count_copies(&h, &host));
    }

    #[test]
    fn coloring_text_round_trips(c in colored(10, 3)) {
        prop_assert_eq!(EdgeColoring::parse(&c.to_text(), 3).unwrap(), c);
    }

    #[test]
    fn monochrome_colorings_count_like_plain_graphs(g in graph(8), a in pattern(), b in pattern()) {
        let c = EdgeColoring::uniform(g, 2, 1).unwrap();
        let v = count_colored(&[a.clone(), b.clone()], &c).unwrap();
        prop_assert_eq!(&v.entries[0], &count_copies(&a.expand().unwrap(), &g));
        let empty = SmallGraph::empty(g.order()).unwrap();
        prop_assert_eq!(&v.entries[1], &count_copies(&b.expand().unwrap(), &empty));
    }

    #[test]
    fn berge_containment_is_monotone(
        n in 3usize..=6,
        picks in proptest::collection::vec(any::<prop::sample::Index>(), 0..=7),
        extra in any::<prop::sample::Index>(),
        p in pattern(),
    ) {
        let all = Hypergraph::complete(n, 3).unwrap();
        let pick = |i: &prop::sample::Index| all.edges()[i.index(all.len())];
        let h = Hypergraph::new(n, 3, picks.iter().map(pick)).unwrap();
        let bigger = Hypergraph::new(n, 3, picks.iter().chain([&extra]).map(pick)).unwrap();
        let f = p.expand().unwrap();
        prop_assert!(!contains_berge(&h, &f) || contains_berge(&bigger, &f));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// Every valid vertex step keeps the host K4-free and never lowers the objective.
    #[test]
    fn vertex_steps_never_lose(c in colored(8, 2), steps in proptest::collection::vec((0usize..8, 0usize..8), 1..=5)) {
        let k4 = SmallGraph::complete(4).unwrap();
        prop_assume!(!contains_subgraph(c.base(), &k4));
        let mut s = SymmetrizationState::new(c, vec![Clique(3), Clique(2)], 4).unwrap();
        for (u, v) in steps {
            let n = s.coloring().order();
            if u >= n || v >= n || u == v || s.coloring().base().has_edge(u, v) || s.dstar(u) > s.dstar(v) {
                continue;
            }
            let before = s.objective();
            s.symmetrize_vertex(u, v).unwrap();
            prop_assert!(s.objective() >= before);
            prop_assert_eq!(s.objective(), s.recount());
            prop_assert!(!contains_subgraph(s.coloring().base(), &k4));
        }
    }

    #[test]
    fn pipeline_ends_multipartite(c in colored(8, 2)) {
        prop_assume!(!contains_subgraph(c.base(), &SmallGraph::complete(4).unwrap()));
        let mut s = SymmetrizationState::new(c, vec![Clique(3), Clique(2)], 4).unwrap();
        let start = s.objective();
        let outcome = s.run_pipeline().unwrap();
        prop_assert!(s.objective() >= start);
        prop_assert!(outcome.packs.small.len() <= 3);
        prop_assert!(outcome.packs.validate(s.coloring()).is_ok());
    }
}
