//! Fast engines against the brute-force reference implementations.

use itertools::Itertools;
use multituran_core::berge::{contains_berge, ex_berge, Hypergraph};
use multituran_core::colorsearch::best_coloring;
use multituran_core::counting::count_copies;
use multituran_core::enumerate::{free_graphs, EnumerationOptions};
use multituran_core::oracle;
use multituran_core::search::{cex_multi, ex_multi, SearchOptions, SearchProblem};
use multituran_core::verify::random_clique_free;
use multituran_core::{automorphism_count, canonical_code, contains_subgraph, PatternSpec, SmallGraph};
use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use PatternSpec::*;

fn g(p: PatternSpec) -> SmallGraph {
    p.expand().unwrap()
}

fn random_graph(rng: &mut StdRng, n: usize, density: std::ops::Range<f64>) -> SmallGraph {
    let p = rng.random_range(density);
    let mut g = SmallGraph::empty(n).unwrap();
    for (u, v) in (0..n).tuple_combinations() {
        if rng.random_bool(p) {
            g.add_edge(u, v);
        }
    }
    g
}

#[test]
fn enumeration_matches_filtered_labeled_graphs() {
    for f in [Clique(3), Clique(4), Cycle(4)] {
        let fg = g(f.clone());
        for n in 0..=6 {
            let fast = free_graphs(n, &fg, &EnumerationOptions::default()).unwrap();
            let slow = oracle::free_graph_classes(n, &fg).unwrap();
            assert_eq!(fast.len(), slow.len(), "n={n}, F={f}");
            let mut a: Vec<u64> = fast.iter().map(oracle::certificate).collect();
            let mut b: Vec<u64> = slow.iter().map(oracle::certificate).collect();
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b, "n={n}, F={f}");
        }
    }
}

#[test]
fn unlabeled_graph_counts() {
    let k7 = SmallGraph::complete(7).unwrap();
    let counts: Vec<usize> = (1..=6).map(|n| oracle::free_graph_classes(n, &k7).unwrap().len()).collect();
    assert_eq!(counts, [1, 2, 4, 11, 34, 156]);
}

#[test]
fn canonical_codes_and_groups_match_permutation_oracles() {
    let mut rng = StdRng::seed_from_u64(1);
    for _ in 0..300 {
        let n = rng.random_range(0..=7);
        let a = random_graph(&mut rng, n, 0.2..0.8);
        let b = random_graph(&mut rng, n, 0.2..0.8);
        assert_eq!(automorphism_count(&a), oracle::automorphism_count(&a), "{}", a.to_graph6());
        assert_eq!(
            canonical_code(&a) == canonical_code(&b),
            oracle::isomorphic(&a, &b),
            "{} {}",
            a.to_graph6(),
            b.to_graph6()
        );
    }
}

#[test]
fn three_edge_graphs_on_four_vertices() {
    let pairs: Vec<(usize, usize)> = (0..4).tuple_combinations().collect();
    let graphs: Vec<SmallGraph> = pairs
        .iter()
        .copied()
        .combinations(3)
        .map(|e| SmallGraph::from_edges(4, &e).unwrap())
        .collect();
    assert_eq!(graphs.len(), 20);
    let codes: std::collections::HashSet<_> = graphs.iter().map(canonical_code).collect();
    let certs: std::collections::HashSet<_> = graphs.iter().map(oracle::certificate).collect();
    assert_eq!(codes.len(), 3);
    assert_eq!(certs.len(), 3);
}

#[test]
fn containment_matches_injective_maps() {
    let mut rng = StdRng::seed_from_u64(2);
    let patterns = [Clique(3), Cycle(4), Path(4), Star(4), Fan2, CycleWithTail, TwoMatchPlusIsolated, Clique(4)];
    for _ in 0..300 {
        let n = rng.random_range(1..=7);
        let host = random_graph(&mut rng, n, 0.2..0.9);
        for p in &patterns {
            let f = g(p.clone());
            assert_eq!(contains_subgraph(&host, &f), oracle::contains(&host, &f), "{p} in {}", host.to_graph6());
        }
    }
}

#[test]
fn named_pattern_counts_match_subset_oracle() {
    let mut rng = StdRng::seed_from_u64(3);
    let patterns = [Matching(3), StarPlusMatching(6), CompleteBipartite(2, 3), Path(6), Cycle(6), Star(6)];
    for _ in 0..40 {
        let n = rng.random_range(5..=8);
        let host = random_graph(&mut rng, n, 0.3..0.9);
        for p in &patterns {
            let h = g(p.clone());
            assert_eq!(count_copies(&h, &host), BigUint::from(oracle::subgraph_count(&h, &host)), "{p}");
        }
    }
}

#[test]
fn best_colorings_match_exhaustion() {
    let mut rng = StdRng::seed_from_u64(4);
    let tuples = [
        vec![Clique(3), Clique(2)],
        vec![Cycle(4), Clique(2)],
        vec![Path(3), Path(3)],
        vec![Clique(3), Path(3), Clique(2)],
    ];
    for _ in 0..25 {
        let n = rng.random_range(2..=6);
        let host = random_graph(&mut rng, n, 0.4..0.6);
        if host.edge_count() > 10 {
            continue;
        }
        for t in &tuples {
            let hs: Vec<SmallGraph> = t.iter().map(|p| g(p.clone())).collect();
            let fast = best_coloring(&host, t).unwrap();
            assert!(fast.exact);
            assert_eq!(fast.value, oracle::best_coloring_value(&host, &hs).unwrap(), "{}", host.to_graph6());
        }
    }
}

/// Maximum over all labeled F-free graphs, no enumeration engine involved.
fn brute_ex(n: usize, patterns: &[SmallGraph], f: &SmallGraph, colored: bool) -> u128 {
    oracle::labeled_graphs(n)
        .unwrap()
        .into_iter()
        .filter(|h| !oracle::contains(h, f))
        .map(|h| {
            if colored {
                oracle::best_coloring_value(&h, patterns).unwrap()
            } else {
                patterns.iter().map(|p| oracle::subgraph_count(p, &h)).sum()
            }
        })
        .max()
        .unwrap()
}

#[test]
fn extremal_numbers_match_brute_force() {
    let opts = SearchOptions::default();
    let cases = [
        (vec![Clique(3), Clique(2)], Clique(4)),
        (vec![Path(3), Clique(2)], Clique(3)),
        (vec![Cycle(4), Clique(2)], Fan2),
        (vec![Path(5), Cycle(5)], Clique(3)),
    ];
    for n in 2..=5 {
        for (patterns, f) in &cases {
            let hs: Vec<SmallGraph> = patterns.iter().map(|p| g(p.clone())).collect();
            let fg = g(f.clone());
            let mono = ex_multi(&SearchProblem::monochrome(n, patterns.clone(), f.clone()).unwrap(), &opts).unwrap();
            assert_eq!(mono.value, BigUint::from(brute_ex(n, &hs, &fg, false)), "ex n={n} {f}");
            let col = cex_multi(&SearchProblem::colored(n, patterns.clone(), f.clone()).unwrap(), &opts).unwrap();
            assert!(col.exact);
            assert_eq!(col.value, BigUint::from(brute_ex(n, &hs, &fg, true)), "cex n={n} {f}");
        }
    }
}

fn random_hypergraph(rng: &mut StdRng, n: usize, m: usize) -> Hypergraph {
    let all = Hypergraph::complete(n, 3).unwrap();
    let mut edges = all.edges().to_vec();
    rand::seq::SliceRandom::shuffle(edges.as_mut_slice(), rng);
    Hypergraph::new(n, 3, edges.into_iter().take(m)).unwrap()
}

#[test]
fn berge_containment_matches_naive_assignment() {
    let mut rng = StdRng::seed_from_u64(5);
    let patterns = [Clique(2), Path(3), Clique(3), Cycle(4), Path(4), Star(4), TwoMatchPlusIsolated];
    for _ in 0..300 {
        let n = rng.random_range(3..=6);
        let m = rng.random_range(0..=6.min(n * (n - 1) * (n - 2) / 6));
        let h = random_hypergraph(&mut rng, n, m);
        for p in &patterns {
            let f = g(p.clone());
            assert_eq!(contains_berge(&h, &f), oracle::contains_berge(&h, &f), "{p} in\n{}", h.to_text());
        }
    }
}

#[test]
fn berge_extremal_numbers_match_subset_search() {
    for (n, f) in [(4, Clique(3)), (4, Cycle(4)), (4, Path(3)), (5, Clique(3)), (5, Cycle(4)), (5, Clique(4))] {
        let fast = ex_berge(n, 3, &f).unwrap();
        assert_eq!(fast.value, oracle::ex_berge(n, 3, &g(f.clone())).unwrap(), "n={n} F={f}");
        assert_eq!(fast.witness.len(), fast.value);
        assert!(!oracle::contains_berge(&fast.witness, &g(f.clone())));
    }
}

#[test]
fn chromatic_numbers_match_palette_search() {
    let mut rng = StdRng::seed_from_u64(6);
    for _ in 0..100 {
        let n = rng.random_range(0..=7);
        let host = random_clique_free(&mut rng, n, 5).unwrap();
        assert_eq!(host.chromatic_number(), oracle::chromatic_number(&host), "{}", host.to_graph6());
    }
}
