//! Invariants of the multigraph model and of bicircular matroids.

mod common;

use std::collections::BTreeMap;

use bicircular_lpm::bicircular::{bicircular, classify_circuit, CircuitKind};
use bicircular_lpm::matroid::Extension;
use bicircular_lpm::multigraph::{connected_multigraphs, Multigraph};
use common::{arb_connected_graph, arb_graph};
use proptest::prelude::*;
use rayon::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(512))]

    #[test]
    fn deletion_keeps_every_other_edge(g in arb_graph(5, 8), pick in any::<prop::sample::Index>()) {
        prop_assume!(g.edge_count() > 0);
        let ids = g.edge_ids();
        let e = ids[pick.index(ids.len())];
        let h = g.delete_edge(e).unwrap();
        prop_assert_eq!(h.edge_count() + 1, g.edge_count());
        for f in ids.into_iter().filter(|&f| f != e) {
            prop_assert_eq!(h.endpoints(f), g.endpoints(f));
        }
    }

    #[test]
    fn contraction_renames_only_the_merged_endpoint(g in arb_graph(5, 8), pick in any::<prop::sample::Index>()) {
        prop_assume!(g.edge_count() > 0);
        let ids = g.edge_ids();
        let e = ids[pick.index(ids.len())];
        let (u, v) = g.endpoints(e).unwrap();
        let h = g.contract_edge(e).unwrap();
        prop_assert_eq!(h.endpoints(e), None);
        let (keep, gone) = (u.min(v), u.max(v));
        for f in ids.into_iter().filter(|&f| f != e) {
            let (a, b) = g.endpoints(f).unwrap();
            let r = |x| if x == gone { keep } else { x };
            let (a, b) = (r(a), r(b));
            prop_assert_eq!(h.endpoints(f), Some((a.min(b), a.max(b))));
        }
    }

    #[test]
    fn smoothing_undoes_any_subdivision(
        g in arb_graph(4, 7),
        splits in prop::collection::vec((any::<prop::sample::Index>(), 2..=4usize), 1..=3),
    ) {
        let mut h = g.clone();
        for (pick, k) in splits {
            let links: Vec<_> = h.edge_ids().into_iter().filter(|&e| !h.is_loop(e)).collect();
            if links.is_empty() {
                break;
            }
            h = h.subdivide_edge(links[pick.index(links.len())], k).unwrap().0;
        }
        let a = g.smooth().graph.without_isolated_vertices();
        let b = h.smooth().graph.without_isolated_vertices();
        prop_assert!(a.is_isomorphic(&b), "{}\n---\n{}", a.to_mg(), b.to_mg());
    }

    #[test]
    fn blocks_partition_edges_and_cut_vertices_are_shared(g in arb_connected_graph(6, 9)) {
        let bd = g.block_structure().unwrap();
        // loops at cut vertices are kept aside rather than in a block
        let in_blocks: usize = bd.blocks.iter().map(|b| b.edges.len()).sum();
        let aside: usize = bd.cut_vertex_loops.values().map(Vec::len).sum();
        prop_assert_eq!(in_blocks + aside, g.edge_count());
        let mut seen = BTreeMap::new();
        for b in &bd.blocks {
            for &v in &b.vertices {
                *seen.entry(v).or_insert(0) += 1;
            }
        }
        for v in g.vertices() {
            let shared = seen.get(&v).copied().unwrap_or(0) >= 2;
            prop_assert_eq!(shared, bd.cut_vertices.contains(&v), "vertex {}", v);
        }
    }

    #[test]
    fn canonical_form_ignores_labels(g in arb_graph(5, 8), shift in 1u32..50) {
        let relabelled = Multigraph::from_edges(
            &g.edges().map(|(_, u, v)| (u * 7 % 11 + shift, v * 7 % 11 + shift)).collect::<Vec<_>>(),
        );
        prop_assert!(g.without_isolated_vertices().is_isomorphic(&relabelled));
    }

    #[test]
    fn subdivision_is_a_series_extension(g in arb_graph(4, 7), pick in any::<prop::sample::Index>()) {
        let links: Vec<_> = g.edge_ids().into_iter().filter(|&e| !g.is_loop(e)).collect();
        prop_assume!(!links.is_empty());
        let e = links[pick.index(links.len())];
        let (h, path) = g.subdivide_edge(e, 2).unwrap();
        let series = bicircular(&g).unwrap().extend(&Extension::Series(e), path[1]).unwrap();
        prop_assert_eq!(bicircular(&h).unwrap(), series);
    }

    #[test]
    fn every_circuit_has_exactly_one_shape(g in arb_graph(5, 9)) {
        let m = bicircular(&g).unwrap();
        for c in m.circuits() {
            let kind = classify_circuit(&g, &c).unwrap();
            let mut covered: Vec<u32> = match &kind {
                CircuitKind::Theta { paths, .. } => paths.concat(),
                CircuitKind::TightHandcuff { cycles, .. } => cycles.concat(),
                CircuitKind::LooseHandcuff { cycles, path, .. } => [cycles.concat(), path.clone()].concat(),
            };
            covered.sort_unstable();
            prop_assert_eq!(covered, c);
        }
    }
}

/// Element-wise commutation of graph and matroid minors, exhaustively over
/// connected multigraphs with at most 8 edges.
#[test]
fn minors_commute_on_small_graphs() {
    connected_multigraphs(8).into_par_iter().flatten().for_each(|g| {
        let m = bicircular(&g).unwrap();
        for e in g.edge_ids() {
            assert_eq!(bicircular(&g.delete_edge(e).unwrap()).unwrap(), m.delete(&[e]).unwrap(), "{}", g.to_mg());
            if !g.is_loop(e) {
                let contracted = bicircular(&g.contract_edge(e).unwrap()).unwrap();
                assert_eq!(contracted, m.contract(&[e]).unwrap(), "contract {e} in\n{}", g.to_mg());
            }
        }
    });
}

/// rank B(G) = |V| minus the number of acyclic components.
#[test]
fn rank_counts_vertices_minus_trees() {
    for g in connected_multigraphs(8).into_iter().flatten() {
        let trees = g.components().iter().filter(|(vs, es)| es.len() < vs.len()).count();
        assert_eq!(bicircular(&g).unwrap().rank(), g.vertex_count() - trees, "{}", g.to_mg());
    }
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn rank_formula_on_disconnected_graphs(g in arb_graph(7, 8)) {
        let trees = g.components().iter().filter(|(vs, es)| es.len() < vs.len()).count();
        prop_assert_eq!(bicircular(&g).unwrap().rank(), g.vertex_count() - trees);
    }
}
