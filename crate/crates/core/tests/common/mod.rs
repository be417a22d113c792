//! Strategies and brute-force helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use bicircular_lpm::catalog::{ChainSpec, EndBlock, EndEdge, F0Template, F3Shape, FamilySpec, Split, Subdivisions};
use bicircular_lpm::matroid::{Element, Matroid};
use bicircular_lpm::multigraph::Multigraph;
use proptest::prelude::*;

/// Random multigraph on vertices `1..=max_v` with up to `max_e` edges,
/// loops and parallel edges included.
pub fn arb_graph(max_v: u32, max_e: usize) -> impl Strategy<Value = Multigraph> {
    (1..=max_v).prop_flat_map(move |n| {
        prop::collection::vec((1..=n, 1..=n), 0..=max_e).prop_map(move |pairs| {
            let mut g = Multigraph::from_edges(&pairs);
            for v in 1..=n {
                g.add_vertex(v);
            }
            g
        })
    })
}

/// Like `arb_graph`, but connected with at least one edge.
pub fn arb_connected_graph(max_v: u32, max_e: usize) -> impl Strategy<Value = Multigraph> {
    arb_graph(max_v, max_e).prop_filter("connected", |g| g.edge_count() > 0 && g.is_connected())
}

/// All subsets of `ground` as sorted vectors.
pub fn subsets(ground: &[Element]) -> impl Iterator<Item = Vec<Element>> + '_ {
    (0u32..1 << ground.len()).map(move |mask| {
        ground.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect()
    })
}

/// Circuits straight from the independence oracle: dependent sets all of
/// whose one-element deletions are independent.
pub fn brute_circuits(m: &Matroid) -> BTreeSet<Vec<Element>> {
    subsets(m.ground())
        .filter(|s| {
            !m.is_independent(s).unwrap()
                && (0..s.len()).all(|i| {
                    let mut t = s.clone();
                    t.remove(i);
                    m.is_independent(&t).unwrap()
                })
        })
        .collect()
}

fn split(len: usize) -> Option<Split> {
    (len > 1).then_some(Split::Len(len))
}

fn subdiv(red: usize, blue: usize, free: Vec<usize>) -> Subdivisions {
    Subdivisions { red: split(red), blue: split(blue), free: free.into_iter().filter(|&l| l > 1).map(Split::Len).collect() }
}

fn arb_subdiv(free: bool) -> impl Strategy<Value = Subdivisions> {
    let free_lens = if free { prop::collection::vec(1..=3usize, 0..=2).boxed() } else { Just(vec![]).boxed() };
    (1..=3usize, 1..=3usize, free_lens).prop_map(|(r, b, f)| subdiv(r, b, f))
}

fn arb_end() -> impl Strategy<Value = EndBlock> {
    (0..=3usize, 1..=3usize, prop::bool::ANY, 1..=3usize, 0..=1usize).prop_map(|(xq, pq, xp, len, q)| {
        let subdivided = if xp { EndEdge::Xp } else { EndEdge::Pq };
        let pq = if xp { pq.min(2) } else { pq };
        let q_loops = if !xp && pq == 1 { q } else { 0 };
        EndBlock { xq, pq, subdivided, len, q_loops }
    })
}

/// Family specs with parameters and subdivision lengths at most 3. Some
/// combinations are illegal for their template; callers filter on
/// `family_generate` succeeding.
pub fn arb_family_spec() -> impl Strategy<Value = FamilySpec> {
    let f0 = (
        prop::sample::select(vec![
            F0Template::K23,
            F0Template::K23Prime,
            F0Template::K23DoublePrime,
            F0Template::K23Star,
            F0Template::K4,
        ]),
        arb_subdiv(true),
    )
        .prop_map(|(template, subdiv)| FamilySpec::F0 { template, subdiv });
    let f1 = (0..=3usize, 0..=3usize, 0..=3usize, arb_subdiv(false))
        .prop_map(|(r, d, b, subdiv)| FamilySpec::F1 { r, d, b, subdiv });
    let f2 = (0..=3usize, 0..=3usize, arb_subdiv(false)).prop_map(|(r, b, subdiv)| FamilySpec::F2 { r, b, subdiv });
    let shape = prop_oneof![
        (1..=3usize, 0..=3usize, 0..=3usize).prop_map(|(r, j, l)| F3Shape::K3 { r, j, l }),
        (1..=3usize, 0..=1usize, 0..=1usize).prop_map(|(chords, a, b)| F3Shape::ChordedCycle { chords, loops: [a, b] }),
        (0..=3usize, 0..=1usize).prop_map(|(loops, neighbour_loop)| F3Shape::LoopedCycle { loops, neighbour_loop }),
        (1..=3usize, 0..=3usize, 0..=3usize).prop_map(|(edges, a, b)| F3Shape::TwoVertex { edges, loops: [a, b] }),
        (1..=3usize).prop_map(|loops| F3Shape::Bouquet { loops }),
    ];
    let f3 = (shape, arb_subdiv(true)).prop_map(|(shape, subdiv)| FamilySpec::F3 { shape, subdiv });
    let f4 = (
        prop::option::of(arb_end()),
        prop::collection::vec(1..=3usize, 0..=3),
        prop::option::of(arb_end()),
        prop::collection::vec(0..=2usize, 4),
    )
        .prop_map(|(start, middle, end, loops)| {
            let loops = loops[..=middle.len()].to_vec();
            FamilySpec::F4(ChainSpec { start, middle, end, loops })
        });
    prop_oneof![f0, f1, f2, f3, f4]
}
