//! Family generators against the membership test and the oracle.

mod common;

use bicircular_lpm::bicircular::bicircular;
use bicircular_lpm::catalog::{family_generate, family_member, FamilySpec, Split, Subdivisions};
use bicircular_lpm::latticepath::{is_lpm, MAX_ORACLE_GROUND};
use bicircular_lpm::matroid::Matroid;
use common::arb_family_spec;
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, max_global_rejects: 100_000, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(600))]

    #[test]
    fn generated_graphs_are_recognised_members(spec in arb_family_spec()) {
        let Ok(tagged) = family_generate(&spec) else { return Ok(()) };
        let g = tagged.graph;
        let w = family_member(&g).unwrap();
        let w = w.unwrap_or_else(|| panic!("{} rejected\n{}", serde_json::to_string(&spec).unwrap(), g.to_mg()));
        prop_assert!(w.replay().unwrap().is_isomorphic(&g), "{}", serde_json::to_string(&w.spec).unwrap());
    }

    #[test]
    fn generated_graphs_have_lattice_path_matroids(spec in arb_family_spec()) {
        let Ok(tagged) = family_generate(&spec) else { return Ok(()) };
        prop_assume!(tagged.graph.edge_count() <= MAX_ORACLE_GROUND);
        let m = bicircular(&tagged.graph).unwrap();
        let w = is_lpm(&m).unwrap();
        prop_assert!(w.is_some(), "{}\n{}", serde_json::to_string(&spec).unwrap(), tagged.graph.to_mg());
    }
}

fn f12_hosts(max_edges: usize) -> Vec<Matroid> {
    let mut hosts = Vec::new();
    for r in 0..=3 {
        for b in 0..=3 {
            for red in 1..=3 {
                for blue in 1..=3 {
                    let subdiv = Subdivisions {
                        red: (red > 1).then_some(Split::Len(red)),
                        blue: (blue > 1).then_some(Split::Len(blue)),
                        free: vec![],
                    };
                    let mut specs = vec![FamilySpec::F2 { r, b, subdiv: subdiv.clone() }];
                    for d in 0..=3 {
                        specs.push(FamilySpec::F1 { r, d, b, subdiv: subdiv.clone() });
                    }
                    for spec in specs {
                        if let Ok(t) = family_generate(&spec) {
                            if t.graph.edge_count() <= max_edges {
                                hosts.push(bicircular(&t.graph).unwrap());
                            }
                        }
                    }
                }
            }
        }
    }
    hosts
}

fn arb_f3_spec() -> impl Strategy<Value = FamilySpec> {
    arb_family_spec().prop_filter("F3 only", |s| matches!(s, FamilySpec::F3 { .. }))
}

proptest! {
    #![proptest_config(config(200))]

    /// Every sampled F3 matroid is a minor of a small F1 or F2 matroid.
    #[test]
    fn f3_matroids_sit_inside_f1_or_f2(spec in arb_f3_spec()) {
        static HOSTS: std::sync::OnceLock<Vec<Matroid>> = std::sync::OnceLock::new();
        let hosts = HOSTS.get_or_init(|| f12_hosts(12));
        let Ok(tagged) = family_generate(&spec) else { return Ok(()) };
        let m = bicircular(&tagged.graph).unwrap();
        prop_assume!(m.len() <= 9);
        let found = hosts.iter().filter(|h| h.len() >= m.len()).any(|h| h.has_minor(&m).is_some());
        prop_assert!(found, "{}\n{}", serde_json::to_string(&spec).unwrap(), tagged.graph.to_mg());
    }
}
