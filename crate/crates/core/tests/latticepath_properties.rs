//! Structural facts about lattice path matroids, checked over the full
//! enumeration at small size.

mod common;

use std::collections::BTreeMap;

use bicircular_lpm::latticepath::{
    enumerate_lpms, is_lpm, lattice_path_matroid, standard_presentation, transversal_matroid,
    validate_interval_presentation, BoundedPathPair, SetSystemPresentation,
};
use bicircular_lpm::matroid::{Element, Matroid};
use proptest::prelude::*;
use rayon::prelude::*;

fn sizes(max: usize) -> Vec<(usize, usize)> {
    (0..=max).flat_map(|n| (0..=n).map(move |r| (r, n - r))).collect()
}

#[test]
fn enumerated_matroids_have_the_path_rank_and_corank() {
    for (r, m) in sizes(8) {
        for (pair, lpm) in enumerate_lpms(r, m, false) {
            assert_eq!((lpm.rank(), lpm.corank()), (r, m), "{pair}");
            let sys = standard_presentation(&pair);
            assert!(validate_interval_presentation(&sys), "{pair}: {:?}", sys.sets);
            assert_eq!(transversal_matroid(&sys).unwrap(), lpm);
        }
    }
}

#[test]
fn duals_are_lattice_path_matroids() {
    sizes(8).into_par_iter().for_each(|(r, m)| {
        for (pair, lpm) in enumerate_lpms(r, m, true) {
            let dual = lpm.dual();
            let w = is_lpm(&dual).unwrap().unwrap_or_else(|| panic!("dual of {pair}"));
            assert!(w.replay().unwrap().is_isomorphic(&dual).is_some(), "witness for dual of {pair}");
        }
    });
}

#[test]
fn single_element_minors_are_lattice_path_matroids() {
    sizes(7).into_par_iter().for_each(|(r, m)| {
        for (pair, lpm) in enumerate_lpms(r, m, true) {
            for &e in lpm.ground() {
                for minor in [lpm.delete(&[e]).unwrap(), lpm.contract(&[e]).unwrap()] {
                    assert!(is_lpm(&minor).unwrap().is_some(), "{pair} minus {e}");
                }
            }
        }
    });
}

/// Initial and final segments of `1..=n` that the flat report marks as
/// fundamental are the only fundamental flats.
#[test]
fn fundamental_flats_are_segments() {
    for (r, m) in sizes(7) {
        for (pair, lpm) in enumerate_lpms(r, m, false) {
            if !lpm.is_connected() || lpm.is_empty() {
                continue;
            }
            let n = lpm.len() as Element;
            let report = lpm.fundamental_flats().unwrap();
            assert!(report.two_chains.is_some(), "{pair}");
            for f in report.fundamental() {
                let k = f.elements.len() as Element;
                let initial = f.elements == (1..=k).collect::<Vec<_>>();
                let last = f.elements == (n - k + 1..=n).collect::<Vec<_>>();
                assert!(initial || last, "{pair}: {:?}", f.elements);
            }
        }
    }
}

fn arb_connected_pair() -> impl Strategy<Value = BoundedPathPair> {
    (1..=3usize, 1..=3usize).prop_flat_map(|(r, m)| {
        let pairs: Vec<BoundedPathPair> =
            enumerate_lpms(r, m, false).into_iter().filter(|(_, lpm)| lpm.is_connected()).map(|(p, _)| p).collect();
        prop::sample::select(pairs)
    })
}

fn shifted(sys: &SetSystemPresentation, by: Element) -> Vec<Vec<Element>> {
    sys.sets.iter().map(|s| s.iter().map(|e| e + by).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    /// Gluing the last element of one connected LPM to the first element of
    /// the next gives the transversal matroid of the merged presentation.
    #[test]
    fn two_sum_at_the_ends_merges_the_boundary_sets(a in arb_connected_pair(), b in arb_connected_pair()) {
        let (ma, sa) = (lattice_path_matroid(&a).unwrap(), standard_presentation(&a));
        let e = ma.len() as Element;
        let sb = standard_presentation(&b);
        let mb = lattice_path_matroid(&b).unwrap();
        let map: BTreeMap<Element, Element> = mb.ground().iter().map(|&x| (x, x + e - 1)).collect();
        let mb = mb.relabel(&map).unwrap();
        let sum = ma.two_sum(&mb, e).unwrap();

        let right = shifted(&sb, e - 1);
        let mut sets: Vec<Vec<Element>> = sa.sets[..sa.sets.len() - 1].to_vec();
        let mut joint: Vec<Element> = sa.sets.last().unwrap().iter().chain(&right[0]).copied().filter(|&x| x != e).collect();
        joint.sort_unstable();
        joint.dedup();
        sets.push(joint);
        sets.extend(right[1..].iter().cloned());
        let order: Vec<Element> = (1..e).chain(e + 1..e + mb.len() as Element).collect();
        let composed = SetSystemPresentation { order, sets };
        prop_assert!(validate_interval_presentation(&composed));
        prop_assert_eq!(transversal_matroid(&composed).unwrap(), sum.clone());
        prop_assert!(is_lpm(&sum).unwrap().is_some());
    }
}

#[test]
fn uniform_matroids_are_the_extreme_pairs() {
    for (r, m) in sizes(6) {
        let pair: BoundedPathPair =
            format!("P={}{} Q={}{}", "E".repeat(m), "N".repeat(r), "N".repeat(r), "E".repeat(m)).parse().unwrap();
        assert_eq!(lattice_path_matroid(&pair).unwrap(), Matroid::uniform(r, r + m));
    }
}
