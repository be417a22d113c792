use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use super::{lattice_path_matroid_fast, BoundedPathPair, LatticePath, LpmError, Step};
use crate::matroid::iso::{isomorphism_with, profile, Profile};
use crate::matroid::{Element, Matroid};

/// Largest ground set the exhaustive oracle accepts.
pub const MAX_ORACLE_GROUND: usize = 10;

/// `M ≅ M[pair]`, with step `j` (1-based) carried to `order[j - 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LpmWitness {
    pub pair: BoundedPathPair,
    pub order: Vec<Element>,
}

impl LpmWitness {
    /// Rebuilds the matroid the witness describes, on the original labels.
    pub fn replay(&self) -> Result<Matroid, LpmError> {
        let m = super::lattice_path_matroid(&self.pair)?;
        let map: BTreeMap<Element, Element> =
            self.order.iter().enumerate().map(|(j, &e)| (j as Element + 1, e)).collect();
        Ok(m.relabel(&map)?)
    }
}

/// All paths with `m` East and `r` North steps, in lexicographic order
/// (East before North).
fn all_paths(m: usize, r: usize) -> Vec<LatticePath> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m + r);
    fn go(cur: &mut Vec<Step>, e: usize, n: usize, out: &mut Vec<LatticePath>) {
        if e == 0 && n == 0 {
            out.push(LatticePath::new(cur.clone()));
            return;
        }
        if e > 0 {
            cur.push(Step::E);
            go(cur, e - 1, n, out);
            cur.pop();
        }
        if n > 0 {
            cur.push(Step::N);
            go(cur, e, n - 1, out);
            cur.pop();
        }
    }
    go(&mut cur, m, r, &mut out);
    out
}

/// Every bounded pair ending at `(m, r)`, ordered by lower then upper path.
pub fn enumerate_path_pairs(r: usize, m: usize) -> Vec<BoundedPathPair> {
    let paths = all_paths(m, r);
    let mut out = Vec::new();
    for p in &paths {
        for q in &paths {
            if let Ok(pp) = BoundedPathPair::new(p.clone(), q.clone()) {
                out.push(pp);
            }
        }
    }
    out
}

/// `M[P,Q]` for every pair ending at `(m, r)`. With `dedupe`, only the first
/// pair of each isomorphism class is kept.
pub fn enumerate_lpms(r: usize, m: usize, dedupe: bool) -> Vec<(BoundedPathPair, Matroid)> {
    let built: Vec<(BoundedPathPair, Matroid)> = enumerate_path_pairs(r, m)
        .into_par_iter()
        .map(|pp| {
            let mat = lattice_path_matroid_fast(&pp);
            (pp, mat)
        })
        .collect();
    if !dedupe {
        return built;
    }
    dedupe_classes(built).into_iter().map(|e| (e.pair, e.matroid)).collect()
}

struct Entry {
    pair: BoundedPathPair,
    matroid: Matroid,
    profile: Profile,
}

fn dedupe_classes(items: Vec<(BoundedPathPair, Matroid)>) -> Vec<Entry> {
    let profiled: Vec<Entry> = items
        .into_par_iter()
        .map(|(pair, matroid)| {
            let profile = profile(&matroid);
            Entry { pair, matroid, profile }
        })
        .collect();
    let mut kept: Vec<Entry> = Vec::new();
    let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
    for e in profiled {
        let bucket = buckets.entry(e.profile.summary).or_default();
        let dup = bucket.iter().any(|&k| {
            let other = &kept[k];
            isomorphism_with(&other.matroid, &other.profile, &e.matroid, &e.profile).is_some()
        });
        if !dup {
            bucket.push(kept.len());
            kept.push(e);
        }
    }
    kept
}

type Catalog = Mutex<HashMap<(usize, usize), Arc<Vec<Entry>>>>;

fn catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Connected lattice path matroids with corank `m` and rank `r`, one per
/// isomorphism class, each represented by its least path pair. A region of
/// at least two steps gives a connected matroid exactly when the bounding
/// paths meet only at their ends.
fn connected_classes(m: usize, r: usize) -> Arc<Vec<Entry>> {
    if let Some(found) = catalog().lock().ok().and_then(|c| c.get(&(m, r)).cloned()) {
        return found;
    }
    let pairs: Vec<BoundedPathPair> = enumerate_path_pairs(r, m)
        .into_iter()
        .filter(|pp| m + r <= 1 || pp.meets_only_at_ends())
        .collect();
    let built: Vec<(BoundedPathPair, Matroid)> = pairs
        .into_par_iter()
        .map(|pp| {
            let mat = lattice_path_matroid_fast(&pp);
            (pp, mat)
        })
        .collect();
    let classes = Arc::new(dedupe_classes(built));
    if let Ok(mut c) = catalog().lock() {
        c.entry((m, r)).or_insert_with(|| classes.clone());
    }
    classes
}

/// Exhaustive test of whether `matroid` is a lattice path matroid. Each
/// connected component is matched against the catalogue of connected
/// lattice path matroids of its rank and corank; the component pairs are
/// then concatenated, which realises the direct sum.
pub fn is_lpm(matroid: &Matroid) -> Result<Option<LpmWitness>, LpmError> {
    if matroid.len() > MAX_ORACLE_GROUND {
        return Err(LpmError::TooLarge(matroid.len()));
    }
    let mut pair = BoundedPathPair::new(LatticePath::new(Vec::new()), LatticePath::new(Vec::new()))?;
    let mut order = Vec::new();
    for comp in matroid.component_masks() {
        let part = matroid.minor_masks(matroid.full_mask() & !comp, 0);
        let (r, m) = (part.rank(), part.corank());
        let classes = connected_classes(m, r);
        let pp = profile(&part);
        let found = classes.iter().find_map(|e| {
            if e.profile.summary != pp.summary {
                return None;
            }
            isomorphism_with(&e.matroid, &e.profile, &part, &pp).map(|p| (e, p))
        });
        let Some((entry, map)) = found else { return Ok(None) };
        pair = pair.concat(&entry.pair);
        order.extend(map.iter().map(|&j| part.ground()[j]));
    }
    Ok(Some(LpmWitness { pair, order }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bicircular::bicircular;
    use crate::multigraph::Multigraph;

    #[test]
    fn unit_square_pairs() {
        let pairs = enumerate_path_pairs(1, 1);
        assert_eq!(pairs.len(), 3);
        assert_eq!(enumerate_lpms(1, 1, true).len(), 2);
        assert_eq!(enumerate_lpms(0, 3, true).len(), 1);
    }

    #[test]
    fn uniform_is_lpm_and_witness_replays() {
        let u = Matroid::uniform(3, 6);
        let w = is_lpm(&u).unwrap().unwrap();
        assert_eq!(w.replay().unwrap(), u);
    }

    #[test]
    fn triple_triangle_is_not_lpm() {
        let g = Multigraph::from_edges(&[
            (1, 2), (1, 2), (1, 2),
            (2, 3), (2, 3), (2, 3),
            (1, 3), (1, 3), (1, 3),
        ]);
        assert_eq!(is_lpm(&bicircular(&g).unwrap()).unwrap(), None);
    }

    #[test]
    fn disconnected_witness_replays() {
        let m = Matroid::from_circuits(&[1, 2, 3, 4, 5, 6], &[vec![1, 4], vec![2, 3, 6]]).unwrap();
        let w = is_lpm(&m).unwrap().unwrap();
        assert_eq!(w.replay().unwrap(), m);
    }

    #[test]
    fn too_large_is_an_error() {
        assert_eq!(is_lpm(&Matroid::uniform(2, 11)), Err(LpmError::TooLarge(11)));
    }
}
