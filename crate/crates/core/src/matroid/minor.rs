use std::collections::{BTreeMap, HashSet};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use super::iso::{isomorphism_with, profile};
use super::{bits, Element, Matroid};

/// `M / contract \ delete` is isomorphic to the target via `map`, which sends
/// each target element to a surviving element of `M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinorCertificate {
    pub delete: Vec<Element>,
    pub contract: Vec<Element>,
    pub map: BTreeMap<Element, Element>,
}

/// Subsets of `pool` (a position mask) of size `k`, in lexicographic order
/// of their sorted position lists.
fn combinations(pool: u32, k: usize) -> Vec<u32> {
    let items: Vec<usize> = bits(pool).collect();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > items.len() {
        return out;
    }
    loop {
        out.push(idx.iter().fold(0u32, |acc, &i| acc | 1 << items[i]));
        let Some(pos) = (0..k).rev().find(|&p| idx[p] != p + items.len() - k) else { break };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
    out
}

/// Compresses `x` (a mask avoiding `removed`) to positions of the survivors.
fn compress(x: u32, survivors: &[usize]) -> u32 {
    survivors.iter().enumerate().fold(0u32, |acc, (k, &i)| if x & 1 << i != 0 { acc | 1 << k } else { acc })
}

/// Every minor is `M / C \ D` with `C` independent and `D` coindependent, so
/// the search runs over independent `C` of size `r(M) - r(N)` and, for each,
/// over `D` of the complementary size. The bases of such a minor are the
/// bases of `M` containing `C` and avoiding `D`, with `C` removed. Structures
/// already refuted are remembered by their compressed basis list. The first
/// certificate in (contract, delete) lexicographic order is returned.
pub(crate) fn find_minor(m: &Matroid, target: &Matroid) -> Option<MinorCertificate> {
    let (n, k) = (m.len(), target.len());
    if k > n || target.rank() > m.rank() || target.corank() > m.corank() {
        return None;
    }
    let rc = m.rank() - target.rank();
    let rd = n - k - rc;
    let want = target.basis_count();
    let target_profile = profile(target);
    let refuted: Mutex<HashSet<Vec<u32>>> = Mutex::new(HashSet::new());

    let contracts: Vec<u32> =
        combinations(m.full_mask(), rc).into_iter().filter(|&c| m.is_independent_mask(c)).collect();
    contracts.par_iter().find_map_first(|&c| {
        let through: Vec<u32> = m.basis_masks().iter().copied().filter(|&b| b & c == c).collect();
        for d in combinations(m.full_mask() & !c, rd) {
            let count = through.iter().filter(|&&b| b & d == 0).count();
            if count != want {
                continue;
            }
            let survivors: Vec<usize> = (0..n).filter(|&i| (c | d) & 1 << i == 0).collect();
            let mut key: Vec<u32> =
                through.iter().filter(|&&b| b & d == 0).map(|&b| compress(b & !c, &survivors)).collect();
            key.sort_unstable();
            if refuted.lock().map(|s| s.contains(&key)).unwrap_or(false) {
                continue;
            }
            let ground: Vec<Element> = survivors.iter().map(|&i| m.ground()[i]).collect();
            let candidate = Matroid::from_basis_masks(ground, &key);
            let cp = profile(&candidate);
            if let Some(p) = isomorphism_with(target, &target_profile, &candidate, &cp) {
                let map = (0..k).map(|i| (target.ground()[i], candidate.ground()[p[i]])).collect();
                return Some(MinorCertificate { delete: m.labels(d), contract: m.labels(c), map });
            }
            if let Ok(mut s) = refuted.lock() {
                s.insert(key);
            }
        }
        None
    })
}
