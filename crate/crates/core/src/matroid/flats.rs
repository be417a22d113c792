use serde::Serialize;

use super::{Element, Matroid, MatroidError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatInfo {
    pub elements: Vec<Element>,
    pub rank: usize,
    pub connected: bool,
    pub fundamental: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatReport {
    /// All flats, ordered by rank and then by element list.
    pub flats: Vec<FlatInfo>,
    /// Indices into `flats` of two disjoint chains covering the fundamental
    /// flats, when such a split exists.
    pub two_chains: Option<(Vec<usize>, Vec<usize>)>,
}

impl FlatReport {
    pub fn fundamental(&self) -> impl Iterator<Item = &FlatInfo> {
        self.flats.iter().filter(|f| f.fundamental)
    }
}

fn restriction_connected(circuits: &[u32], x: u32) -> bool {
    if x.count_ones() <= 1 {
        return true;
    }
    let first = x.trailing_zeros();
    let mut reached = 1u32 << first;
    loop {
        let before = reached;
        for &c in circuits {
            if c & x == c && c & reached != 0 {
                reached |= c;
            }
        }
        if reached == before {
            break;
        }
    }
    reached == x
}

pub(super) fn fundamental_flats(m: &Matroid) -> Result<FlatReport, MatroidError> {
    if !m.is_connected() {
        return Err(MatroidError::Disconnected);
    }
    let circuits = m.circuit_masks();
    let r = m.rank();
    let spanning: Vec<u32> = circuits.iter().copied().filter(|c| c.count_ones() as usize == r + 1).collect();
    let mut masks: Vec<u32> = (0..=m.full_mask()).filter(|&x| m.closure_mask(x) == x).collect();
    masks.sort_by_key(|&x| (m.rank_mask(x), m.labels(x)));

    let mut flats = Vec::with_capacity(masks.len());
    for &x in &masks {
        let rank = m.rank_mask(x);
        let connected = restriction_connected(&circuits, x);
        let fundamental = connected
            && x.count_ones() > 1
            && rank < r
            && spanning.iter().any(|&c| (c & x).count_ones() as usize == rank);
        flats.push(FlatInfo { elements: m.labels(x), rank, connected, fundamental });
    }

    let fundamental: Vec<usize> = (0..flats.len()).filter(|&i| flats[i].fundamental).collect();
    let two_chains = split_into_two_chains(&fundamental, |i, j| {
        let (a, b) = (masks[i], masks[j]);
        a & b == a || a & b == b
    });
    Ok(FlatReport { flats, two_chains })
}

/// Colours the incomparability graph with two colours; a proper 2-colouring
/// exists exactly when the items split into two chains.
fn split_into_two_chains<F: Fn(usize, usize) -> bool>(
    items: &[usize],
    comparable: F,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = items.len();
    let mut side = vec![usize::MAX; n];
    for s in 0..n {
        if side[s] != usize::MAX {
            continue;
        }
        side[s] = 0;
        let mut stack = vec![s];
        while let Some(a) = stack.pop() {
            for b in 0..n {
                if b == a || comparable(items[a], items[b]) {
                    continue;
                }
                if side[b] == usize::MAX {
                    side[b] = 1 - side[a];
                    stack.push(b);
                } else if side[b] == side[a] {
                    return None;
                }
            }
        }
    }
    let pick = |k: usize| (0..n).filter(|&i| side[i] == k).map(|i| items[i]).collect();
    Some((pick(0), pick(1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_has_no_fundamental_flats() {
        let rep = Matroid::uniform(2, 4).fundamental_flats().unwrap();
        assert_eq!(rep.fundamental().count(), 0);
        assert!(rep.two_chains.is_some());
        // flats of U_{2,4}: empty, four points, the whole set
        assert_eq!(rep.flats.len(), 6);
    }

    #[test]
    fn disconnected_is_rejected() {
        let m = Matroid::from_circuits(&[1, 2], &[]).unwrap();
        assert_eq!(m.fundamental_flats(), Err(MatroidError::Disconnected));
    }

    #[test]
    fn three_incomparable_lines_fail_the_chain_test() {
        // rank 3: three disjoint 3-point lines, otherwise free
        let ground: Vec<u32> = (1..=9).collect();
        let m = Matroid::from_independence(&ground, |x| {
            x.len() <= 3 && !([[1, 2, 3], [4, 5, 6], [7, 8, 9]].iter().any(|l| l.iter().all(|e| x.contains(e))))
        })
        .unwrap();
        let rep = m.fundamental_flats().unwrap();
        assert_eq!(rep.fundamental().count(), 3);
        assert!(rep.two_chains.is_none());
    }
}
