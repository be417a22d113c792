//! Lattice path matroids.
//!
//! A pair of lattice paths `P` (lower) and `Q` (upper) from `(0,0)` to
//! `(m,r)` bounds a region; the matroid `M[P,Q]` lives on the step indices
//! `1..=m+r`, and its bases are the sets of North-step positions of the paths
//! inside the region.

mod oracle;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::matroid::{Element, Matroid, MatroidError};

pub use oracle::{enumerate_lpms, enumerate_path_pairs, is_lpm, LpmWitness, MAX_ORACLE_GROUND};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpmError {
    #[error("invalid step `{0}`; expected E or N")]
    BadStep(char),
    #[error("paths end at different points")]
    EndpointMismatch,
    #[error("lower path goes above the upper path after step {0}")]
    Crossing(usize),
    #[error("malformed path pair `{0}`; expected `P=... Q=...`")]
    BadPair(String),
    #[error("set {0} contains an element outside the ground order")]
    ForeignElement(Element),
    #[error("ground set of {0} elements is too large for the exhaustive oracle")]
    TooLarge(usize),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Step {
    E,
    N,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePath {
    steps: Vec<Step>,
}

impl LatticePath {
    pub fn new(steps: Vec<Step>) -> Self {
        LatticePath { steps }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn east_count(&self) -> usize {
        self.steps.iter().filter(|&&s| s == Step::E).count()
    }

    pub fn north_count(&self) -> usize {
        self.steps.iter().filter(|&&s| s == Step::N).count()
    }

    /// 1-based positions of the North steps, in order.
    pub fn north_positions(&self) -> Vec<usize> {
        self.steps.iter().enumerate().filter(|(_, &s)| s == Step::N).map(|(i, _)| i + 1).collect()
    }

    pub fn concat(&self, other: &LatticePath) -> LatticePath {
        LatticePath { steps: self.steps.iter().chain(&other.steps).copied().collect() }
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            f.write_str(if *s == Step::E { "E" } else { "N" })?;
        }
        Ok(())
    }
}

impl FromStr for LatticePath {
    type Err = LpmError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let steps = s
            .trim()
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'E' => Ok(Step::E),
                'N' => Ok(Step::N),
                other => Err(LpmError::BadStep(other)),
            })
            .collect::<Result<_, _>>()?;
        Ok(LatticePath { steps })
    }
}

impl Serialize for LatticePath {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Lower path `P` and upper path `Q` with common endpoint `(m, r)`; `P`
/// never rises above `Q`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BoundedPathPair {
    lower: LatticePath,
    upper: LatticePath,
}

impl BoundedPathPair {
    pub fn new(lower: LatticePath, upper: LatticePath) -> Result<Self, LpmError> {
        if lower.east_count() != upper.east_count() || lower.north_count() != upper.north_count() {
            return Err(LpmError::EndpointMismatch);
        }
        let (mut p, mut q) = (0usize, 0usize);
        for (i, (a, b)) in lower.steps.iter().zip(&upper.steps).enumerate() {
            p += (*a == Step::N) as usize;
            q += (*b == Step::N) as usize;
            if p > q {
                return Err(LpmError::Crossing(i + 1));
            }
        }
        Ok(BoundedPathPair { lower, upper })
    }

    pub fn lower(&self) -> &LatticePath {
        &self.lower
    }

    pub fn upper(&self) -> &LatticePath {
        &self.upper
    }

    /// Number of East steps (the corank).
    pub fn m(&self) -> usize {
        self.lower.east_count()
    }

    /// Number of North steps (the rank).
    pub fn r(&self) -> usize {
        self.lower.north_count()
    }

    /// The two paths touch only at their endpoints.
    pub fn meets_only_at_ends(&self) -> bool {
        let n = self.lower.len();
        let (mut p, mut q) = (0usize, 0usize);
        for (i, (a, b)) in self.lower.steps.iter().zip(&self.upper.steps).enumerate() {
            p += (*a == Step::N) as usize;
            q += (*b == Step::N) as usize;
            if i + 1 < n && p == q {
                return false;
            }
        }
        true
    }

    /// Places `other` after `self`, pinching the region at the joint.
    pub fn concat(&self, other: &BoundedPathPair) -> BoundedPathPair {
        BoundedPathPair { lower: self.lower.concat(&other.lower), upper: self.upper.concat(&other.upper) }
    }

    /// Every lattice path inside the region, in lexicographic order.
    pub fn paths_between(&self) -> Vec<LatticePath> {
        let (m, r) = (self.m(), self.r());
        let lo = self.lower.north_prefix();
        let hi = self.upper.north_prefix();
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(m + r);
        fn go(
            cur: &mut Vec<Step>,
            norths: usize,
            lo: &[usize],
            hi: &[usize],
            m: usize,
            r: usize,
            out: &mut Vec<LatticePath>,
        ) {
            let i = cur.len();
            if i == m + r {
                out.push(LatticePath::new(cur.clone()));
                return;
            }
            for (s, nn) in [(Step::E, norths), (Step::N, norths + 1)] {
                let easts = i + 1 - nn;
                if nn <= r && easts <= m && nn >= lo[i + 1] && nn <= hi[i + 1] {
                    cur.push(s);
                    go(cur, nn, lo, hi, m, r, out);
                    cur.pop();
                }
            }
        }
        go(&mut cur, 0, &lo, &hi, m, r, &mut out);
        out
    }
}

impl LatticePath {
    /// Number of North steps among the first `i` steps, for `i = 0..=len`.
    fn north_prefix(&self) -> Vec<usize> {
        let mut out = vec![0];
        for s in &self.steps {
            out.push(out.last().copied().unwrap_or(0) + (*s == Step::N) as usize);
        }
        out
    }
}

impl fmt::Display for BoundedPathPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P={} Q={}", self.lower, self.upper)
    }
}

impl FromStr for BoundedPathPair {
    type Err = LpmError;

    /// Accepts `P=EENN Q=NENE` (either order, whitespace separated).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LpmError::BadPair(s.to_string());
        let (mut p, mut q) = (None, None);
        for word in s.split_whitespace() {
            match word.split_once('=') {
                Some(("P", v)) => p = Some(v.parse::<LatticePath>()?),
                Some(("Q", v)) => q = Some(v.parse::<LatticePath>()?),
                _ => return Err(bad()),
            }
        }
        BoundedPathPair::new(p.ok_or_else(bad)?, q.ok_or_else(bad)?)
    }
}

/// An ordered family of subsets over a linearly ordered ground set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetSystemPresentation {
    pub order: Vec<Element>,
    pub sets: Vec<Vec<Element>>,
}

/// The standard presentation of `M[P,Q]` on `1..=m+r`: the i-th set is the
/// interval of positions the i-th North step can occupy, from its position
/// in `Q` to its position in `P`.
pub fn standard_presentation(pp: &BoundedPathPair) -> SetSystemPresentation {
    let order: Vec<Element> = (1..=(pp.m() + pp.r()) as Element).collect();
    let sets = pp
        .upper
        .north_positions()
        .into_iter()
        .zip(pp.lower.north_positions())
        .map(|(a, b)| (a as Element..=b as Element).collect())
        .collect();
    SetSystemPresentation { order, sets }
}

/// Kuhn's augmenting-path matching of the elements of `x` (positions into
/// `order`) into distinct sets among `set_count`.
fn is_partial_transversal(members: &[Vec<usize>], set_count: usize, x: u32) -> bool {
    let k = set_count;
    let mut owner: Vec<usize> = vec![usize::MAX; k];
    fn augment(e: usize, members: &[Vec<usize>], owner: &mut [usize], seen: &mut [bool]) -> bool {
        for &s in &members[e] {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            if owner[s] == usize::MAX || augment(owner[s], members, owner, seen) {
                owner[s] = e;
                return true;
            }
        }
        false
    }
    crate::matroid::bits(x).all(|e| {
        let mut seen = vec![false; k];
        augment(e, members, &mut owner, &mut seen)
    })
}

fn membership(sys: &SetSystemPresentation) -> Result<Vec<Vec<usize>>, LpmError> {
    let mut members = vec![Vec::new(); sys.order.len()];
    for (i, set) in sys.sets.iter().enumerate() {
        for &e in set {
            let pos = sys.order.iter().position(|&o| o == e).ok_or(LpmError::ForeignElement(e))?;
            members[pos].push(i);
        }
    }
    Ok(members)
}

/// The transversal matroid of the set system, built through the
/// axiom-checking constructor.
pub fn transversal_matroid(sys: &SetSystemPresentation) -> Result<Matroid, LpmError> {
    let members = membership(sys)?;
    let positions: Vec<Element> = sys.order.clone();
    let index = |e: &Element| positions.iter().position(|o| o == e).unwrap_or(0);
    Ok(Matroid::from_independence(&sys.order, |set| {
        let x = set.iter().fold(0u32, |acc, e| acc | 1 << index(e));
        is_partial_transversal(&members, sys.sets.len(), x)
    })?)
}

/// `M[P,Q]` on `1..=m+r`, without re-checking the matroid axioms.
pub(crate) fn lattice_path_matroid_fast(pp: &BoundedPathPair) -> Matroid {
    let sys = standard_presentation(pp);
    let members = membership(&sys).unwrap_or_default();
    let n = sys.order.len();
    let mut indep = vec![false; 1 << n];
    for x in 0..(1u32 << n) {
        indep[x as usize] = is_partial_transversal(&members, sys.sets.len(), x);
    }
    let bases: Vec<u32> = (0..1u32 << n)
        .filter(|&x| x.count_ones() as usize == pp.r() && indep[x as usize])
        .collect();
    Matroid::from_basis_masks(sys.order, &bases)
}

/// `M[P,Q]` as the transversal matroid of its standard presentation.
pub fn lattice_path_matroid(pp: &BoundedPathPair) -> Result<Matroid, LpmError> {
    transversal_matroid(&standard_presentation(pp))
}

/// Every set is a nonempty interval of the order and no set contains
/// another.
pub fn validate_interval_presentation(sys: &SetSystemPresentation) -> bool {
    let mut spans = Vec::with_capacity(sys.sets.len());
    for set in &sys.sets {
        let mut pos: Vec<usize> = Vec::with_capacity(set.len());
        for e in set {
            match sys.order.iter().position(|o| o == e) {
                Some(p) => pos.push(p),
                None => return false,
            }
        }
        pos.sort_unstable();
        pos.dedup();
        let (Some(&lo), Some(&hi)) = (pos.first(), pos.last()) else { return false };
        if hi - lo + 1 != pos.len() {
            return false;
        }
        spans.push((lo, hi));
    }
    spans.iter().enumerate().all(|(i, a)| {
        spans[i + 1..].iter().all(|b| {
            let a_in_b = b.0 <= a.0 && a.1 <= b.1;
            let b_in_a = a.0 <= b.0 && b.1 <= a.1;
            !a_in_b && !b_in_a
        })
    })
}
