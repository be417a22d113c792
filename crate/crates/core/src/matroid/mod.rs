//! Exact matroid engine for small ground sets.
//!
//! A [`Matroid`] stores its sorted basis list together with a full rank
//! table over all subsets of the ground set, so every query is a table
//! lookup. Subsets are bitmasks over ground positions; ground labels are kept
//! in ascending order.

mod flats;
pub(crate) mod iso;
mod minor;
mod ops;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

pub use flats::{FlatInfo, FlatReport};
pub use minor::MinorCertificate;
pub use ops::Extension;

pub type Element = u32;

/// Largest supported ground set.
pub const MAX_GROUND: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("ground set of {0} elements exceeds the limit of {MAX_GROUND}")]
    TooLarge(usize),
    #[error("duplicate ground label {0}")]
    DuplicateLabel(Element),
    #[error("element {0} is not in the ground set")]
    ForeignElement(Element),
    #[error("independence is not hereditary: {independent:?} is independent but {subset:?} is not")]
    NotHereditary { independent: Vec<Element>, subset: Vec<Element> },
    #[error("augmentation fails: {smaller:?} cannot be extended from {larger:?}")]
    Augmentation { smaller: Vec<Element>, larger: Vec<Element> },
    #[error("no bases given")]
    NoBases,
    #[error("delete and contract sets share {0:?}")]
    Overlap(Vec<Element>),
    #[error("matroid is not connected")]
    Disconnected,
    #[error("element {0} is a loop or coloop and cannot be a 2-sum basepoint")]
    DegenerateBasepoint(Element),
    #[error("labels {0:?} occur in both summands")]
    LabelCollision(Vec<Element>),
    #[error("{0:?} is not a circuit of mutual clones")]
    NotCloneCircuit(Vec<Element>),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Clone)]
pub struct Matroid {
    ground: Vec<Element>,
    bases: Vec<u32>,
    rank: Arc<Vec<u8>>,
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground && self.bases == other.bases
    }
}

impl Eq for Matroid {}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matroid")
            .field("ground", &self.ground)
            .field("rank", &self.rank())
            .field("bases", &self.bases().collect::<Vec<_>>())
            .finish()
    }
}

pub(crate) fn bits(mask: u32) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

fn full(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

fn sorted_ground(labels: &[Element]) -> Result<Vec<Element>, MatroidError> {
    if labels.len() > MAX_GROUND {
        return Err(MatroidError::TooLarge(labels.len()));
    }
    let mut g = labels.to_vec();
    g.sort_unstable();
    if let Some(w) = g.windows(2).find(|w| w[0] == w[1]) {
        return Err(MatroidError::DuplicateLabel(w[0]));
    }
    Ok(g)
}

/// Rank table of the hereditary system with independence table `indep`:
/// the size of a largest independent subset.
fn rank_from_independence(n: usize, indep: &[bool]) -> Vec<u8> {
    let mut r = vec![0u8; 1 << n];
    for x in 1..(1usize << n) {
        let size = (x as u32).count_ones() as u8;
        if indep[x] {
            r[x] = size;
            continue;
        }
        let mut best = 0;
        for i in bits(x as u32) {
            best = best.max(r[x & !(1 << i)]);
            if best + 1 == size {
                break;
            }
        }
        r[x] = best;
    }
    r
}

impl Matroid {
    /// Builds a matroid from an independence oracle on label sets, checking
    /// the hereditary and augmentation axioms exhaustively.
    pub fn from_independence<F>(ground: &[Element], oracle: F) -> Result<Matroid, MatroidError>
    where
        F: Fn(&[Element]) -> bool,
    {
        let g = sorted_ground(ground)?;
        let indep: Vec<bool> = (0..1u32 << g.len())
            .map(|x| oracle(&bits(x).map(|i| g[i]).collect::<Vec<_>>()))
            .collect();
        Self::checked(g, indep)
    }

    /// Builds a matroid from a list of bases, checking the axioms.
    pub fn from_bases(ground: &[Element], bases: &[Vec<Element>]) -> Result<Matroid, MatroidError> {
        let g = sorted_ground(ground)?;
        if bases.is_empty() {
            return Err(MatroidError::NoBases);
        }
        let n = g.len();
        let mut indep = vec![false; 1 << n];
        for b in bases {
            indep[labels_to_mask(&g, b)? as usize] = true;
        }
        for x in (0..1usize << n).rev() {
            if !indep[x] && (0..n).any(|i| x & (1 << i) == 0 && indep[x | (1 << i)]) {
                indep[x] = true;
            }
        }
        Self::checked(g, indep)
    }

    /// Builds a matroid whose dependent sets are exactly the supersets of the
    /// given sets, checking the axioms.
    pub fn from_circuits(ground: &[Element], circuits: &[Vec<Element>]) -> Result<Matroid, MatroidError> {
        let g = sorted_ground(ground)?;
        let masks: Vec<u32> = circuits.iter().map(|c| labels_to_mask(&g, c)).collect::<Result<_, _>>()?;
        let indep: Vec<bool> = (0..1u32 << g.len()).map(|x| masks.iter().all(|&c| x & c != c)).collect();
        Self::checked(g, indep)
    }

    /// The uniform matroid U_{r,n} on labels `1..=n`.
    pub fn uniform(r: usize, n: usize) -> Matroid {
        assert!(r <= n && n <= MAX_GROUND);
        let ground: Vec<Element> = (1..=n as Element).collect();
        Self::from_rank_fn(ground, |x| (x.count_ones() as usize).min(r) as u8)
    }

    fn checked(ground: Vec<Element>, indep: Vec<bool>) -> Result<Matroid, MatroidError> {
        let n = ground.len();
        let to_labels = |x: u32| -> Vec<Element> { bits(x).map(|i| ground[i]).collect() };
        if !indep[0] {
            return Err(MatroidError::NotHereditary { independent: Vec::new(), subset: Vec::new() });
        }
        for x in 1..(1u32 << n) {
            if !indep[x as usize] {
                continue;
            }
            if let Some(i) = bits(x).find(|&i| !indep[(x & !(1 << i)) as usize]) {
                return Err(MatroidError::NotHereditary {
                    independent: to_labels(x),
                    subset: to_labels(x & !(1 << i)),
                });
            }
        }
        let rank = rank_from_independence(n, &indep);
        // I cannot be augmented from J exactly when J lies inside I together
        // with the elements that are dependent on I.
        for x in 0..(1u32 << n) {
            if !indep[x as usize] {
                continue;
            }
            let mut span = x;
            for i in 0..n {
                if x & (1 << i) == 0 && !indep[(x | (1 << i)) as usize] {
                    span |= 1 << i;
                }
            }
            if rank[span as usize] as u32 != x.count_ones() {
                let mut j = span;
                while !indep[j as usize] {
                    let i = bits(j).find(|&i| rank[(j & !(1 << i)) as usize] == rank[j as usize]).unwrap_or(0);
                    j &= !(1 << i);
                }
                return Err(MatroidError::Augmentation { smaller: to_labels(x), larger: to_labels(j) });
            }
        }
        Ok(Self::from_table(ground, rank))
    }

    /// Trusted constructor from a rank function on position masks.
    pub(crate) fn from_rank_fn<F: Fn(u32) -> u8>(ground: Vec<Element>, f: F) -> Matroid {
        let table: Vec<u8> = (0..1u32 << ground.len()).map(f).collect();
        Self::from_table(ground, table)
    }

    /// Trusted constructor from a list of basis masks over `ground` positions.
    pub(crate) fn from_basis_masks(ground: Vec<Element>, bases: &[u32]) -> Matroid {
        let n = ground.len();
        let mut indep = vec![false; 1 << n];
        for &b in bases {
            indep[b as usize] = true;
        }
        for x in (0..1usize << n).rev() {
            if !indep[x] && (0..n).any(|i| x & (1 << i) == 0 && indep[x | (1 << i)]) {
                indep[x] = true;
            }
        }
        let table = rank_from_independence(n, &indep);
        Self::from_table(ground, table)
    }

    fn from_table(ground: Vec<Element>, table: Vec<u8>) -> Matroid {
        let n = ground.len();
        let r = table[full(n) as usize];
        let bases: Vec<u32> =
            (0..1u32 << n).filter(|&x| x.count_ones() == r as u32 && table[x as usize] == r).collect();
        Matroid { ground, bases, rank: Arc::new(table) }
    }

    pub fn ground(&self) -> &[Element] {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rank[self.full_mask() as usize] as usize
    }

    pub fn corank(&self) -> usize {
        self.len() - self.rank()
    }

    pub fn basis_count(&self) -> usize {
        self.bases.len()
    }

    /// Bases as sorted label lists, in canonical order.
    pub fn bases(&self) -> impl Iterator<Item = Vec<Element>> + '_ {
        self.bases.iter().map(|&b| self.labels(b))
    }

    pub fn rank_of(&self, set: &[Element]) -> Result<usize, MatroidError> {
        Ok(self.rank[self.mask(set)? as usize] as usize)
    }

    pub fn is_independent(&self, set: &[Element]) -> Result<bool, MatroidError> {
        let x = self.mask(set)?;
        Ok(self.rank[x as usize] as u32 == x.count_ones())
    }

    pub fn closure(&self, set: &[Element]) -> Result<Vec<Element>, MatroidError> {
        Ok(self.labels(self.closure_mask(self.mask(set)?)))
    }

    /// All circuits as sorted label lists, ordered by size and then
    /// lexicographically.
    pub fn circuits(&self) -> Vec<Vec<Element>> {
        let mut cs: Vec<Vec<Element>> = self.circuit_masks().into_iter().map(|c| self.labels(c)).collect();
        cs.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        cs
    }

    pub fn is_loop(&self, e: Element) -> Result<bool, MatroidError> {
        Ok(self.rank_of(&[e])? == 0)
    }

    pub fn is_coloop(&self, e: Element) -> Result<bool, MatroidError> {
        let x = self.mask(&[e])?;
        Ok((self.rank[(self.full_mask() & !x) as usize] as usize) < self.rank())
    }

    /// Connected components; two elements share one exactly when some
    /// circuit contains both.
    pub fn components(&self) -> Vec<Vec<Element>> {
        self.component_masks().into_iter().map(|c| self.labels(c)).collect()
    }

    /// No proper nonempty separator. The empty matroid and single-element
    /// matroids count as connected.
    pub fn is_connected(&self) -> bool {
        self.component_masks().len() <= 1
    }

    pub fn dual(&self) -> Matroid {
        let e = self.full_mask();
        let r = self.rank() as u8;
        let t = &self.rank;
        Self::from_rank_fn(self.ground.clone(), |x| x.count_ones() as u8 + t[(e & !x) as usize] - r)
    }

    /// `M / contract \ delete`, keeping the labels of the surviving elements.
    pub fn minor(&self, delete: &[Element], contract: &[Element]) -> Result<Matroid, MatroidError> {
        let d = self.mask(delete)?;
        let c = self.mask(contract)?;
        if d & c != 0 {
            return Err(MatroidError::Overlap(self.labels(d & c)));
        }
        Ok(self.minor_masks(d, c))
    }

    pub fn delete(&self, set: &[Element]) -> Result<Matroid, MatroidError> {
        self.minor(set, &[])
    }

    pub fn contract(&self, set: &[Element]) -> Result<Matroid, MatroidError> {
        self.minor(&[], set)
    }

    /// Restriction to `set`.
    pub fn restrict(&self, set: &[Element]) -> Result<Matroid, MatroidError> {
        let x = self.mask(set)?;
        Ok(self.minor_masks(self.full_mask() & !x, 0))
    }

    /// True when swapping `e` and `f` maps bases onto bases.
    pub fn are_clones(&self, e: Element, f: Element) -> Result<bool, MatroidError> {
        let i = self.position(e)?;
        let j = self.position(f)?;
        Ok(self.swap_is_automorphism(i, j))
    }

    /// A ground bijection `self → other` carrying bases onto bases.
    pub fn is_isomorphic(&self, other: &Matroid) -> Option<BTreeMap<Element, Element>> {
        iso::isomorphism(self, other)
            .map(|p| p.iter().enumerate().map(|(i, &j)| (self.ground[i], other.ground[j])).collect())
    }

    /// Finds `delete`, `contract` and a bijection from `other` onto the
    /// surviving elements such that `self / contract \ delete ≅ other`.
    pub fn has_minor(&self, other: &Matroid) -> Option<MinorCertificate> {
        minor::find_minor(self, other)
    }

    pub fn fundamental_flats(&self) -> Result<FlatReport, MatroidError> {
        flats::fundamental_flats(self)
    }

    pub fn two_sum(&self, other: &Matroid, basepoint: Element) -> Result<Matroid, MatroidError> {
        ops::two_sum(self, other, basepoint)
    }

    /// Adds the element `new` according to `kind`.
    pub fn extend(&self, kind: &Extension, new: Element) -> Result<Matroid, MatroidError> {
        ops::extend(self, kind, new)
    }

    pub fn cosimplify(&self) -> Matroid {
        ops::cosimplify(self)
    }

    pub fn direct_sum(&self, other: &Matroid) -> Result<Matroid, MatroidError> {
        ops::direct_sum(self, other)
    }

    /// Renames every element through `map`; unmapped elements keep their
    /// label.
    pub fn relabel(&self, map: &BTreeMap<Element, Element>) -> Result<Matroid, MatroidError> {
        let new: Vec<Element> = self.ground.iter().map(|e| *map.get(e).unwrap_or(e)).collect();
        let sorted = sorted_ground(&new)?;
        let perm: Vec<usize> = new.iter().map(|l| sorted.binary_search(l).unwrap_or(0)).collect();
        let bases: Vec<u32> =
            self.bases.iter().map(|&b| bits(b).fold(0u32, |acc, i| acc | 1 << perm[i])).collect();
        Ok(Self::from_basis_masks(sorted, &bases))
    }

    /// Text form: `ground e1 e2 ...` then one `basis ...` line per basis.
    pub fn to_exchange(&self) -> String {
        let join = |v: &[Element]| v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ");
        let mut s = format!("ground {}\n", join(&self.ground)).replace("ground \n", "ground\n");
        for b in self.bases() {
            if b.is_empty() {
                s.push_str("basis\n");
            } else {
                s.push_str(&format!("basis {}\n", join(&b)));
            }
        }
        s
    }

    // ---- position-level helpers ----

    pub(crate) fn full_mask(&self) -> u32 {
        full(self.ground.len())
    }

    pub(crate) fn rank_mask(&self, x: u32) -> usize {
        self.rank[x as usize] as usize
    }

    pub(crate) fn rank_table(&self) -> &[u8] {
        &self.rank
    }

    pub(crate) fn basis_masks(&self) -> &[u32] {
        &self.bases
    }

    pub(crate) fn position(&self, e: Element) -> Result<usize, MatroidError> {
        self.ground.binary_search(&e).map_err(|_| MatroidError::ForeignElement(e))
    }

    pub(crate) fn mask(&self, set: &[Element]) -> Result<u32, MatroidError> {
        labels_to_mask(&self.ground, set)
    }

    pub(crate) fn labels(&self, x: u32) -> Vec<Element> {
        bits(x).map(|i| self.ground[i]).collect()
    }

    pub(crate) fn closure_mask(&self, x: u32) -> u32 {
        let r = self.rank[x as usize];
        (0..self.len()).filter(|&i| self.rank[(x | 1 << i) as usize] == r).fold(x, |acc, i| acc | 1 << i)
    }

    pub(crate) fn is_independent_mask(&self, x: u32) -> bool {
        self.rank[x as usize] as u32 == x.count_ones()
    }

    pub(crate) fn circuit_masks(&self) -> Vec<u32> {
        (1..=self.full_mask())
            .filter(|&x| !self.is_independent_mask(x) && bits(x).all(|i| self.is_independent_mask(x & !(1 << i))))
            .collect()
    }

    pub(crate) fn component_masks(&self) -> Vec<u32> {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for c in self.circuit_masks() {
            let first = c.trailing_zeros() as usize;
            for i in bits(c) {
                let (a, b) = (find(&mut parent, first), find(&mut parent, i));
                parent[a] = b;
            }
        }
        let mut comps: BTreeMap<usize, u32> = BTreeMap::new();
        for i in 0..n {
            let root = find(&mut parent, i);
            *comps.entry(root).or_default() |= 1 << i;
        }
        let mut out: Vec<u32> = comps.into_values().collect();
        out.sort_by_key(|c| c.trailing_zeros());
        out
    }

    pub(crate) fn minor_masks(&self, delete: u32, contract: u32) -> Matroid {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| (delete | contract) & (1 << i) == 0).collect();
        let ground: Vec<Element> = keep.iter().map(|&i| self.ground[i]).collect();
        let k = keep.len();
        let mut expand = vec![0u32; 1 << k];
        for y in 1..(1usize << k) {
            let low = y.trailing_zeros() as usize;
            expand[y] = expand[y & (y - 1)] | 1 << keep[low];
        }
        let rc = self.rank[contract as usize];
        let t = &self.rank;
        Self::from_rank_fn(ground, |y| t[(expand[y as usize] | contract) as usize] - rc)
    }

    pub(crate) fn swap_is_automorphism(&self, i: usize, j: usize) -> bool {
        let (bi, bj) = (1u32 << i, 1u32 << j);
        self.bases.iter().all(|&b| {
            let swapped = if (b & bi != 0) != (b & bj != 0) { b ^ bi ^ bj } else { b };
            self.bases.binary_search(&swapped).is_ok()
        })
    }
}

fn labels_to_mask(ground: &[Element], set: &[Element]) -> Result<u32, MatroidError> {
    set.iter().try_fold(0u32, |acc, &e| {
        ground.binary_search(&e).map(|i| acc | 1 << i).map_err(|_| MatroidError::ForeignElement(e))
    })
}

impl fmt::Display for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_exchange())
    }
}

impl FromStr for Matroid {
    type Err = MatroidError;

    /// Parses the exchange format; `#` starts a comment line.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut ground: Option<Vec<Element>> = None;
        let mut bases: Vec<Vec<Element>> = Vec::new();
        for (k, raw) in s.lines().enumerate() {
            let line = k + 1;
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let mut words = text.split_whitespace();
            let head = words.next().unwrap_or_default();
            let items: Vec<Element> = words
                .map(|w| w.parse::<Element>())
                .collect::<Result<_, _>>()
                .map_err(|e| MatroidError::Parse { line, message: format!("bad element: {e}") })?;
            match head {
                "ground" if ground.is_none() => ground = Some(items),
                "ground" => return Err(MatroidError::Parse { line, message: "second ground line".into() }),
                "basis" if ground.is_some() => bases.push(items),
                "basis" => return Err(MatroidError::Parse { line, message: "basis before ground".into() }),
                other => return Err(MatroidError::Parse { line, message: format!("unknown keyword `{other}`") }),
            }
        }
        let ground = ground.ok_or(MatroidError::Parse { line: 1, message: "missing ground line".into() })?;
        Matroid::from_bases(&ground, &bases)
    }
}
