use super::{bits, Element, Matroid, MatroidError, MAX_GROUND};

/// How a new element is attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extension {
    /// Parallel to the given element.
    Parallel(Element),
    /// In series with the given element.
    Series(Element),
    /// A clone of every element of the given circuit of mutual clones.
    Clone(Vec<Element>),
}

fn check_new(m: &Matroid, new: Element) -> Result<(), MatroidError> {
    if m.position(new).is_ok() {
        return Err(MatroidError::DuplicateLabel(new));
    }
    if m.len() + 1 > MAX_GROUND {
        return Err(MatroidError::TooLarge(m.len() + 1));
    }
    Ok(())
}

fn with_element(m: &Matroid, new: Element) -> (Vec<Element>, usize) {
    let mut ground = m.ground().to_vec();
    let at = ground.partition_point(|&e| e < new);
    ground.insert(at, new);
    (ground, at)
}

/// Maps a mask over the extended ground set back to the old positions,
/// dropping the new element.
fn drop_position(x: u32, at: usize) -> u32 {
    let low = x & ((1u32 << at) - 1);
    let high = (x >> (at + 1)) << at;
    low | high
}

pub(super) fn extend(m: &Matroid, kind: &Extension, new: Element) -> Result<Matroid, MatroidError> {
    check_new(m, new)?;
    match kind {
        Extension::Parallel(e) => {
            let i = m.position(*e)?;
            let (ground, at) = with_element(m, new);
            let t = m.rank_table();
            Ok(Matroid::from_rank_fn(ground, |x| {
                let old = drop_position(x, at);
                if x & 1 << at != 0 {
                    t[(old | 1 << i) as usize]
                } else {
                    t[old as usize]
                }
            }))
        }
        Extension::Series(e) => Ok(extend(&m.dual(), &Extension::Parallel(*e), new)?.dual()),
        Extension::Clone(anchor) => {
            let s = m.mask(anchor)?;
            let circuits = m.circuit_masks();
            let mutual = bits(s).all(|i| bits(s).all(|j| i >= j || m.swap_is_automorphism(i, j)));
            if !circuits.contains(&s) || !mutual {
                return Err(MatroidError::NotCloneCircuit(anchor.clone()));
            }
            let mut family: Vec<Vec<Element>> = Vec::new();
            for &c in &circuits {
                family.push(m.labels(c));
                for i in bits(c & s) {
                    let mut swapped = m.labels(c & !(1 << i));
                    swapped.push(new);
                    family.push(swapped);
                }
            }
            let (ground, _) = with_element(m, new);
            Matroid::from_circuits(&ground, &family)
        }
    }
}

pub(super) fn two_sum(a: &Matroid, b: &Matroid, e: Element) -> Result<Matroid, MatroidError> {
    for m in [a, b] {
        if m.is_loop(e)? || m.is_coloop(e)? {
            return Err(MatroidError::DegenerateBasepoint(e));
        }
    }
    let shared: Vec<Element> = a.ground().iter().copied().filter(|&x| x != e && b.position(x).is_ok()).collect();
    if !shared.is_empty() {
        return Err(MatroidError::LabelCollision(shared));
    }
    let mut ground: Vec<Element> = a.ground().iter().chain(b.ground()).copied().filter(|&x| x != e).collect();
    ground.sort_unstable();
    let strip = |m: &Matroid| -> (Vec<Vec<Element>>, Vec<Vec<Element>>) {
        let (with, without): (Vec<_>, Vec<_>) = m.circuits().into_iter().partition(|c| c.contains(&e));
        let with = with.into_iter().map(|c| c.into_iter().filter(|&x| x != e).collect()).collect();
        (with, without)
    };
    let (a_with, a_without) = strip(a);
    let (b_with, b_without) = strip(b);
    let mut family: Vec<Vec<Element>> = a_without.into_iter().chain(b_without).collect();
    for x in &a_with {
        for y in &b_with {
            family.push(x.iter().chain(y).copied().collect());
        }
    }
    Matroid::from_circuits(&ground, &family)
}

pub(super) fn direct_sum(a: &Matroid, b: &Matroid) -> Result<Matroid, MatroidError> {
    let shared: Vec<Element> = a.ground().iter().copied().filter(|&x| b.position(x).is_ok()).collect();
    if !shared.is_empty() {
        return Err(MatroidError::LabelCollision(shared));
    }
    let mut ground: Vec<Element> = a.ground().iter().chain(b.ground()).copied().collect();
    ground.sort_unstable();
    let split = |x: u32| -> (u32, u32) {
        let (mut xa, mut xb) = (0u32, 0u32);
        for i in bits(x) {
            let l = ground[i];
            match a.position(l) {
                Ok(p) => xa |= 1 << p,
                Err(_) => xb |= 1 << b.position(l).unwrap_or(0),
            }
        }
        (xa, xb)
    };
    if ground.len() > MAX_GROUND {
        return Err(MatroidError::TooLarge(ground.len()));
    }
    let (ta, tb) = (a.rank_table(), b.rank_table());
    let table: Vec<u8> = (0..1u32 << ground.len())
        .map(|x| {
            let (xa, xb) = split(x);
            ta[xa as usize] + tb[xb as usize]
        })
        .collect();
    Ok(Matroid::from_rank_fn(ground, |x| table[x as usize]))
}

/// Deletes coloops and contracts all but the smallest element of every
/// series class, until neither applies.
pub(super) fn cosimplify(m: &Matroid) -> Matroid {
    let mut cur = m.clone();
    loop {
        let full = cur.full_mask();
        let r = cur.rank();
        let n = cur.len();
        let coloops: u32 = (0..n)
            .filter(|&i| cur.rank_mask(full & !(1 << i)) + 1 == r)
            .fold(0, |acc, i| acc | 1 << i);
        // e, f in series: {e, f} is a cocircuit, that is r(E - e - f) = r - 1
        // while neither is a coloop
        let mut contract = 0u32;
        let mut seen = coloops;
        for i in 0..n {
            if seen & 1 << i != 0 {
                continue;
            }
            seen |= 1 << i;
            for j in i + 1..n {
                if seen & 1 << j == 0 && cur.rank_mask(full & !(1 << i | 1 << j)) + 1 == r {
                    seen |= 1 << j;
                    contract |= 1 << j;
                }
            }
        }
        if coloops == 0 && contract == 0 {
            return cur;
        }
        cur = cur.minor_masks(coloops, contract);
    }
}
