use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use super::{bits, Matroid};

/// Above this size the search checks ranks of pairs and triples only, and
/// relies on the final basis check.
const FULL_SUBSET_CHECK: usize = 16;

const ROUNDS: usize = 3;

fn hash_of<T: Hash>(t: &T) -> u64 {
    let mut h = DefaultHasher::new();
    t.hash(&mut h);
    h.finish()
}

/// Isomorphism-invariant element colours and pair labels.
pub(crate) struct Profile {
    pub colours: Vec<u64>,
    pub pairs: Vec<Vec<u64>>,
    pub summary: u64,
}

pub(crate) fn profile(m: &Matroid) -> Profile {
    let n = m.len();
    let circuits = m.circuit_masks();
    let mut single: Vec<Vec<u32>> = vec![vec![0; n + 2]; n];
    let mut pair_hist: Vec<Vec<Vec<u32>>> = vec![vec![vec![0; n + 2]; n]; n];
    for &c in &circuits {
        let size = c.count_ones() as usize;
        let members: Vec<usize> = bits(c).collect();
        for (a, &i) in members.iter().enumerate() {
            single[i][size] += 1;
            for &j in &members[a + 1..] {
                pair_hist[i][j][size] += 1;
                pair_hist[j][i][size] += 1;
            }
        }
    }
    let in_bases: Vec<usize> = (0..n).map(|i| m.basis_masks().iter().filter(|&&b| b & 1 << i != 0).count()).collect();
    let pairs: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { 0 } else { hash_of(&(m.rank_mask(1 << i | 1 << j), &pair_hist[i][j])) })
                .collect()
        })
        .collect();
    let mut colours: Vec<u64> = (0..n).map(|i| hash_of(&(m.rank_mask(1 << i), in_bases[i], &single[i]))).collect();
    for _ in 0..ROUNDS {
        colours = (0..n)
            .map(|i| {
                let mut nb: Vec<(u64, u64)> = (0..n).filter(|&j| j != i).map(|j| (colours[j], pairs[i][j])).collect();
                nb.sort_unstable();
                hash_of(&(colours[i], nb))
            })
            .collect();
    }
    let mut sorted = colours.clone();
    sorted.sort_unstable();
    let summary = hash_of(&(n, m.rank(), m.basis_count(), circuits.len(), sorted));
    Profile { colours, pairs, summary }
}

/// Position map `p` with `p[i]` the image of position `i`, or `None`.
pub(crate) fn isomorphism(a: &Matroid, b: &Matroid) -> Option<Vec<usize>> {
    if a.len() != b.len() || a.rank() != b.rank() || a.basis_count() != b.basis_count() {
        return None;
    }
    let pa = profile(a);
    let pb = profile(b);
    isomorphism_with(a, &pa, b, &pb)
}

pub(crate) fn isomorphism_with(a: &Matroid, pa: &Profile, b: &Matroid, pb: &Profile) -> Option<Vec<usize>> {
    if pa.summary != pb.summary {
        return None;
    }
    let n = a.len();
    let class_size = |c: u64| pa.colours.iter().filter(|&&x| x == c).count();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (class_size(pa.colours[i]), i));
    let mut search = Search {
        a,
        b,
        pa,
        pb,
        order,
        image: vec![usize::MAX; n],
        used: vec![false; n],
        dom: vec![0],
        img: vec![0],
    };
    if search.run(0) {
        Some(search.image)
    } else {
        None
    }
}

struct Search<'a> {
    a: &'a Matroid,
    b: &'a Matroid,
    pa: &'a Profile,
    pb: &'a Profile,
    order: Vec<usize>,
    image: Vec<usize>,
    used: Vec<bool>,
    // subsets of the mapped prefix and their images
    dom: Vec<u32>,
    img: Vec<u32>,
}

impl Search<'_> {
    fn run(&mut self, depth: usize) -> bool {
        let n = self.order.len();
        if depth == n {
            return self.verify();
        }
        let x = self.order[depth];
        for y in 0..n {
            if self.used[y] || self.pa.colours[x] != self.pb.colours[y] {
                continue;
            }
            let consistent = self.order[..depth]
                .iter()
                .all(|&u| self.pa.pairs[x][u] == self.pb.pairs[y][self.image[u]]);
            if !consistent || !self.ranks_agree(depth, x, y) {
                continue;
            }
            self.image[x] = y;
            self.used[y] = true;
            let saved = self.dom.len();
            if n <= FULL_SUBSET_CHECK {
                for s in 0..saved {
                    let (d, i) = (self.dom[s] | 1 << x, self.img[s] | 1 << y);
                    self.dom.push(d);
                    self.img.push(i);
                }
            }
            if self.run(depth + 1) {
                return true;
            }
            self.dom.truncate(saved);
            self.img.truncate(saved);
            self.used[y] = false;
            self.image[x] = usize::MAX;
        }
        false
    }

    fn ranks_agree(&self, depth: usize, x: usize, y: usize) -> bool {
        let (ra, rb) = (self.a.rank_table(), self.b.rank_table());
        if self.order.len() <= FULL_SUBSET_CHECK {
            return self
                .dom
                .iter()
                .zip(&self.img)
                .all(|(&d, &i)| ra[(d | 1 << x) as usize] == rb[(i | 1 << y) as usize]);
        }
        let prefix = &self.order[..depth];
        prefix.iter().enumerate().all(|(k, &u)| {
            prefix[k + 1..].iter().all(|&v| {
                let d = 1u32 << x | 1 << u | 1 << v;
                let i = 1u32 << y | 1 << self.image[u] | 1 << self.image[v];
                ra[d as usize] == rb[i as usize]
            })
        })
    }

    fn verify(&self) -> bool {
        self.a.basis_masks().iter().all(|&bm| {
            let mapped = bits(bm).fold(0u32, |acc, i| acc | 1 << self.image[i]);
            self.b.basis_masks().binary_search(&mapped).is_ok()
        })
    }
}
