use std::collections::BTreeMap;

use super::{Multigraph, VertexId};

/// Canonical code of a multigraph: vertex count plus the multiplicity matrix
/// read column by column (loops on the diagonal) under the lexicographically
/// least vertex order compatible with colour refinement. Equal codes mean
/// isomorphic graphs and conversely.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub vertices: usize,
    pub code: Vec<u32>,
}

impl CanonicalForm {
    /// Rebuilds a graph on vertices `1..=n` from the code.
    pub fn to_graph(&self) -> Multigraph {
        let mut g = Multigraph::new();
        for v in 1..=self.vertices as VertexId {
            g.add_vertex(v);
        }
        let mut k = 0;
        for j in 0..self.vertices {
            for i in 0..=j {
                for _ in 0..self.code[k] {
                    g.add_edge(i as VertexId + 1, j as VertexId + 1);
                }
                k += 1;
            }
        }
        g
    }
}

pub(super) fn canonical_form(g: &Multigraph) -> CanonicalForm {
    let verts: Vec<VertexId> = g.vertices().collect();
    let n = verts.len();
    let index: BTreeMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut m = vec![vec![0u32; n]; n];
    for (_, u, v) in g.edges() {
        let (a, b) = (index[&u], index[&v]);
        m[a][b] += 1;
        if a != b {
            m[b][a] += 1;
        }
    }

    let colors = refine(&m);
    let mut cells: Vec<usize> = colors.clone();
    cells.sort_unstable();

    // twins: identical rows apart from each other are interchangeable
    let twin_of: Vec<usize> = (0..n)
        .map(|v| {
            (0..v)
                .find(|&u| {
                    colors[u] == colors[v]
                        && m[u][u] == m[v][v]
                        && (0..n).all(|w| w == u || w == v || m[u][w] == m[v][w])
                })
                .unwrap_or(v)
        })
        .collect();

    let mut search = Search {
        m: &m,
        colors: &colors,
        cells: &cells,
        twin_of: &twin_of,
        order: Vec::with_capacity(n),
        used: vec![false; n],
        current: Vec::with_capacity(n * (n + 1) / 2),
        best: None,
    };
    search.run();
    CanonicalForm { vertices: n, code: search.best.unwrap_or_default() }
}

/// Iterated colour refinement with iso-invariant colour names.
fn refine(m: &[Vec<u32>]) -> Vec<usize> {
    let n = m.len();
    let degree = |v: usize| -> u32 { (0..n).map(|w| m[v][w]).sum::<u32>() + m[v][v] };
    let mut colors = rank_signatures(&(0..n).map(|v| vec![m[v][v], degree(v)]).collect::<Vec<_>>());
    loop {
        let sigs: Vec<Vec<u32>> = (0..n)
            .map(|v| {
                let mut nb: Vec<(u32, u32)> = (0..n)
                    .filter(|&w| w != v && m[v][w] > 0)
                    .map(|w| (colors[w] as u32, m[v][w]))
                    .collect();
                nb.sort_unstable();
                let mut s = vec![colors[v] as u32];
                for (c, k) in nb {
                    s.push(c);
                    s.push(k);
                }
                s
            })
            .collect();
        let next = rank_signatures(&sigs);
        let count = |c: &[usize]| c.iter().collect::<std::collections::BTreeSet<_>>().len();
        if count(&next) == count(&colors) {
            return next;
        }
        colors = next;
    }
}

fn rank_signatures(sigs: &[Vec<u32>]) -> Vec<usize> {
    let mut distinct: Vec<&Vec<u32>> = sigs.iter().collect();
    distinct.sort();
    distinct.dedup();
    sigs.iter().map(|s| distinct.binary_search(&s).unwrap_or(0)).collect()
}

struct Search<'a> {
    m: &'a [Vec<u32>],
    colors: &'a [usize],
    cells: &'a [usize],
    twin_of: &'a [usize],
    order: Vec<usize>,
    used: Vec<bool>,
    current: Vec<u32>,
    best: Option<Vec<u32>>,
}

impl Search<'_> {
    /// Extends the vertex order one position at a time, abandoning any
    /// prefix whose code already exceeds the best complete code.
    fn run(&mut self) {
        let k = self.order.len();
        let n = self.cells.len();
        if k == n {
            if self.best.as_ref().map_or(true, |b| self.current < *b) {
                self.best = Some(self.current.clone());
            }
            return;
        }
        for v in 0..n {
            if self.used[v] || self.colors[v] != self.cells[k] {
                continue;
            }
            let t = self.twin_of[v];
            if t != v && !self.used[t] {
                continue;
            }
            let start = self.current.len();
            for &u in &self.order {
                self.current.push(self.m[u][v]);
            }
            self.current.push(self.m[v][v]);
            let worse = self
                .best
                .as_ref()
                .is_some_and(|b| self.current.as_slice() > &b[..self.current.len()]);
            if !worse {
                self.used[v] = true;
                self.order.push(v);
                self.run();
                self.order.pop();
                self.used[v] = false;
            }
            self.current.truncate(start);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabelled_graphs_share_a_code() {
        let a = Multigraph::from_edges(&[(1, 2), (1, 2), (2, 3), (3, 3), (3, 4)]);
        let b = Multigraph::from_edges(&[(9, 9), (7, 8), (8, 9), (8, 7), (9, 5)]);
        assert_eq!(a.canonical_form(), b.canonical_form());
        assert!(a.is_isomorphic(&b));
    }

    #[test]
    fn different_graphs_differ() {
        let a = Multigraph::from_edges(&[(1, 2), (2, 3), (3, 1), (1, 1)]);
        let b = Multigraph::from_edges(&[(1, 2), (2, 3), (3, 1), (1, 2)]);
        assert!(!a.is_isomorphic(&b));
    }

    #[test]
    fn stale_bound_regression() {
        // theta graphs with paths of lengths 5, 4, 3 under two labellings
        let a = Multigraph::from_edges(&[
            (1, 6), (2, 4), (1, 9), (3, 4), (1, 5), (4, 11),
            (6, 7), (7, 8), (2, 8), (9, 10), (3, 10), (5, 11),
        ]);
        let b = Multigraph::from_edges(&[
            (1, 6), (2, 4), (1, 9), (4, 5), (1, 11), (3, 4),
            (6, 7), (7, 8), (2, 8), (9, 10), (5, 10), (3, 11),
        ]);
        assert!(a.is_isomorphic(&b));
    }

    proptest::proptest! {
        #[test]
        fn relabelling_keeps_the_code(
            edges in proptest::collection::vec((1u32..8, 1u32..8), 1..14),
            shift in proptest::sample::subsequence((1u32..=7).collect::<Vec<_>>(), 7),
            seed in 0usize..5040,
        ) {
            // a permutation of 1..=7 from the seed, applied to every endpoint
            let mut pool = shift;
            let mut perm = Vec::new();
            let mut k = seed;
            while !pool.is_empty() {
                perm.push(pool.remove(k % pool.len()));
                k /= perm.len().max(1);
            }
            let a = Multigraph::from_edges(&edges);
            let mut shuffled: Vec<(u32, u32)> =
                edges.iter().map(|&(u, v)| (perm[u as usize - 1], perm[v as usize - 1])).collect();
            shuffled.reverse();
            let b = Multigraph::from_edges(&shuffled);
            proptest::prop_assert_eq!(a.canonical_form(), b.canonical_form());
        }
    }

    #[test]
    fn code_round_trips() {
        let a = Multigraph::from_edges(&[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (4, 4)]);
        let c = a.canonical_form();
        assert!(c.to_graph().is_isomorphic(&a));
    }
}
