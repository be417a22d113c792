use std::collections::HashSet;

use super::{CanonicalForm, Multigraph, VertexId};

/// All connected multigraphs (loops and parallel edges allowed, no isolated
/// vertices) with 1 to `max_edges` edges, one per isomorphism class.
/// Entry `k` of the result holds the graphs with `k + 1` edges, sorted by
/// canonical code.
///
/// Every connected graph with at least two edges has an edge whose removal
/// leaves a connected graph once a possible isolated vertex is dropped, so
/// growing each level by one edge in every way reaches all classes.
pub fn connected_multigraphs(max_edges: usize) -> Vec<Vec<Multigraph>> {
    let mut levels: Vec<Vec<CanonicalForm>> = Vec::new();
    if max_edges == 0 {
        return Vec::new();
    }
    let mut first = vec![
        Multigraph::from_edges(&[(1, 1)]).canonical_form(),
        Multigraph::from_edges(&[(1, 2)]).canonical_form(),
    ];
    first.sort();
    levels.push(first);
    for _ in 1..max_edges {
        let prev = levels.last().map(Vec::as_slice).unwrap_or_default();
        let mut seen: HashSet<CanonicalForm> = HashSet::new();
        for form in prev {
            let g = form.to_graph();
            let n = form.vertices as VertexId;
            for u in 1..=n {
                for v in u..=n + 1 {
                    let mut h = g.clone();
                    h.add_edge(u, v);
                    seen.insert(h.canonical_form());
                }
            }
        }
        let mut next: Vec<CanonicalForm> = seen.into_iter().collect();
        next.sort();
        levels.push(next);
    }
    levels.into_iter().map(|lvl| lvl.iter().map(CanonicalForm::to_graph).collect()).collect()
}
