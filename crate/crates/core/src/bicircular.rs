//! The bicircular matroid of a multigraph.
//!
//! A set of edges is independent when every connected component of the
//! subgraph it spans has at most as many edges as vertices, that is, at most
//! one cycle. The rank of an edge set is therefore the sum over the
//! components of `min(edges, vertices)`.

use serde::Serialize;
use thiserror::Error;

use crate::matroid::{Matroid, MatroidError, MAX_GROUND};
use crate::multigraph::{Dense, EdgeId, GraphError, Multigraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BicircularError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error("edge set {0:?} is not a bicircular circuit")]
    NotACircuit(Vec<EdgeId>),
}

/// The three circuit shapes, each a subdivision of its template. Paths and
/// cycles list edge ids in walking order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CircuitKind {
    /// Three internally disjoint paths between two vertices.
    Theta { ends: (VertexId, VertexId), paths: [Vec<EdgeId>; 3] },
    /// Two cycles sharing exactly one vertex.
    TightHandcuff { vertex: VertexId, cycles: [Vec<EdgeId>; 2] },
    /// Two disjoint cycles joined by a path.
    LooseHandcuff { ends: (VertexId, VertexId), cycles: [Vec<EdgeId>; 2], path: Vec<EdgeId> },
}

impl CircuitKind {
    pub fn name(&self) -> &'static str {
        match self {
            CircuitKind::Theta { .. } => "theta",
            CircuitKind::TightHandcuff { .. } => "tight-handcuff",
            CircuitKind::LooseHandcuff { .. } => "loose-handcuff",
        }
    }
}

/// Union-find over vertex indices, returning per-component (vertices, edges).
fn component_counts(d: &Dense, edges: impl Iterator<Item = usize>) -> Vec<(usize, usize)> {
    let n = d.verts.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut touched = vec![false; n];
    let mut edge_ends = Vec::new();
    for ei in edges {
        let (_, a, b) = d.edges[ei];
        touched[a] = true;
        touched[b] = true;
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
        edge_ends.push(a);
    }
    let mut counts = vec![(0usize, 0usize); n];
    for x in 0..n {
        if touched[x] {
            let r = find(&mut parent, x);
            counts[r].0 += 1;
        }
    }
    for a in edge_ends {
        let r = find(&mut parent, a);
        counts[r].1 += 1;
    }
    counts.into_iter().filter(|&(v, _)| v > 0).collect()
}

fn edge_indices(d: &Dense, set: &[EdgeId]) -> Result<Vec<usize>, GraphError> {
    set.iter()
        .map(|&e| d.edges.binary_search_by_key(&e, |t| t.0).map_err(|_| GraphError::UnknownEdge(e)))
        .collect()
}

/// Bicircular rank of an edge set.
pub fn bicircular_rank(g: &Multigraph, set: &[EdgeId]) -> Result<usize, GraphError> {
    let d = Dense::new(g);
    let idx = edge_indices(&d, set)?;
    Ok(component_counts(&d, idx.into_iter()).iter().map(|&(v, e)| v.min(e)).sum())
}

/// True when every component of the subgraph spanned by `set` has at most as
/// many edges as vertices.
pub fn is_bicircular_independent(g: &Multigraph, set: &[EdgeId]) -> Result<bool, GraphError> {
    let d = Dense::new(g);
    let idx = edge_indices(&d, set)?;
    Ok(component_counts(&d, idx.into_iter()).iter().all(|&(v, e)| e <= v))
}

/// B(G) on the edge ids of `g`, built from the component rank formula.
pub fn bicircular(g: &Multigraph) -> Result<Matroid, BicircularError> {
    let m = g.edge_count();
    if m > MAX_GROUND {
        return Err(MatroidError::TooLarge(m).into());
    }
    let d = Dense::new(g);
    let ground: Vec<EdgeId> = d.edges.iter().map(|t| t.0).collect();
    Ok(Matroid::from_rank_fn(ground, |x| {
        component_counts(&d, crate::matroid::bits(x)).iter().map(|&(v, e)| v.min(e)).sum::<usize>() as u8
    }))
}

/// B(G) through the axiom-checking constructor, fed by the independence
/// test. Slower than [`bicircular`]; used to cross-check it.
pub fn bicircular_checked(g: &Multigraph) -> Result<Matroid, BicircularError> {
    let ground = g.edge_ids();
    Ok(Matroid::from_independence(&ground, |set| is_bicircular_independent(g, set).unwrap_or(false))?)
}

/// Identifies which template the circuit `set` subdivides.
pub fn classify_circuit(g: &Multigraph, set: &[EdgeId]) -> Result<CircuitKind, BicircularError> {
    let not_circuit = || BicircularError::NotACircuit(set.to_vec());
    let h = g.edge_subgraph(set)?;
    let d = Dense::new(&h);
    // a circuit spans a connected subgraph with one more edge than vertices
    // and no vertex of degree one
    if !h.is_connected() || d.edges.len() != d.verts.len() + 1 || !h.has_no_leaves() {
        return Err(not_circuit());
    }
    let degree = |x: usize| d.inc[x].len() + 2 * d.loops[x].len();
    let branch: Vec<usize> = (0..d.verts.len()).filter(|&x| degree(x) > 2).collect();

    // Walks from branch vertex `x` along edge `ei` to the next branch vertex.
    let walk = |x: usize, ei: usize| -> (usize, Vec<EdgeId>) {
        let mut path = vec![d.edges[ei].0];
        let (mut cur, mut edge) = (d.other(ei, x), ei);
        while degree(cur) == 2 {
            let next = if d.inc[cur][0] == edge { d.inc[cur][1] } else { d.inc[cur][0] };
            path.push(d.edges[next].0);
            edge = next;
            cur = d.other(next, cur);
        }
        (cur, path)
    };
    // Each closed walk or path leaving `x`, counting each loop once and each
    // cycle through `x` once.
    let routes = |x: usize| -> Vec<(usize, Vec<EdgeId>)> {
        let mut out: Vec<(usize, Vec<EdgeId>)> = d.loops[x].iter().map(|&li| (x, vec![d.edges[li].0])).collect();
        let mut used: Vec<EdgeId> = Vec::new();
        for &ei in &d.inc[x] {
            if used.contains(&d.edges[ei].0) {
                continue;
            }
            let (end, path) = walk(x, ei);
            used.extend(&path);
            out.push((end, path));
        }
        out
    };

    match branch.as_slice() {
        [v] => {
            let r = routes(*v);
            if r.len() != 2 {
                return Err(not_circuit());
            }
            Ok(CircuitKind::TightHandcuff { vertex: d.verts[*v], cycles: [r[0].1.clone(), r[1].1.clone()] })
        }
        [a, b] => {
            let ra = routes(*a);
            let (u, v) = (d.verts[*a], d.verts[*b]);
            if ra.len() == 3 && ra.iter().all(|(end, _)| end == b) {
                return Ok(CircuitKind::Theta {
                    ends: (u, v),
                    paths: [ra[0].1.clone(), ra[1].1.clone(), ra[2].1.clone()],
                });
            }
            let rb = routes(*b);
            let cycle_a = ra.iter().find(|(end, _)| end == a);
            let link = ra.iter().find(|(end, _)| end == b);
            let cycle_b = rb.iter().find(|(end, _)| end == b);
            match (cycle_a, link, cycle_b) {
                (Some(ca), Some(p), Some(cb)) => Ok(CircuitKind::LooseHandcuff {
                    ends: (u, v),
                    cycles: [ca.1.clone(), cb.1.clone()],
                    path: p.1.clone(),
                }),
                _ => Err(not_circuit()),
            }
        }
        _ => Err(not_circuit()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Multigraph {
        Multigraph::from_edges(&[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
    }

    #[test]
    fn k4_is_u46() {
        let m = bicircular(&k4()).unwrap();
        assert_eq!(m.rank(), 4);
        assert_eq!(m.basis_count(), 15);
        assert!(m.is_isomorphic(&Matroid::uniform(4, 6)).is_some());
        assert_eq!(m, bicircular_checked(&k4()).unwrap());
    }

    #[test]
    fn double_triangle_is_u36() {
        let g = Multigraph::from_edges(&[(1, 2), (1, 2), (2, 3), (2, 3), (1, 3), (1, 3)]);
        assert!(bicircular(&g).unwrap().is_isomorphic(&Matroid::uniform(3, 6)).is_some());
    }

    #[test]
    fn independence_examples() {
        let g = Multigraph::from_edges(&[(1, 1), (1, 1), (1, 2)]);
        assert!(is_bicircular_independent(&g, &[1]).unwrap());
        assert!(!is_bicircular_independent(&g, &[1, 2]).unwrap());
        assert!(is_bicircular_independent(&g, &[1, 3]).unwrap());
        assert!(!is_bicircular_independent(&k4(), &[1, 2, 3, 4, 5]).unwrap());
        assert_eq!(is_bicircular_independent(&g, &[9]), Err(GraphError::UnknownEdge(9)));
    }

    #[test]
    fn circuit_shapes() {
        let theta = Multigraph::from_edges(&[(1, 2), (2, 3), (1, 3), (1, 4), (4, 3)]);
        let kind = classify_circuit(&theta, &theta.edge_ids()).unwrap();
        assert_eq!(kind.name(), "theta");

        let tight = Multigraph::from_edges(&[(1, 1), (1, 1)]);
        assert_eq!(classify_circuit(&tight, &[1, 2]).unwrap().name(), "tight-handcuff");

        let loose = Multigraph::from_edges(&[(1, 1), (1, 2), (2, 3), (3, 3)]);
        match classify_circuit(&loose, &loose.edge_ids()).unwrap() {
            CircuitKind::LooseHandcuff { path, .. } => assert_eq!(path, vec![2, 3]),
            other => panic!("unexpected {other:?}"),
        }

        let figure_eight = Multigraph::from_edges(&[(1, 2), (2, 1), (1, 3), (3, 1)]);
        assert_eq!(classify_circuit(&figure_eight, &figure_eight.edge_ids()).unwrap().name(), "tight-handcuff");

        assert!(classify_circuit(&theta, &[1, 2, 3]).is_err());
    }

    #[test]
    fn every_circuit_of_k4_with_loops_classifies() {
        let mut g = k4();
        g.add_edge(1, 1);
        g.add_edge(3, 3);
        let m = bicircular(&g).unwrap();
        for c in m.circuits() {
            classify_circuit(&g, &c).unwrap();
        }
    }
}
