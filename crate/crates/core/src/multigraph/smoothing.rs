use std::collections::BTreeMap;

use super::{Dense, EdgeId, Multigraph};

/// Result of suppressing subdivision vertices.
///
/// Each smoothed edge keeps the id of the first original edge on its path;
/// `classes` lists the original path in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothingMap {
    pub graph: Multigraph,
    pub classes: BTreeMap<EdgeId, Vec<EdgeId>>,
}

impl SmoothingMap {
    pub fn class_len(&self, e: EdgeId) -> usize {
        self.classes.get(&e).map_or(0, Vec::len)
    }
}

/// A vertex is suppressed when it carries no loop and has exactly two
/// non-loop edge ends. A closed path returning to its start, and a component
/// that is a bare cycle, are kept as a digon whose classes have lengths
/// 1 and n - 1.
pub(super) fn smooth(g: &Multigraph) -> SmoothingMap {
    let d = Dense::new(g);
    let n = d.verts.len();
    let suppressible: Vec<bool> = (0..n).map(|x| d.loops[x].is_empty() && d.inc[x].len() == 2).collect();
    let mut visited = vec![false; d.edges.len()];
    let mut out = Multigraph {
        vertices: Default::default(),
        edges: BTreeMap::new(),
        next_vertex: g.next_vertex,
        next_edge: g.next_edge,
    };
    let mut classes = BTreeMap::new();

    // Walks from `start` along edge `first` until a kept vertex is reached.
    let walk = |start: usize, first: usize, visited: &mut Vec<bool>| -> (usize, Vec<usize>) {
        let mut path = vec![first];
        visited[first] = true;
        let mut edge = first;
        let mut cur = d.other(first, start);
        while suppressible[cur] && cur != start {
            let next = if d.inc[cur][0] == edge { d.inc[cur][1] } else { d.inc[cur][0] };
            if visited[next] {
                break;
            }
            visited[next] = true;
            path.push(next);
            edge = next;
            cur = d.other(next, cur);
        }
        (cur, path)
    };

    let mut emit = |out: &mut Multigraph, a: usize, b: usize, path: &[usize]| {
        let ids: Vec<EdgeId> = path.iter().map(|&ei| d.edges[ei].0).collect();
        let (u, v) = (d.verts[a], d.verts[b]);
        out.vertices.insert(u);
        out.vertices.insert(v);
        out.edges.insert(ids[0], (u.min(v), u.max(v)));
        classes.insert(ids[0], ids);
    };

    for x in 0..n {
        if suppressible[x] {
            continue;
        }
        out.vertices.insert(d.verts[x]);
        for &li in &d.loops[x] {
            visited[li] = true;
            emit(&mut out, x, x, &[li]);
        }
        for &ei in &d.inc[x] {
            if visited[ei] {
                continue;
            }
            let (end, path) = walk(x, ei, &mut visited);
            if end == x && path.len() >= 2 {
                let y = d.other(path[0], x);
                emit(&mut out, x, y, &path[..1]);
                emit(&mut out, y, x, &path[1..]);
            } else {
                emit(&mut out, x, end, &path);
            }
        }
    }

    // Whatever is left consists of bare cycles.
    for ei in 0..d.edges.len() {
        if visited[ei] {
            continue;
        }
        let (_, a, _) = d.edges[ei];
        let (_, path) = walk(a, ei, &mut visited);
        let y = d.other(path[0], a);
        emit(&mut out, a, y, &path[..1]);
        emit(&mut out, y, a, &path[1..]);
    }

    SmoothingMap { graph: out, classes }
}
