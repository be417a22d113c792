//! Multigraphs with loops and parallel edges.
//!
//! Edge ids are assigned from 1 upward and are never reused inside one
//! graph's lifetime, so an edge keeps its identity through deletions,
//! contractions and subdivisions. That identity is what lets graph minors be
//! compared element-wise with minors of the bicircular matroid.

mod blocks;
mod canonical;
mod enumerate;
mod smoothing;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use blocks::{Block, BlockDecomposition};
pub use canonical::CanonicalForm;
pub use enumerate::connected_multigraphs;
pub use smoothing::SmoothingMap;

pub type VertexId = u32;
pub type EdgeId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown edge id {0}")]
    UnknownEdge(EdgeId),
    #[error("edge {0} is a loop; loops are never subdivided")]
    LoopSubdivision(EdgeId),
    #[error("subdivision count must be at least 1")]
    ZeroSubdivision,
    #[error("graph is not connected")]
    Disconnected,
}

/// An undirected multigraph. Endpoint pairs are stored with the smaller
/// vertex id first; a loop has equal endpoints.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Multigraph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
    next_vertex: VertexId,
    next_edge: EdgeId,
}

impl Multigraph {
    pub fn new() -> Self {
        Multigraph {
            vertices: BTreeSet::new(),
            edges: BTreeMap::new(),
            next_vertex: 1,
            next_edge: 1,
        }
    }

    /// Builds a graph from endpoint pairs; edge ids follow slice order.
    pub fn from_edges(pairs: &[(VertexId, VertexId)]) -> Self {
        let mut g = Multigraph::new();
        for &(u, v) in pairs {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_vertex(&mut self, v: VertexId) -> bool {
        self.next_vertex = self.next_vertex.max(v + 1);
        self.vertices.insert(v)
    }

    /// Adds a vertex with an id not used before in this graph.
    pub fn fresh_vertex(&mut self) -> VertexId {
        let v = self.next_vertex;
        self.add_vertex(v);
        v
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> EdgeId {
        self.add_vertex(u);
        self.add_vertex(v);
        let id = self.next_edge;
        self.next_edge += 1;
        self.edges.insert(id, (u.min(v), u.max(v)));
        id
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.edges.iter().map(|(&e, &(u, v))| (e, u, v))
    }

    pub fn edge_ids(&self) -> Vec<EdgeId> {
        self.edges.keys().copied().collect()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn endpoints(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.edges.get(&e).copied()
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        matches!(self.edges.get(&e), Some((u, v)) if u == v)
    }

    /// Degree with each loop counted twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .values()
            .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    pub fn loop_count(&self, v: VertexId) -> usize {
        self.edges.values().filter(|&&(a, b)| a == v && b == v).count()
    }

    /// Number of edges joining `u` and `v` (loops when `u == v`).
    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> usize {
        let key = (u.min(v), u.max(v));
        self.edges.values().filter(|&&p| p == key).count()
    }

    fn require(&self, e: EdgeId) -> Result<(VertexId, VertexId), GraphError> {
        self.endpoints(e).ok_or(GraphError::UnknownEdge(e))
    }

    pub fn delete_edge(&self, e: EdgeId) -> Result<Multigraph, GraphError> {
        self.require(e)?;
        let mut g = self.clone();
        g.edges.remove(&e);
        Ok(g)
    }

    pub fn delete_edges(&self, es: &[EdgeId]) -> Result<Multigraph, GraphError> {
        let mut g = self.clone();
        for &e in es {
            self.require(e)?;
            g.edges.remove(&e);
        }
        Ok(g)
    }

    /// Contracts `e`. A loop is simply deleted; otherwise the larger endpoint
    /// is merged into the smaller one and any edge parallel to `e` becomes a
    /// loop.
    pub fn contract_edge(&self, e: EdgeId) -> Result<Multigraph, GraphError> {
        let (u, v) = self.require(e)?;
        let mut g = self.clone();
        g.edges.remove(&e);
        if u == v {
            return Ok(g);
        }
        g.vertices.remove(&v);
        for ends in g.edges.values_mut() {
            let a = if ends.0 == v { u } else { ends.0 };
            let b = if ends.1 == v { u } else { ends.1 };
            *ends = (a.min(b), a.max(b));
        }
        Ok(g)
    }

    pub fn contract_edges(&self, es: &[EdgeId]) -> Result<Multigraph, GraphError> {
        let mut g = self.clone();
        for &e in es {
            g = g.contract_edge(e)?;
        }
        Ok(g)
    }

    /// Replaces `e` by a path of `k` edges. The first path edge keeps the id
    /// `e`; the others and the `k - 1` inner vertices are fresh. Returns the
    /// path edges in order from the smaller endpoint.
    pub fn subdivide_edge(
        &self,
        e: EdgeId,
        k: usize,
    ) -> Result<(Multigraph, Vec<EdgeId>), GraphError> {
        let (u, v) = self.require(e)?;
        if u == v {
            return Err(GraphError::LoopSubdivision(e));
        }
        if k == 0 {
            return Err(GraphError::ZeroSubdivision);
        }
        let mut g = self.clone();
        let mut path = vec![e];
        if k == 1 {
            return Ok((g, path));
        }
        let mut prev = g.fresh_vertex();
        g.edges.insert(e, (u.min(prev), u.max(prev)));
        for i in 1..k {
            let next = if i + 1 == k { v } else { g.fresh_vertex() };
            path.push(g.add_edge(prev, next));
            prev = next;
        }
        Ok((g, path))
    }

    /// The subgraph formed by the given edges and their endpoints. Ids and
    /// fresh-id counters are kept.
    pub fn edge_subgraph(&self, es: &[EdgeId]) -> Result<Multigraph, GraphError> {
        let mut g = Multigraph {
            vertices: BTreeSet::new(),
            edges: BTreeMap::new(),
            next_vertex: self.next_vertex,
            next_edge: self.next_edge,
        };
        for &e in es {
            let (u, v) = self.require(e)?;
            g.vertices.insert(u);
            g.vertices.insert(v);
            g.edges.insert(e, (u, v));
        }
        Ok(g)
    }

    pub fn without_isolated_vertices(&self) -> Multigraph {
        let mut g = self.clone();
        let used: BTreeSet<VertexId> = self.edges.values().flat_map(|&(u, v)| [u, v]).collect();
        g.vertices = used;
        g
    }

    /// Connected components as (vertices, edges).
    pub fn components(&self) -> Vec<(Vec<VertexId>, Vec<EdgeId>)> {
        let d = Dense::new(self);
        let mut comp = vec![usize::MAX; d.verts.len()];
        let mut out = Vec::new();
        for s in 0..d.verts.len() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            comp[s] = id;
            let mut vs = Vec::new();
            while let Some(x) = stack.pop() {
                vs.push(d.verts[x]);
                for &ei in &d.inc[x] {
                    let y = d.other(ei, x);
                    if comp[y] == usize::MAX {
                        comp[y] = id;
                        stack.push(y);
                    }
                }
            }
            vs.sort_unstable();
            out.push((vs, Vec::new()));
        }
        for &(e, a, _) in &d.edges {
            out[comp[a]].1.push(e);
        }
        out
    }

    /// The empty graph and a single vertex both count as connected.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Minimum degree at least two (loops counted twice).
    pub fn has_no_leaves(&self) -> bool {
        let mut deg: HashMap<VertexId, usize> = HashMap::new();
        for &(u, v) in self.edges.values() {
            *deg.entry(u).or_default() += 1;
            *deg.entry(v).or_default() += 1;
        }
        self.vertices.iter().all(|v| deg.get(v).copied().unwrap_or(0) >= 2)
    }

    /// True when the graph is a single cycle (including a lone loop or a
    /// digon), possibly with isolated vertices.
    pub fn is_cycle(&self) -> bool {
        let g = self.without_isolated_vertices();
        if g.edge_count() == 0 || g.edge_count() != g.vertex_count() || !g.is_connected() {
            return false;
        }
        let mut deg: HashMap<VertexId, usize> = HashMap::new();
        for &(u, v) in g.edges.values() {
            *deg.entry(u).or_default() += 1;
            *deg.entry(v).or_default() += 1;
        }
        deg.values().all(|&d| d == 2)
    }

    /// Graph-side test for connectivity of the bicircular matroid: the
    /// non-isolated part is connected and either has at most one edge, or has
    /// minimum degree two and is not a cycle.
    pub fn bicircular_is_connected(&self) -> bool {
        let g = self.without_isolated_vertices();
        if g.edge_count() <= 1 {
            return true;
        }
        g.is_connected() && g.has_no_leaves() && !g.is_cycle()
    }

    pub fn smooth(&self) -> SmoothingMap {
        smoothing::smooth(self)
    }

    pub fn block_structure(&self) -> Result<BlockDecomposition, GraphError> {
        blocks::block_structure(self)
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        canonical::canonical_form(self)
    }

    pub fn is_isomorphic(&self, other: &Multigraph) -> bool {
        self.vertex_count() == other.vertex_count()
            && self.edge_count() == other.edge_count()
            && self.canonical_form() == other.canonical_form()
    }

    /// Renders the graph in the `.mg` text format.
    pub fn to_mg(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let used: BTreeSet<VertexId> = self.edges.values().flat_map(|&(u, v)| [u, v]).collect();
        for v in &self.vertices {
            if !used.contains(v) {
                writeln!(f, "vertex {v}")?;
            }
        }
        for (u, v) in self.edges.values() {
            writeln!(f, "edge {u} {v}")?;
        }
        Ok(())
    }
}

impl FromStr for Multigraph {
    type Err = GraphError;

    /// Parses the `.mg` format: `#` comments, `edge u v`, `vertex u`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut g = Multigraph::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| GraphError::Parse { line: i + 1, message };
            let mut parts = line.split_whitespace();
            let keyword = parts.next().unwrap_or_default();
            let ids: Vec<&str> = parts.collect();
            let vertex = |s: &str| -> Result<VertexId, GraphError> {
                match s.parse::<VertexId>() {
                    Ok(v) if v > 0 => Ok(v),
                    _ => Err(err(format!("expected a positive vertex id, found `{s}`"))),
                }
            };
            match (keyword, ids.as_slice()) {
                ("edge", [a, b]) => {
                    let (u, v) = (vertex(a)?, vertex(b)?);
                    g.add_edge(u, v);
                }
                ("edge", _) => return Err(err("`edge` takes exactly two vertex ids".into())),
                ("vertex", [a]) => {
                    g.add_vertex(vertex(a)?);
                }
                ("vertex", _) => return Err(err("`vertex` takes exactly one vertex id".into())),
                (other, _) => return Err(err(format!("unknown keyword `{other}`"))),
            }
        }
        Ok(g)
    }
}

/// Index-based adjacency used by the linear-time routines.
pub(crate) struct Dense {
    pub verts: Vec<VertexId>,
    /// (edge id, endpoint index, endpoint index)
    pub edges: Vec<(EdgeId, usize, usize)>,
    /// Non-loop edge indices per vertex, each parallel edge listed once.
    pub inc: Vec<Vec<usize>>,
    pub loops: Vec<Vec<usize>>,
}

impl Dense {
    pub fn new(g: &Multigraph) -> Dense {
        let verts: Vec<VertexId> = g.vertices.iter().copied().collect();
        let index: HashMap<VertexId, usize> =
            verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut inc = vec![Vec::new(); verts.len()];
        let mut loops = vec![Vec::new(); verts.len()];
        let mut edges = Vec::with_capacity(g.edges.len());
        for (&e, &(u, v)) in &g.edges {
            let (a, b) = (index[&u], index[&v]);
            let ei = edges.len();
            edges.push((e, a, b));
            if a == b {
                loops[a].push(ei);
            } else {
                inc[a].push(ei);
                inc[b].push(ei);
            }
        }
        Dense { verts, edges, inc, loops }
    }

    pub fn other(&self, ei: usize, x: usize) -> usize {
        let (_, a, b) = self.edges[ei];
        if a == x {
            b
        } else {
            a
        }
    }
}
