use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::CatalogError;
use crate::multigraph::{EdgeId, Multigraph, VertexId};

/// Colour role of a template edge: which subdivisions it may carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Colour {
    /// Never subdivided.
    Black,
    Red,
    Blue,
    /// Both red and blue.
    Purple,
    /// Subdivided freely, without using up a colour.
    Free,
}

/// The kind of subdivision a spec asks for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Red,
    Blue,
    Free,
}

impl Colour {
    pub fn allows(self, role: Role) -> bool {
        matches!(
            (self, role),
            (Colour::Red | Colour::Purple, Role::Red) | (Colour::Blue | Colour::Purple, Role::Blue) | (Colour::Free, Role::Free)
        )
    }

    /// Colour of a path made of edges of the two colours.
    pub fn join(self, other: Colour) -> Colour {
        use Colour::*;
        match (self, other) {
            (Free, _) | (_, Free) => Free,
            (Black, c) | (c, Black) => c,
            (Red, Red) => Red,
            (Blue, Blue) => Blue,
            _ => Purple,
        }
    }

    fn from_flags(red: bool, blue: bool) -> Colour {
        match (red, blue) {
            (true, true) => Colour::Purple,
            (true, false) => Colour::Red,
            (false, true) => Colour::Blue,
            (false, false) => Colour::Black,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Red => "red",
            Role::Blue => "blue",
            Role::Free => "free",
        })
    }
}

/// One subdivision: a template edge replaced by a path of `len` edges. A bare
/// number picks the first eligible template edge; `edge` names the endpoint
/// pair as `"u-v"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Split {
    Len(usize),
    At { edge: String, len: usize },
}

impl Split {
    pub fn len(&self) -> usize {
        match self {
            Split::Len(n) | Split::At { len: n, .. } => *n,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subdivisions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub red: Option<Split>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blue: Option<Split>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub free: Vec<Split>,
}

impl Subdivisions {
    pub fn is_empty(&self) -> bool {
        self.red.is_none() && self.blue.is_none() && self.free.is_empty()
    }
}

/// The base graphs of the first family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum F0Template {
    /// `K_{2,3}`: every edge may be subdivided any number of times.
    K23,
    #[serde(rename = "K23'")]
    K23Prime,
    #[serde(rename = "K23''")]
    K23DoublePrime,
    #[serde(rename = "K23*")]
    K23Star,
    /// `K_4`: at most two edges subdivided.
    K4,
}

/// The shapes of the fourth family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum F3Shape {
    /// `K_3(r, j, l)` with `r >= 1`.
    K3 { r: usize, j: usize, l: usize },
    /// A cycle with a chord, further edges parallel to the chord (`chords`
    /// counts them all) and at most one loop at each end of the chord.
    ChordedCycle { chords: usize, loops: [usize; 2] },
    /// A chordless cycle with `loops` loops at one vertex and at most one
    /// loop at a neighbour.
    LoopedCycle { loops: usize, neighbour_loop: usize },
    /// A connected graph on two vertices. Each vertex with at most one loop
    /// allows one joining edge to be subdivided.
    TwoVertex { edges: usize, loops: [usize; 2] },
    /// A single vertex carrying loops.
    Bouquet { loops: usize },
}

/// Which edge of an end block carries the subdivision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EndEdge {
    /// The single edge from the attaching vertex `x` to `p`.
    Xp,
    /// One edge between `p` and `q`.
    Pq,
}

/// End block on the attaching vertex `x` and two further vertices `p`, `q`:
/// one edge `x-p`, `xq` parallel edges `x-q`, `pq` parallel edges `p-q`, and
/// the edge `subdivided` replaced by a path of `len` edges. With
/// `subdivided = xp` there are at most two `p-q` edges. When the only
/// `p-q` edge is the subdivided one, `q` may carry a single loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndBlock {
    pub xq: usize,
    pub pq: usize,
    pub subdivided: EndEdge,
    pub len: usize,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub q_loops: usize,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

/// A chain of blocks glued at cut vertices `c_0, ..., c_k`: an optional end
/// block attached at `c_0`, two-vertex blocks of the given multiplicities
/// joining `c_i` to `c_{i+1}`, an optional end block at `c_k`, and
/// `loops[i]` loops at `c_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSpec {
    #[serde(default)]
    pub start: Option<EndBlock>,
    #[serde(default)]
    pub middle: Vec<usize>,
    #[serde(default)]
    pub end: Option<EndBlock>,
    pub loops: Vec<usize>,
}

/// A member of one of the five families, as template plus subdivisions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum FamilySpec {
    F0 {
        template: F0Template,
        #[serde(default, skip_serializing_if = "Subdivisions::is_empty")]
        subdiv: Subdivisions,
    },
    F1 {
        r: usize,
        d: usize,
        b: usize,
        #[serde(default, skip_serializing_if = "Subdivisions::is_empty")]
        subdiv: Subdivisions,
    },
    F2 {
        r: usize,
        b: usize,
        #[serde(default, skip_serializing_if = "Subdivisions::is_empty")]
        subdiv: Subdivisions,
    },
    F3 {
        #[serde(flatten)]
        shape: F3Shape,
        #[serde(default, skip_serializing_if = "Subdivisions::is_empty")]
        subdiv: Subdivisions,
    },
    F4(ChainSpec),
}

impl FamilySpec {
    pub fn family(&self) -> &'static str {
        match self {
            FamilySpec::F0 { .. } => "F0",
            FamilySpec::F1 { .. } => "F1",
            FamilySpec::F2 { .. } => "F2",
            FamilySpec::F3 { .. } => "F3",
            FamilySpec::F4(_) => "F4",
        }
    }

    pub(crate) fn subdivisions_mut(&mut self) -> Option<&mut Subdivisions> {
        match self {
            FamilySpec::F0 { subdiv, .. }
            | FamilySpec::F1 { subdiv, .. }
            | FamilySpec::F2 { subdiv, .. }
            | FamilySpec::F3 { subdiv, .. } => Some(subdiv),
            FamilySpec::F4(_) => None,
        }
    }
}

/// A generated graph with the colour role of every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedGraph {
    pub graph: Multigraph,
    pub colours: BTreeMap<EdgeId, Colour>,
}

impl TaggedGraph {
    fn new() -> Self {
        TaggedGraph { graph: Multigraph::new(), colours: BTreeMap::new() }
    }

    fn add(&mut self, u: VertexId, v: VertexId, colour: Colour, times: usize) {
        for _ in 0..times {
            let e = self.graph.add_edge(u, v);
            self.colours.insert(e, colour);
        }
    }
}

fn invalid(message: impl Into<String>) -> CatalogError {
    CatalogError::InvalidSpec(message.into())
}

/// Template vertices are numbered from 1. For the `K_{2,3}` variants the
/// blue path is 1-2-4 and the red path 1-5-4; `K_{2,3}` itself has parts
/// {1, 4} and {2, 3, 5}.
fn f0_template(t: F0Template) -> TaggedGraph {
    use Colour::*;
    let mut g = TaggedGraph::new();
    let paths = |g: &mut TaggedGraph, blue: Colour, red: Colour| {
        g.add(1, 2, blue, 1);
        g.add(2, 4, blue, 1);
        g.add(1, 5, red, 1);
        g.add(5, 4, red, 1);
    };
    match t {
        F0Template::K23 => {
            paths(&mut g, Free, Free);
            g.add(1, 3, Free, 1);
            g.add(3, 4, Free, 1);
        }
        F0Template::K23Prime => {
            paths(&mut g, Blue, Red);
            g.add(3, 4, Black, 1);
            g.add(1, 3, Black, 2);
        }
        F0Template::K23DoublePrime => {
            paths(&mut g, Blue, Red);
            g.add(1, 3, Black, 1);
            g.add(3, 4, Black, 1);
            g.add(3, 3, Black, 1);
        }
        F0Template::K23Star => {
            paths(&mut g, Blue, Red);
            g.add(1, 3, Black, 2);
            g.add(3, 4, Black, 2);
        }
        F0Template::K4 => {
            for (u, v) in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)] {
                g.add(u, v, Purple, 1);
            }
        }
    }
    g
}

/// `G_1(r, d, b)` on vertices 1..4: red class 1-3 of size `r + 2`, blue
/// class 2-4 of size `b + 2`, `d` diagonal edges 1-4, and the single edges
/// 1-2 and 3-4 whose colours depend on which parameters vanish. In the bare
/// `G_1` every edge takes either role.
fn g1_template(r: usize, d: usize, b: usize) -> TaggedGraph {
    let mut g = TaggedGraph::new();
    let bare = r == 0 && d == 0 && b == 0;
    g.add(1, 3, if bare { Colour::Purple } else { Colour::Red }, r + 2);
    g.add(2, 4, if bare { Colour::Purple } else { Colour::Blue }, b + 2);
    g.add(1, 4, Colour::Black, d);
    g.add(1, 2, Colour::from_flags(r == 0 && d == 0, b == 0), 1);
    g.add(3, 4, Colour::from_flags(r == 0, b == 0 && d == 0), 1);
    g
}

/// `2K_3(r, b)` on vertices 1..3: red class 1-3 of size `r + 2`, blue class
/// 2-3 of size `b + 2`, and a black pair 1-2.
fn two_k3_template(r: usize, b: usize) -> TaggedGraph {
    let mut g = TaggedGraph::new();
    g.add(1, 3, Colour::Red, r + 2);
    g.add(2, 3, Colour::Blue, b + 2);
    g.add(1, 2, Colour::Black, 2);
    g
}

/// `K_3(r, j, l)` on vertices 1..3: one edge 1-2, `r + 1` edges 1-3,
/// `j + 1` edges 2-3 and `l` loops at 2. Colours are per parameter case.
fn k3_template(r: usize, j: usize, l: usize) -> Result<TaggedGraph, CatalogError> {
    use Colour::*;
    if r == 0 {
        return Err(invalid("K3(r, j, l) needs r >= 1"));
    }
    let big_r = r >= 2;
    // colours of (1-2, 1-3, 2-3)
    let (a, c, b) = match (big_r, j, l) {
        (false, 1, 0) => (Purple, Red, Blue),
        (true, 1, 0) => (Blue, Red, Blue),
        (_, j, 0) if j >= 2 => (Black, Red, Blue),
        (false, 0, 0 | 1) => (Purple, Red, Purple),
        (true, 0, 0 | 1) => (Blue, Red, Blue),
        (false, _, 1) => (Red, Red, Blue),
        (true, _, 1) => (Black, Red, Blue),
        (false, 0, _) => (Red, Red, Red),
        (false, _, _) => (Red, Red, Black),
        (true, _, _) => (Black, Red, Black),
    };
    let mut g = TaggedGraph::new();
    g.add(1, 3, c, r + 1);
    g.add(1, 2, a, 1);
    g.add(2, 3, b, j + 1);
    g.add(2, 2, Black, l);
    Ok(g)
}

fn f3_template(shape: &F3Shape) -> Result<TaggedGraph, CatalogError> {
    use Colour::*;
    let mut g = TaggedGraph::new();
    match *shape {
        F3Shape::K3 { r, j, l } => return k3_template(r, j, l),
        F3Shape::ChordedCycle { chords, loops } => {
            if chords == 0 || loops.iter().any(|&l| l > 1) {
                return Err(invalid("a chorded cycle needs a chord and at most one loop at each end"));
            }
            g.add(1, 2, Black, chords);
            g.add(1, 2, Free, 2);
            g.add(1, 1, Black, loops[0]);
            g.add(2, 2, Black, loops[1]);
        }
        F3Shape::LoopedCycle { loops, neighbour_loop } => {
            if neighbour_loop > 1 {
                return Err(invalid("at most one loop at the neighbour"));
            }
            g.add(1, 2, Black, 1);
            g.add(1, 2, Free, 1);
            g.add(1, 1, Black, loops);
            g.add(2, 2, Black, neighbour_loop);
        }
        F3Shape::TwoVertex { edges, loops } => {
            if edges == 0 {
                return Err(invalid("two vertices need at least one joining edge"));
            }
            // each vertex with at most one loop lets one more joining edge
            // be subdivided
            let roles = [Red, Blue];
            let open = loops.iter().filter(|&&l| l <= 1).count();
            for k in 0..edges {
                g.add(1, 2, if k < open { roles[k] } else { Black }, 1);
            }
            g.add(1, 1, Black, loops[0]);
            g.add(2, 2, Black, loops[1]);
        }
        F3Shape::Bouquet { loops } => {
            g.graph.add_vertex(1);
            g.add(1, 1, Black, loops);
        }
    }
    Ok(g)
}

fn end_block(g: &mut TaggedGraph, x: VertexId, block: &EndBlock) -> Result<(), CatalogError> {
    if block.xq == 0 || block.pq == 0 || block.len == 0 {
        return Err(invalid("end block multiplicities and length must be positive"));
    }
    if block.subdivided == EndEdge::Xp && block.pq > 2 {
        return Err(invalid("subdividing x-p allows at most two p-q edges"));
    }
    if block.q_loops > 1 || (block.q_loops == 1 && (block.subdivided != EndEdge::Pq || block.pq != 1)) {
        return Err(invalid("a loop at q needs a single subdivided p-q edge"));
    }
    let p = g.graph.fresh_vertex();
    let q = g.graph.fresh_vertex();
    let path = |g: &mut TaggedGraph, u: VertexId, v: VertexId| {
        let mut prev = u;
        for _ in 1..block.len {
            let w = g.graph.fresh_vertex();
            g.add(prev, w, Colour::Red, 1);
            prev = w;
        }
        g.add(prev, v, Colour::Red, 1);
    };
    match block.subdivided {
        EndEdge::Xp => {
            path(g, x, p);
            g.add(p, q, Colour::Red, block.pq);
        }
        EndEdge::Pq => {
            g.add(x, p, Colour::Black, 1);
            path(g, p, q);
            g.add(p, q, Colour::Red, block.pq - 1);
        }
    }
    g.add(x, q, Colour::Black, block.xq);
    g.add(q, q, Colour::Black, block.q_loops);
    Ok(())
}

fn chain(spec: &ChainSpec) -> Result<TaggedGraph, CatalogError> {
    if spec.loops.len() != spec.middle.len() + 1 {
        return Err(invalid("a chain needs one loop count per cut vertex"));
    }
    if spec.middle.contains(&0) {
        return Err(invalid("middle blocks need at least one edge"));
    }
    let mut g = TaggedGraph::new();
    let cuts: Vec<VertexId> = (0..spec.loops.len()).map(|_| g.graph.fresh_vertex()).collect();
    if let Some(b) = &spec.start {
        end_block(&mut g, cuts[0], b)?;
    }
    for (i, &m) in spec.middle.iter().enumerate() {
        g.add(cuts[i], cuts[i + 1], Colour::Black, m);
    }
    if let Some(b) = &spec.end {
        end_block(&mut g, cuts[cuts.len() - 1], b)?;
    }
    for (&c, &l) in cuts.iter().zip(&spec.loops) {
        g.add(c, c, Colour::Black, l);
    }
    Ok(g)
}

fn parse_pair(text: &str) -> Result<(VertexId, VertexId), CatalogError> {
    let bad = || invalid(format!("edge selector `{text}` is not of the form u-v"));
    let (a, b) = text.split_once('-').ok_or_else(bad)?;
    let u: VertexId = a.trim().parse().map_err(|_| bad())?;
    let v: VertexId = b.trim().parse().map_err(|_| bad())?;
    Ok((u.min(v), u.max(v)))
}

fn apply_subdivisions(mut g: TaggedGraph, subdiv: &Subdivisions) -> Result<TaggedGraph, CatalogError> {
    let mut used: BTreeSet<EdgeId> = BTreeSet::new();
    let requests = subdiv
        .red
        .iter()
        .map(|s| (s, Role::Red))
        .chain(subdiv.blue.iter().map(|s| (s, Role::Blue)))
        .chain(subdiv.free.iter().map(|s| (s, Role::Free)));
    for (split, role) in requests {
        let len = split.len();
        if len == 0 {
            return Err(invalid("subdivision lengths start at 1"));
        }
        if len == 1 {
            continue;
        }
        let pair = match split {
            Split::At { edge, .. } => Some(parse_pair(edge)?),
            Split::Len(_) => None,
        };
        let target = g
            .graph
            .edges()
            .find(|&(e, u, v)| {
                u != v && !used.contains(&e) && g.colours[&e].allows(role) && pair.map_or(true, |p| p == (u, v))
            })
            .map(|(e, _, _)| e);
        let Some(e) = target else {
            return Err(CatalogError::IllegalRole { role, edge: pair.map(|(u, v)| format!("{u}-{v}")) });
        };
        used.insert(e);
        let colour = g.colours[&e];
        let (graph, path) = g.graph.subdivide_edge(e, len)?;
        g.graph = graph;
        for p in path {
            g.colours.insert(p, colour);
        }
    }
    Ok(g)
}

/// Builds the family member described by `spec`, with colour roles.
pub fn family_generate(spec: &FamilySpec) -> Result<TaggedGraph, CatalogError> {
    let (base, subdiv) = match spec {
        FamilySpec::F0 { template, subdiv } => (f0_template(*template), subdiv),
        FamilySpec::F1 { r, d, b, subdiv } => (g1_template(*r, *d, *b), subdiv),
        FamilySpec::F2 { r, b, subdiv } => (two_k3_template(*r, *b), subdiv),
        FamilySpec::F3 { shape, subdiv } => (f3_template(shape)?, subdiv),
        FamilySpec::F4(c) => return chain(c),
    };
    let is_k23 = matches!(spec, FamilySpec::F0 { template: F0Template::K23, .. });
    if !is_k23 && !matches!(spec, FamilySpec::F3 { .. }) && !subdiv.free.is_empty() {
        return Err(CatalogError::IllegalRole { role: Role::Free, edge: None });
    }
    apply_subdivisions(base, subdiv)
}

/// The unsubdivided template of a non-chain spec.
pub(crate) fn base_template(spec: &FamilySpec) -> Result<TaggedGraph, CatalogError> {
    match spec {
        FamilySpec::F0 { template, .. } => Ok(f0_template(*template)),
        FamilySpec::F1 { r, d, b, .. } => Ok(g1_template(*r, *d, *b)),
        FamilySpec::F2 { r, b, .. } => Ok(two_k3_template(*r, *b)),
        FamilySpec::F3 { shape, .. } => f3_template(shape),
        FamilySpec::F4(c) => chain(c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bicircular::bicircular;

    fn spec(json: &str) -> FamilySpec {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn json_forms() {
        let s = spec(r#"{"family":"F1","r":1,"d":3,"b":1,"subdiv":{"red":2,"blue":1}}"#);
        assert_eq!(
            s,
            FamilySpec::F1 {
                r: 1,
                d: 3,
                b: 1,
                subdiv: Subdivisions { red: Some(Split::Len(2)), blue: Some(Split::Len(1)), free: vec![] }
            }
        );
        let k3 = spec(r#"{"family":"F3","case":"k3","r":1,"j":2,"l":0,"subdiv":{"blue":{"edge":"2-3","len":3}}}"#);
        let back: FamilySpec = serde_json::from_str(&serde_json::to_string(&k3).unwrap()).unwrap();
        assert_eq!(back, k3);
        let chain = spec(r#"{"family":"F4","start":{"xq":2,"pq":2,"subdivided":"pq","len":2},"middle":[1,3],"loops":[0,1,0]}"#);
        assert_eq!(serde_json::from_str::<FamilySpec>(&serde_json::to_string(&chain).unwrap()).unwrap(), chain);
    }

    #[test]
    fn g1_sizes() {
        let g = family_generate(&FamilySpec::F1 { r: 1, d: 3, b: 1, subdiv: Subdivisions::default() }).unwrap();
        assert_eq!(g.graph.edge_count(), 11);
        let g = family_generate(&spec(r#"{"family":"F1","r":1,"d":3,"b":1,"subdiv":{"red":2,"blue":3}}"#)).unwrap();
        assert_eq!(g.graph.edge_count(), 14);
        assert_eq!(g.graph.vertex_count(), 7);
    }

    #[test]
    fn two_k3_non_spanning_circuits() {
        let g = family_generate(&FamilySpec::F2 { r: 1, b: 1, subdiv: Subdivisions::default() }).unwrap();
        assert_eq!(g.graph.edge_count(), 8);
        let m = bicircular(&g.graph).unwrap();
        let small: Vec<Vec<u32>> = m.circuits().into_iter().filter(|c| c.len() <= m.rank()).collect();
        // the red class is 1,2,3 and the blue class 4,5,6
        assert_eq!(small, vec![vec![1, 2, 3], vec![4, 5, 6]]);
    }

    #[test]
    fn black_edges_refuse_subdivision() {
        let s = spec(r#"{"family":"F2","r":0,"b":0,"subdiv":{"red":{"edge":"1-2","len":2}}}"#);
        assert!(matches!(family_generate(&s), Err(CatalogError::IllegalRole { .. })));
        let s = spec(r#"{"family":"F1","r":0,"d":0,"b":0,"subdiv":{"free":[2]}}"#);
        assert!(family_generate(&s).is_err());
    }

    #[test]
    fn degenerate_g1_colours() {
        let g = g1_template(0, 0, 0);
        let c: Vec<Colour> = g.colours.values().copied().collect();
        assert_eq!(&c[4..], &[Colour::Purple, Colour::Purple]);
        let g = g1_template(0, 1, 1);
        let c: Vec<Colour> = g.colours.values().copied().collect();
        assert_eq!(&c[6..], &[Colour::Black, Colour::Red]);
    }

    #[test]
    fn chain_shape() {
        let s = ChainSpec {
            start: Some(EndBlock { xq: 1, pq: 2, subdivided: EndEdge::Xp, len: 3, q_loops: 0 }),
            middle: vec![2, 1],
            end: None,
            loops: vec![0, 2, 1],
        };
        let g = chain(&s).unwrap();
        // x-p path of 3, p-q double, x-q single, then blocks of 2 and 1 edges
        assert_eq!(g.graph.edge_count(), 3 + 2 + 1 + 2 + 1 + 3);
        assert!(g.graph.is_connected());
        let bd = g.graph.block_structure().unwrap();
        assert!(bd.is_path);
    }
}
