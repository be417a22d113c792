//! Family membership by smoothing and template matching.

use std::collections::BTreeMap;

use serde::Serialize;

use super::spec::{
    base_template, ChainSpec, Colour, EndBlock, EndEdge, F0Template, F3Shape, FamilySpec, Role, Split,
    Subdivisions, TaggedGraph,
};
use super::CatalogError;
use crate::multigraph::{EdgeId, Multigraph, SmoothingMap, VertexId};

/// A replayable membership certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyWitness {
    pub spec: FamilySpec,
    /// Colour role of the template edge each input edge comes from.
    pub roles: BTreeMap<EdgeId, Colour>,
    /// Paths of input edges that were smoothed into one edge, keyed by the
    /// first edge of the path.
    pub smoothing: BTreeMap<EdgeId, Vec<EdgeId>>,
}

impl FamilyWitness {
    pub fn family(&self) -> &'static str {
        self.spec.family()
    }

    /// Regenerates the graph the witness describes.
    pub fn replay(&self) -> Result<Multigraph, CatalogError> {
        Ok(super::spec::family_generate(&self.spec)?.graph)
    }
}

/// Largest smoothed graph any non-chain template produces.
const MAX_SHAPE_VERTICES: usize = 5;

#[derive(Clone, Copy)]
struct ShapeEdge {
    id: EdgeId,
    len: usize,
    colour: Colour,
}

/// A smoothed graph: vertices in ascending order and, per vertex-index pair
/// `(i, j)` with `i <= j`, the smoothed edges with their path lengths.
struct Shape {
    verts: Vec<VertexId>,
    classes: BTreeMap<(usize, usize), Vec<ShapeEdge>>,
}

impl Shape {
    fn new(s: &SmoothingMap, colour_of: impl Fn(&[EdgeId]) -> Colour) -> Shape {
        let verts: Vec<VertexId> = s.graph.vertices().collect();
        let idx = |v: VertexId| verts.binary_search(&v).unwrap_or(0);
        let mut classes: BTreeMap<(usize, usize), Vec<ShapeEdge>> = BTreeMap::new();
        for (e, u, v) in s.graph.edges() {
            let path = &s.classes[&e];
            let (a, b) = (idx(u), idx(v));
            classes.entry((a.min(b), a.max(b))).or_default().push(ShapeEdge {
                id: e,
                len: path.len(),
                colour: colour_of(path),
            });
        }
        Shape { verts, classes }
    }

    fn multiplicity(&self, a: usize, b: usize) -> usize {
        self.classes.get(&(a.min(b), a.max(b))).map_or(0, Vec::len)
    }
}

/// Assignment of the edges of one input class to template edges: pairs of
/// (input edge, template edge) and the input edges that are longer than
/// their template edge.
#[derive(Clone)]
struct ClassMatch {
    pairs: Vec<(ShapeEdge, ShapeEdge)>,
}

fn excess(pair: &(ShapeEdge, ShapeEdge)) -> bool {
    pair.0.len > pair.1.len
}

/// All essentially different ways to match an input class to a template
/// class. Long input edges take a template edge no longer than themselves;
/// a strict stretch needs a non-black template edge. The remaining template
/// edges must all have length one and pair off with the short input edges.
fn class_options(t: &[ShapeEdge], s: &[ShapeEdge]) -> Vec<ClassMatch> {
    if t.len() != s.len() {
        return Vec::new();
    }
    let mut kinds: Vec<(usize, Colour, Vec<ShapeEdge>)> = Vec::new();
    for &te in t {
        match kinds.iter_mut().find(|k| k.0 == te.len && k.1 == te.colour) {
            Some(k) => k.2.push(te),
            None => kinds.push((te.len, te.colour, vec![te])),
        }
    }
    let mut long: Vec<ShapeEdge> = s.iter().copied().filter(|e| e.len > 1).collect();
    long.sort_by(|a, b| b.len.cmp(&a.len));
    let short: Vec<ShapeEdge> = s.iter().copied().filter(|e| e.len == 1).collect();

    struct Search<'a> {
        kinds: Vec<(usize, Colour, Vec<ShapeEdge>)>,
        taken: Vec<usize>,
        long: &'a [ShapeEdge],
        short: &'a [ShapeEdge],
        chosen: Vec<(ShapeEdge, ShapeEdge)>,
        out: Vec<ClassMatch>,
    }
    fn go(st: &mut Search, k: usize, demands: usize) {
        if k == st.long.len() {
            let rest: Vec<ShapeEdge> = st
                .kinds
                .iter()
                .zip(&st.taken)
                .flat_map(|(kind, &used)| kind.2[used..].iter().copied())
                .collect();
            if rest.len() == st.short.len() && rest.iter().all(|e| e.len == 1) {
                let mut pairs = st.chosen.clone();
                pairs.extend(st.short.iter().copied().zip(rest));
                st.out.push(ClassMatch { pairs });
            }
            return;
        }
        let se = st.long[k];
        for ki in 0..st.kinds.len() {
            let (len, colour, ref members) = st.kinds[ki];
            if st.taken[ki] == members.len() || len > se.len {
                continue;
            }
            let stretched = len < se.len;
            if stretched && colour == Colour::Black {
                continue;
            }
            let d = demands + usize::from(stretched && colour != Colour::Free);
            if d > 2 {
                continue;
            }
            let te = members[st.taken[ki]];
            st.taken[ki] += 1;
            st.chosen.push((se, te));
            go(st, k + 1, d);
            st.chosen.pop();
            st.taken[ki] -= 1;
        }
    }
    let taken = vec![0; kinds.len()];
    let mut st = Search { kinds, taken, long: &long, short: &short, chosen: Vec::new(), out: Vec::new() };
    go(&mut st, 0, 0);
    st.out
}

/// Picks distinct colours for up to two stretched red/blue edges.
fn assign_roles(demands: &[Colour]) -> Option<Vec<Role>> {
    let options = |c: Colour| -> Vec<Role> {
        [Role::Red, Role::Blue].into_iter().filter(|&r| c.allows(r)).collect()
    };
    match demands {
        [] => Some(Vec::new()),
        [a] => options(*a).first().map(|&r| vec![r]),
        [a, b] => {
            for ra in options(*a) {
                for rb in options(*b) {
                    if ra != rb {
                        return Some(vec![ra, rb]);
                    }
                }
            }
            None
        }
        _ => None,
    }
}

/// Matches the input shape to a template shape under the vertex bijection
/// `sigma` (input index to template index). Returns the edge pairs and the
/// roles of the non-free stretched pairs.
fn match_under(s: &Shape, t: &Shape, sigma: &[usize]) -> Option<(Vec<(ShapeEdge, ShapeEdge)>, Vec<Role>)> {
    let mut keys: Vec<((usize, usize), (usize, usize))> = Vec::new();
    for &(a, b) in s.classes.keys() {
        let (x, y) = (sigma[a], sigma[b]);
        keys.push(((a, b), (x.min(y), x.max(y))));
    }
    let mapped: usize = keys.iter().filter(|(_, tk)| t.classes.contains_key(tk)).count();
    if mapped != t.classes.len() || mapped != keys.len() {
        return None;
    }
    let mut options: Vec<Vec<ClassMatch>> = Vec::new();
    for (sk, tk) in &keys {
        let o = class_options(&t.classes[tk], &s.classes[sk]);
        if o.is_empty() {
            return None;
        }
        options.push(o);
    }

    fn combine(
        options: &[Vec<ClassMatch>],
        k: usize,
        acc: &mut Vec<(ShapeEdge, ShapeEdge)>,
    ) -> Option<(Vec<(ShapeEdge, ShapeEdge)>, Vec<Role>)> {
        let demands: Vec<Colour> =
            acc.iter().filter(|p| excess(p) && p.1.colour != Colour::Free).map(|p| p.1.colour).collect();
        if demands.len() > 2 {
            return None;
        }
        if k == options.len() {
            return assign_roles(&demands).map(|roles| (acc.clone(), roles));
        }
        for o in &options[k] {
            let before = acc.len();
            acc.extend(o.pairs.iter().copied());
            if let Some(found) = combine(options, k + 1, acc) {
                return Some(found);
            }
            acc.truncate(before);
        }
        None
    }
    combine(&options, 0, &mut Vec::new())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

struct TemplateShape {
    tagged: TaggedGraph,
    smoothed: SmoothingMap,
    shape: Shape,
}

fn template_shape(spec: &FamilySpec) -> Option<TemplateShape> {
    let tagged = base_template(spec).ok()?;
    let smoothed = tagged.graph.smooth();
    let shape = Shape::new(&smoothed, |path| {
        path.iter().map(|e| tagged.colours[e]).reduce(Colour::join).unwrap_or(Colour::Black)
    });
    Some(TemplateShape { tagged, smoothed, shape })
}

/// Candidate templates for an input shape: each parametric template has its
/// parameters read off the multiplicities under the vertex order `perm`.
fn candidates(s: &Shape, perm: &[usize]) -> Vec<FamilySpec> {
    let none = Subdivisions::default;
    let m = |a: usize, b: usize| s.multiplicity(perm[a], perm[b]);
    let loops = |a: usize| s.multiplicity(perm[a], perm[a]);
    let mut out = Vec::new();
    match s.verts.len() {
        4 => {
            if let (Some(r), Some(b)) = (m(0, 2).checked_sub(2), m(1, 3).checked_sub(2)) {
                out.push(FamilySpec::F1 { r, d: m(0, 3), b, subdiv: none() });
            }
        }
        3 => {
            if let (Some(r), Some(b)) = (m(0, 2).checked_sub(2), m(1, 2).checked_sub(2)) {
                out.push(FamilySpec::F2 { r, b, subdiv: none() });
            }
            let (r, j, l) = (m(0, 2).saturating_sub(1), m(1, 2).saturating_sub(1), loops(1));
            if r >= 1 && (j, l) != (0, 0) {
                out.push(FamilySpec::F3 { shape: F3Shape::K3 { r, j, l }, subdiv: none() });
            }
        }
        2 => {
            let (mult, l0, l1) = (m(0, 1), loops(0), loops(1));
            if mult >= 3 && l0 <= 1 && l1 <= 1 {
                out.push(FamilySpec::F3 {
                    shape: F3Shape::ChordedCycle { chords: mult - 2, loops: [l0, l1] },
                    subdiv: none(),
                });
            }
            if mult == 2 && l1 <= 1 {
                out.push(FamilySpec::F3 {
                    shape: F3Shape::LoopedCycle { loops: l0, neighbour_loop: l1 },
                    subdiv: none(),
                });
            }
            if mult >= 1 {
                out.push(FamilySpec::F3 { shape: F3Shape::TwoVertex { edges: mult, loops: [l0, l1] }, subdiv: none() });
            }
        }
        1 => out.push(FamilySpec::F3 { shape: F3Shape::Bouquet { loops: loops(0) }, subdiv: none() }),
        _ => {}
    }
    out
}

fn fixed_templates() -> Vec<FamilySpec> {
    [F0Template::K23, F0Template::K23Prime, F0Template::K23DoublePrime, F0Template::K23Star, F0Template::K4]
        .into_iter()
        .map(|template| FamilySpec::F0 { template, subdiv: Subdivisions::default() })
        .collect()
}

/// Turns a successful shape match into a witness.
fn build_witness(
    mut spec: FamilySpec,
    ts: &TemplateShape,
    input: &SmoothingMap,
    pairs: &[(ShapeEdge, ShapeEdge)],
    roles: &[Role],
) -> FamilyWitness {
    let mut subdiv = Subdivisions::default();
    let mut role_iter = roles.iter();
    for (se, te) in pairs.iter().filter(|p| excess(p)) {
        let role = if te.colour == Colour::Free { Role::Free } else { *role_iter.next().unwrap_or(&Role::Red) };
        let path = &ts.smoothed.classes[&te.id];
        let Some(&edge) = path.iter().find(|e| ts.tagged.colours[e].allows(role)) else { continue };
        let (u, v) = ts.tagged.graph.endpoints(edge).unwrap_or((0, 0));
        let split = Split::At { edge: format!("{u}-{v}"), len: 1 + se.len - te.len };
        match role {
            Role::Red => subdiv.red = Some(split),
            Role::Blue => subdiv.blue = Some(split),
            Role::Free => subdiv.free.push(split),
        }
    }
    if let Some(s) = spec.subdivisions_mut() {
        *s = subdiv;
    }
    let mut colours = BTreeMap::new();
    let mut smoothing = BTreeMap::new();
    for (se, te) in pairs {
        let path = &input.classes[&se.id];
        for &e in path {
            colours.insert(e, te.colour);
        }
        if path.len() > 1 {
            smoothing.insert(se.id, path.clone());
        }
    }
    FamilyWitness { spec, roles: colours, smoothing }
}

/// Matches a graph whose loopless part is 2-connected (or trivial) against
/// the templates of the first four families.
fn match_templates(g: &Multigraph) -> Option<FamilyWitness> {
    let smoothed = g.smooth();
    let s = Shape::new(&smoothed, |_| Colour::Black);
    let n = s.verts.len();
    if n > MAX_SHAPE_VERTICES {
        return None;
    }
    let perms = permutations(n);
    for spec in fixed_templates() {
        let Some(ts) = template_shape(&spec) else { continue };
        if ts.shape.verts.len() != n {
            continue;
        }
        for sigma in &perms {
            if let Some((pairs, roles)) = match_under(&s, &ts.shape, sigma) {
                return Some(build_witness(spec, &ts, &smoothed, &pairs, &roles));
            }
        }
    }
    for perm in &perms {
        'specs: for spec in candidates(&s, perm) {
            let Some(ts) = template_shape(&spec) else { continue };
            if ts.shape.verts.len() != n {
                continue;
            }
            // template vertex k + 1 sits on input vertex perm[k]
            let mut sigma = vec![0; n];
            for (k, &p) in perm.iter().enumerate() {
                match ts.shape.verts.binary_search(&(k as VertexId + 1)) {
                    Ok(ti) => sigma[p] = ti,
                    Err(_) => continue 'specs,
                }
            }
            if let Some((pairs, roles)) = match_under(&s, &ts.shape, &sigma) {
                return Some(build_witness(spec, &ts, &smoothed, &pairs, &roles));
            }
        }
    }
    None
}

/// How an end block of a chain looks from its attaching vertex.
enum EndMatch {
    /// Two vertices joined by `edges` plain edges, `far_loops` loops on the
    /// far vertex.
    Pair { edges: usize, far_loops: usize },
    Block(EndBlock),
}

/// Classifies the block with edge set `edges` (loops at `x` excluded) seen
/// from `x`.
fn match_end(g: &Multigraph, edges: &[EdgeId], x: VertexId) -> Option<(EndMatch, SmoothingMap)> {
    let mut sub = g.edge_subgraph(edges).ok()?;
    // a temporary loop keeps x from being smoothed away
    let pin = sub.add_edge(x, x);
    let mut sm = sub.smooth();
    sm.graph = sm.graph.delete_edge(pin).ok()?;
    sm.classes.remove(&pin);
    let verts: Vec<VertexId> = sm.graph.vertices().filter(|&v| v != x).collect();
    let between = |u: VertexId, v: VertexId| -> Vec<usize> {
        sm.graph
            .edges()
            .filter(|&(_, a, b)| (a, b) == (u.min(v), u.max(v)))
            .map(|(e, _, _)| sm.class_len(e))
            .collect()
    };
    let found = match verts.as_slice() {
        [p] => {
            let lens = between(x, *p);
            let far_loops = sm.graph.loop_count(*p);
            let long: Vec<usize> = lens.iter().copied().filter(|&l| l > 1).collect();
            match long.as_slice() {
                [] => Some(EndMatch::Pair { edges: lens.len(), far_loops }),
                [l] if far_loops <= 1 && lens.len() >= 2 => Some(EndMatch::Block(EndBlock {
                    xq: lens.len() - 1,
                    pq: 1,
                    subdivided: EndEdge::Pq,
                    len: l - 1,
                    q_loops: far_loops,
                })),
                _ => None,
            }
        }
        [a, b] => {
            if sm.graph.loop_count(*a) + sm.graph.loop_count(*b) > 0 {
                return None;
            }
            let shaped = |p: VertexId, q: VertexId| -> Option<EndBlock> {
                let (xp, xq, pq) = (between(x, p), between(x, q), between(p, q));
                if xp.len() != 1 || xq.is_empty() || pq.is_empty() || xq.iter().any(|&l| l > 1) {
                    return None;
                }
                let long_pq: Vec<usize> = pq.iter().copied().filter(|&l| l > 1).collect();
                if xp[0] == 1 && long_pq.len() <= 1 {
                    return Some(EndBlock {
                        xq: xq.len(),
                        pq: pq.len(),
                        subdivided: EndEdge::Pq,
                        len: long_pq.first().copied().unwrap_or(1),
                        q_loops: 0,
                    });
                }
                if xp[0] > 1 && long_pq.is_empty() && pq.len() <= 2 {
                    return Some(EndBlock { xq: xq.len(), pq: pq.len(), subdivided: EndEdge::Xp, len: xp[0], q_loops: 0 });
                }
                None
            };
            shaped(*a, *b).or_else(|| shaped(*b, *a)).map(EndMatch::Block)
        }
        _ => None,
    };
    found.map(|m| (m, sm))
}

fn chain_witness(g: &Multigraph, spec: ChainSpec, smoothings: &[SmoothingMap]) -> FamilyWitness {
    let mut roles: BTreeMap<EdgeId, Colour> = g.edge_ids().into_iter().map(|e| (e, Colour::Black)).collect();
    let mut smoothing = BTreeMap::new();
    for sm in smoothings {
        for (&e, path) in &sm.classes {
            if path.len() > 1 {
                for p in path {
                    roles.insert(*p, Colour::Red);
                }
                smoothing.insert(e, path.clone());
            }
        }
    }
    FamilyWitness { spec: FamilySpec::F4(spec), roles, smoothing }
}

/// A single block read as the end of a chain, with loops only at `x` (and,
/// for a two-vertex block, at the far vertex).
fn match_single_block(g: &Multigraph) -> Option<FamilyWitness> {
    let looped: Vec<VertexId> = g.vertices().filter(|&v| g.loop_count(v) > 0).collect();
    let xs: Vec<VertexId> = if looped.is_empty() { g.smooth().graph.vertices().collect() } else { looped };
    if xs.len() > MAX_SHAPE_VERTICES {
        return None;
    }
    for x in xs {
        let edges: Vec<EdgeId> = g.edges().filter(|&(_, u, v)| !(u == x && v == x)).map(|(e, _, _)| e).collect();
        let x_loops = g.loop_count(x);
        let Some((m, sm)) = match_end(g, &edges, x) else { continue };
        let spec = match m {
            EndMatch::Pair { edges, far_loops } => {
                ChainSpec { start: None, middle: vec![edges], end: None, loops: vec![x_loops, far_loops] }
            }
            EndMatch::Block(b) => ChainSpec { start: Some(b), middle: vec![], end: None, loops: vec![x_loops] },
        };
        return Some(chain_witness(g, spec, &[sm]));
    }
    None
}

/// Chain of blocks: path-shaped block tree, two-vertex middle blocks, and end
/// blocks of the allowed shapes.
fn match_chain(g: &Multigraph) -> Option<FamilyWitness> {
    let bd = g.block_structure().ok()?;
    if !bd.is_path || !bd.middle_blocks_have_two_vertices {
        return None;
    }
    let (order, cuts) = bd.chain()?;
    let loops_at = |v: VertexId| bd.cut_vertex_loops.get(&v).map_or(0, Vec::len);
    let first = &bd.blocks[order[0]];
    let last = &bd.blocks[order[order.len() - 1]];
    let (head, sm_head) = match_end(g, &first.edges, cuts[0])?;
    let (tail, sm_tail) = match_end(g, &last.edges, cuts[cuts.len() - 1])?;

    let mut middle = Vec::with_capacity(order.len());
    let mut loops = Vec::with_capacity(order.len() + 1);
    let start = match head {
        EndMatch::Pair { edges, far_loops } => {
            middle.push(edges);
            loops.push(far_loops);
            None
        }
        EndMatch::Block(b) => Some(b),
    };
    for (k, &bi) in order.iter().enumerate().skip(1).take(order.len().saturating_sub(2)) {
        loops.push(loops_at(cuts[k - 1]));
        middle.push(bd.blocks[bi].edges.len());
    }
    loops.push(loops_at(cuts[cuts.len() - 1]));
    let end = match tail {
        EndMatch::Pair { edges, far_loops } => {
            middle.push(edges);
            loops.push(far_loops);
            None
        }
        EndMatch::Block(b) => Some(b),
    };
    let spec = ChainSpec { start, middle, end, loops };
    Some(chain_witness(g, spec, &[sm_head, sm_tail]))
}

/// Decides membership of a connected graph in the union of the five
/// families and returns a witness. Time is linear in the number of edges
/// apart from the matching of a bounded-size smoothed graph.
pub fn family_member(g: &Multigraph) -> Result<Option<FamilyWitness>, CatalogError> {
    if !g.is_connected() {
        return Err(CatalogError::Disconnected);
    }
    let bd = g.block_structure()?;
    if bd.blocks.len() <= 1 {
        return Ok(match_templates(g).or_else(|| match_single_block(g)));
    }
    Ok(match_chain(g))
}
