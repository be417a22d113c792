use std::collections::{BTreeMap, BTreeSet};

use super::{Dense, EdgeId, GraphError, Multigraph, VertexId};

/// A block of the loopless part of the graph, together with the loops that
/// sit on its non-cut vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

/// Blocks are computed on the graph with loops removed, so a loop never
/// creates a cut vertex. Loops at non-cut vertices belong to the unique block
/// of their vertex; loops at cut vertices are listed in `cut_vertex_loops`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub blocks: Vec<Block>,
    pub cut_vertices: BTreeSet<VertexId>,
    pub cut_vertex_loops: BTreeMap<VertexId, Vec<EdgeId>>,
    /// Block-tree incidences (block index, cut vertex).
    pub tree: Vec<(usize, VertexId)>,
    pub is_path: bool,
    pub middle_blocks_have_two_vertices: bool,
}

impl BlockDecomposition {
    pub fn cut_vertices_of(&self, block: usize) -> Vec<VertexId> {
        self.tree.iter().filter(|&&(b, _)| b == block).map(|&(_, v)| v).collect()
    }

    /// Blocks that are leaves of the block tree (every block when there is
    /// only one).
    pub fn end_blocks(&self) -> Vec<usize> {
        (0..self.blocks.len()).filter(|&b| self.cut_vertices_of(b).len() <= 1).collect()
    }

    /// Blocks in path order with the cut vertex between consecutive blocks,
    /// when the block tree is a path.
    pub fn chain(&self) -> Option<(Vec<usize>, Vec<VertexId>)> {
        if !self.is_path || self.blocks.is_empty() {
            return None;
        }
        let mut by_block: Vec<Vec<VertexId>> = vec![Vec::new(); self.blocks.len()];
        let mut by_cut: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
        for &(b, v) in &self.tree {
            by_block[b].push(v);
            by_cut.entry(v).or_default().push(b);
        }
        let start = (0..self.blocks.len()).find(|&b| by_block[b].len() <= 1)?;
        let mut order = vec![start];
        let mut cuts = Vec::new();
        let mut prev_cut: Option<VertexId> = None;
        let mut cur = start;
        loop {
            let next_cut = by_block[cur].iter().copied().find(|&v| Some(v) != prev_cut);
            let Some(c) = next_cut else { break };
            let next = by_cut[&c].iter().copied().find(|&b| b != cur)?;
            cuts.push(c);
            order.push(next);
            prev_cut = Some(c);
            cur = next;
        }
        Some((order, cuts))
    }
}

pub(super) fn block_structure(g: &Multigraph) -> Result<BlockDecomposition, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let d = Dense::new(g);
    let n = d.verts.len();
    let mut raw_blocks: Vec<Vec<usize>> = Vec::new();

    // Iterative Hopcroft-Tarjan over non-loop edges.
    let mut disc = vec![0usize; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut estack: Vec<usize> = Vec::new();
    for root in 0..n {
        if disc[root] != 0 {
            continue;
        }
        time += 1;
        disc[root] = time;
        low[root] = time;
        // frame: (vertex, edge used to enter, next incidence position)
        let mut frames: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(&(v, via, pos)) = frames.last() {
            if pos < d.inc[v].len() {
                let ei = d.inc[v][pos];
                if let Some(top) = frames.last_mut() {
                    top.2 += 1;
                }
                if ei == via {
                    continue;
                }
                let w = d.other(ei, v);
                if disc[w] == 0 {
                    estack.push(ei);
                    time += 1;
                    disc[w] = time;
                    low[w] = time;
                    frames.push((w, ei, 0));
                } else if disc[w] < disc[v] {
                    estack.push(ei);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                frames.pop();
                if let Some(&(p, _, _)) = frames.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] >= disc[p] {
                        let mut block = Vec::new();
                        while let Some(e) = estack.pop() {
                            block.push(e);
                            if e == via {
                                break;
                            }
                        }
                        raw_blocks.push(block);
                    }
                }
            }
        }
    }

    let mut blocks: Vec<Block> = Vec::new();
    let mut membership: Vec<Vec<usize>> = vec![Vec::new(); n];
    for edges in raw_blocks {
        let mut vs: BTreeSet<usize> = BTreeSet::new();
        for &ei in &edges {
            let (_, a, b) = d.edges[ei];
            vs.insert(a);
            vs.insert(b);
        }
        let bi = blocks.len();
        for &x in &vs {
            membership[x].push(bi);
        }
        let mut ids: Vec<EdgeId> = edges.iter().map(|&ei| d.edges[ei].0).collect();
        ids.sort_unstable();
        blocks.push(Block { vertices: vs.iter().map(|&x| d.verts[x]).collect(), edges: ids });
    }
    // A graph on one vertex forms a single block holding its loops.
    if blocks.is_empty() && n == 1 {
        membership[0].push(0);
        blocks.push(Block { vertices: vec![d.verts[0]], edges: Vec::new() });
    }

    let mut cut_vertices = BTreeSet::new();
    let mut tree = Vec::new();
    for x in 0..n {
        if membership[x].len() >= 2 {
            cut_vertices.insert(d.verts[x]);
            for &b in &membership[x] {
                tree.push((b, d.verts[x]));
            }
        }
    }
    tree.sort_unstable();

    let mut cut_vertex_loops: BTreeMap<VertexId, Vec<EdgeId>> = BTreeMap::new();
    for x in 0..n {
        for &li in &d.loops[x] {
            let e = d.edges[li].0;
            if membership[x].len() >= 2 {
                cut_vertex_loops.entry(d.verts[x]).or_default().push(e);
            } else if let Some(&b) = membership[x].first() {
                blocks[b].edges.push(e);
            }
        }
    }
    for b in &mut blocks {
        b.edges.sort_unstable();
    }

    let mut cuts_per_block = vec![0usize; blocks.len()];
    for &(b, _) in &tree {
        cuts_per_block[b] += 1;
    }
    let is_path = (0..n).all(|x| membership[x].len() <= 2) && cuts_per_block.iter().all(|&c| c <= 2);
    let middle_blocks_have_two_vertices = blocks
        .iter()
        .enumerate()
        .all(|(b, blk)| cuts_per_block[b] < 2 || blk.vertices.len() == 2);

    Ok(BlockDecomposition {
        blocks,
        cut_vertices,
        cut_vertex_loops,
        tree,
        is_path,
        middle_blocks_have_two_vertices,
    })
}
