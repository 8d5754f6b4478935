//! Unsigned structure: blocks, isthmi, megablocks, circles, and suppression
//! of divalent vertices.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{EdgeId, Graph};

mod circles;
mod suppress;

pub use circles::{enumerate_circles, CircleSearch};
pub use suppress::{suppress_divalent, SuppressionResult};

/// A block: a maximal set of edges any two of which share a circle, or an
/// isolated vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    /// Sorted edge ids; empty for an isolated vertex.
    pub edges: Vec<EdgeId>,
    /// Sorted vertices.
    pub vertices: Vec<usize>,
    /// Whether the block contains a circle. Loops count.
    pub nontrivial: bool,
}

impl Block {
    pub fn is_isthmus(&self, g: &Graph) -> bool {
        self.edges.len() == 1 && !g.edge(self.edges[0]).is_some_and(|e| e.is_loop())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// Edge blocks ordered by smallest edge id, then isolated vertices.
    pub blocks: Vec<Block>,
    /// Vertices lying in two or more blocks.
    pub cutpoints: Vec<usize>,
    // block index per edge index
    edge_block: Vec<usize>,
}

impl BlockDecomposition {
    /// Index into [`BlockDecomposition::blocks`] of the block holding the
    /// edge at position `edge_index` of [`Graph::edges`].
    pub fn block_of_index(&self, edge_index: usize) -> usize {
        self.edge_block[edge_index]
    }

    pub fn block_of(&self, g: &Graph, id: EdgeId) -> Option<usize> {
        g.index_of(id).map(|i| self.edge_block[i])
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = (usize, &Block)> + '_ {
        self.blocks.iter().enumerate().filter(|(_, b)| b.nontrivial)
    }

    /// Isthmus flag per edge index.
    pub fn isthmus_flags(&self, g: &Graph) -> Vec<bool> {
        self.edge_block.iter().map(|&b| self.blocks[b].is_isthmus(g)).collect()
    }
}

/// Biconnected decomposition with every loop as its own (nontrivial) block
/// and every isolated vertex as a trivial block.
pub fn blocks(g: &Graph) -> BlockDecomposition {
    let n = g.vertex_count();
    let edges = g.edges();
    let inc = g.incidence();
    let mut groups: Vec<Vec<usize>> = Vec::new();

    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut edge_stack: Vec<usize> = Vec::new();
    // (vertex, tree edge into it, next incidence position)
    let mut frames: Vec<(usize, Option<usize>, usize)> = Vec::new();

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        frames.push((root, None, 0));
        while let Some(frame) = frames.last_mut() {
            let (v, parent_edge, pos) = *frame;
            if pos < inc[v].len() {
                frame.2 += 1;
                let (ei, w) = inc[v][pos];
                if edges[ei].is_loop() || Some(ei) == parent_edge {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    edge_stack.push(ei);
                    frames.push((w, Some(ei), 0));
                } else if disc[w] < disc[v] {
                    edge_stack.push(ei);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                frames.pop();
                if let (Some(&(u, _, _)), Some(tree_edge)) = (frames.last(), parent_edge) {
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        let mut group = Vec::new();
                        while let Some(ei) = edge_stack.pop() {
                            group.push(ei);
                            if ei == tree_edge {
                                break;
                            }
                        }
                        groups.push(group);
                    }
                }
            }
        }
    }
    for (i, e) in edges.iter().enumerate() {
        if e.is_loop() {
            groups.push(vec![i]);
        }
    }

    let mut blocks: Vec<Block> = groups
        .into_iter()
        .map(|group| {
            let has_loop = group.iter().any(|&i| edges[i].is_loop());
            let nontrivial = has_loop || group.len() >= 2;
            let mut ids: Vec<EdgeId> = group.iter().map(|&i| edges[i].id).collect();
            ids.sort();
            let vertices: BTreeSet<usize> = group.iter().flat_map(|&i| [edges[i].u, edges[i].v]).collect();
            Block { edges: ids, vertices: vertices.into_iter().collect(), nontrivial }
        })
        .collect();
    blocks.sort_by_key(|b| b.edges[0]);
    let degrees = g.degrees();
    for v in 0..n {
        if degrees[v] == 0 {
            blocks.push(Block { edges: Vec::new(), vertices: vec![v], nontrivial: false });
        }
    }

    let mut edge_block = vec![0; edges.len()];
    let mut membership = vec![0usize; n];
    for (b, block) in blocks.iter().enumerate() {
        for id in &block.edges {
            edge_block[g.index_of(*id).expect("block edge")] = b;
        }
        for &v in &block.vertices {
            membership[v] += 1;
        }
    }
    let cutpoints = (0..n).filter(|&v| membership[v] >= 2).collect();
    BlockDecomposition { blocks, cutpoints, edge_block }
}

/// Edges whose removal disconnects their component. Loops never qualify.
pub fn isthmi(g: &Graph) -> Vec<EdgeId> {
    let bd = blocks(g);
    let mut out: Vec<EdgeId> = bd.blocks.iter().filter(|b| b.is_isthmus(g)).map(|b| b.edges[0]).collect();
    out.sort();
    out
}

/// A maximal connected union of nontrivial blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Megablock {
    pub edges: Vec<EdgeId>,
    pub vertices: Vec<usize>,
}

/// Megablocks ordered by smallest edge id.
pub fn megablocks(g: &Graph) -> Vec<Megablock> {
    megablocks_of(&blocks(g))
}

pub fn megablocks_of(bd: &BlockDecomposition) -> Vec<Megablock> {
    let nontrivial: Vec<&Block> = bd.blocks.iter().filter(|b| b.nontrivial).collect();
    let k = nontrivial.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    // first nontrivial block seen at each vertex
    let mut owner: alloc::collections::BTreeMap<usize, usize> = Default::default();
    for (i, b) in nontrivial.iter().enumerate() {
        for &v in &b.vertices {
            if let Some(&j) = owner.get(&v) {
                let (a, c) = (find(&mut parent, i), find(&mut parent, j));
                if a != c {
                    parent[a.max(c)] = a.min(c);
                }
            } else {
                owner.insert(v, i);
            }
        }
    }
    let mut out: Vec<Megablock> = Vec::new();
    let mut slot: alloc::collections::BTreeMap<usize, usize> = Default::default();
    for i in 0..k {
        let r = find(&mut parent, i);
        let idx = *slot.entry(r).or_insert_with(|| {
            out.push(Megablock { edges: Vec::new(), vertices: Vec::new() });
            out.len() - 1
        });
        out[idx].edges.extend(nontrivial[i].edges.iter().copied());
        out[idx].vertices.extend(nontrivial[i].vertices.iter().copied());
    }
    for m in &mut out {
        m.edges.sort();
        m.vertices.sort();
        m.vertices.dedup();
    }
    out.sort_by_key(|m| m.edges[0]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, pairs: &[(usize, usize)]) -> Graph {
        Graph::from_pairs(n, pairs).unwrap()
    }

    fn ids(v: &[usize]) -> Vec<EdgeId> {
        v.iter().map(|&i| EdgeId(i)).collect()
    }

    // brute force: removing the edge increases the component count
    fn isthmi_oracle(graph: &Graph) -> Vec<EdgeId> {
        let base = graph.component_count();
        graph
            .edges()
            .iter()
            .filter(|e| graph.edge_subgraph(|f| f.id != e.id).component_count() > base)
            .map(|e| e.id)
            .collect()
    }

    #[test]
    fn triangle_with_pendant() {
        let gr = g(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]);
        let bd = blocks(&gr);
        assert_eq!(bd.blocks.len(), 2);
        assert_eq!(bd.blocks[0].edges, ids(&[0, 1, 2]));
        assert!(bd.blocks[0].nontrivial);
        assert_eq!(bd.blocks[1].edges, ids(&[3]));
        assert!(!bd.blocks[1].nontrivial);
        assert_eq!(bd.cutpoints, vec![2]);
        assert_eq!(isthmi(&gr), ids(&[3]));
    }

    #[test]
    fn path_and_cycle() {
        let p4 = g(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(blocks(&p4).blocks.len(), 3);
        assert_eq!(isthmi(&p4), ids(&[0, 1, 2]));
        assert!(megablocks(&p4).is_empty());
        let c4 = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(isthmi(&c4).is_empty());
    }

    #[test]
    fn bowtie_and_dumbbell() {
        let bowtie = g(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]);
        let bd = blocks(&bowtie);
        assert_eq!(bd.nontrivial().count(), 2);
        assert_eq!(bd.cutpoints, vec![2]);
        let mb = megablocks(&bowtie);
        assert_eq!(mb.len(), 1);
        assert_eq!(mb[0].edges, ids(&[0, 1, 2, 3, 4, 5]));

        let dumbbell = g(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)]);
        let mb = megablocks(&dumbbell);
        assert_eq!(mb.len(), 2);
        assert_eq!(mb[0].edges, ids(&[0, 1, 2]));
        assert_eq!(mb[1].edges, ids(&[4, 5, 6]));
    }

    #[test]
    fn loops_parallel_edges_and_isolated_vertices() {
        let gr = g(4, &[(0, 0), (0, 1), (0, 1), (1, 2)]);
        let bd = blocks(&gr);
        assert_eq!(bd.blocks.len(), 4);
        assert_eq!(bd.blocks[0].edges, ids(&[0]));
        assert!(bd.blocks[0].nontrivial);
        assert_eq!(bd.blocks[1].edges, ids(&[1, 2]));
        assert!(bd.blocks[1].nontrivial);
        assert_eq!(bd.blocks[2].edges, ids(&[3]));
        assert_eq!(bd.blocks[3].vertices, vec![3]);
        assert_eq!(bd.cutpoints, vec![0, 1]);
        assert_eq!(isthmi(&gr), ids(&[3]));
        // the loop and the digon share vertex 0
        assert_eq!(megablocks(&gr).len(), 1);
    }

    #[test]
    fn isthmi_match_removal_oracle_on_fixed_graphs() {
        let cases = [
            g(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 4), (4, 5)]),
            g(5, &[(0, 1), (1, 0), (1, 2), (2, 3), (3, 1), (3, 4)]),
            g(3, &[]),
        ];
        for gr in &cases {
            assert_eq!(isthmi(gr), isthmi_oracle(gr));
        }
    }
}
