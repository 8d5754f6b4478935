use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{EdgeId, Graph, Sign, SignedGraph};

/// Outcome of suppressing every divalent vertex that does not support a loop.
///
/// Reduced edges take the smallest id among the original edges they replace.
/// `expansion` lists those original edges in walk order: from the smaller
/// endpoint for a non-loop edge, and for a loop starting with whichever of
/// its two end edges has the smaller id. Reduced vertices are the surviving
/// original vertices renumbered in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuppressionResult {
    pub reduced: SignedGraph,
    pub expansion: BTreeMap<EdgeId, Vec<EdgeId>>,
    /// Original vertex to reduced vertex; `None` for suppressed vertices.
    pub vertex_map: Vec<Option<usize>>,
    /// Reduced vertex to original vertex.
    pub original_vertex: Vec<usize>,
}

impl SuppressionResult {
    /// Original vertex sequence along the expansion of reduced edge `id`.
    pub fn expansion_walk(&self, original: &Graph, id: EdgeId) -> Option<Vec<usize>> {
        let reduced = self.reduced.graph().edge(id)?;
        let mut at = self.original_vertex[reduced.u];
        let mut walk = vec![at];
        for e in self.expansion.get(&id)? {
            at = original.edge(*e)?.other(at);
            walk.push(at);
        }
        Some(walk)
    }
}

struct Chain {
    u: usize,
    w: usize,
    edges: Vec<EdgeId>,
    sign: Sign,
}

impl Chain {
    fn reversed(self) -> Chain {
        let mut edges = self.edges;
        edges.reverse();
        Chain { u: self.w, w: self.u, edges, sign: self.sign }
    }

    fn is_loop(&self) -> bool {
        self.u == self.w
    }
}

/// Suppresses divalent vertices until only loop-supporting ones remain.
///
/// Vertices are suppressed from the highest index down, so a circle
/// component collapses onto a loop at its lowest-index vertex.
pub fn suppress_divalent(s: &SignedGraph) -> SuppressionResult {
    let g = s.graph();
    let n = g.vertex_count();
    let mut chains: BTreeMap<usize, Chain> = BTreeMap::new();
    let mut inc: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (i, (e, sign)) in s.edges_with_signs().enumerate() {
        chains.insert(i, Chain { u: e.u, w: e.v, edges: vec![e.id], sign });
        inc[e.u].insert(i);
        inc[e.v].insert(i);
    }
    let mut next_key = g.edge_count();
    let mut alive = vec![true; n];

    let degree = |inc: &BTreeSet<usize>, chains: &BTreeMap<usize, Chain>| -> (usize, bool) {
        let mut d = 0;
        let mut has_loop = false;
        for k in inc {
            if chains[k].is_loop() {
                d += 2;
                has_loop = true;
            } else {
                d += 1;
            }
        }
        (d, has_loop)
    };

    // suppressing never makes another vertex eligible, so one pass suffices
    for v in (0..n).rev() {
        let (d, has_loop) = degree(&inc[v], &chains);
        if d != 2 || has_loop {
            continue;
        }
        let keys: Vec<usize> = inc[v].iter().copied().collect();
        let (ka, kb) = (keys[0], keys[1]);
        let mut a = chains.remove(&ka).expect("incident chain");
        let mut b = chains.remove(&kb).expect("incident chain");
        if a.w != v {
            a = a.reversed();
        }
        if b.u != v {
            b = b.reversed();
        }
        inc[a.u].remove(&ka);
        inc[b.w].remove(&kb);
        inc[v].clear();
        alive[v] = false;
        let mut edges = a.edges;
        edges.extend(b.edges);
        let merged = Chain { u: a.u, w: b.w, edges, sign: a.sign * b.sign };
        inc[merged.u].insert(next_key);
        inc[merged.w].insert(next_key);
        chains.insert(next_key, merged);
        next_key += 1;
    }

    let mut vertex_map = vec![None; n];
    let mut original_vertex = Vec::new();
    for v in 0..n {
        if alive[v] {
            vertex_map[v] = Some(original_vertex.len());
            original_vertex.push(v);
        }
    }
    let mut expansion = BTreeMap::new();
    let mut reduced_edges = Vec::new();
    for (_, mut c) in chains {
        let needs_flip =
            if c.is_loop() { c.edges.len() > 1 && c.edges[0] > c.edges[c.edges.len() - 1] } else { c.u > c.w };
        if needs_flip {
            c = c.reversed();
        }
        let id = *c.edges.iter().min().expect("chain has edges");
        let map = |x: usize| vertex_map[x].expect("chain endpoint survives");
        reduced_edges.push((id, map(c.u), map(c.w), c.sign));
        expansion.insert(id, c.edges);
    }
    let reduced = SignedGraph::from_edges(original_vertex.len(), reduced_edges).expect("reduced graph is well formed");
    SuppressionResult { reduced, expansion, vertex_map, original_vertex }
}
