use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use super::blocks;
use crate::graph::{EdgeId, Graph, PathElement};
use crate::{Error, Result};

/// Backtracking circle search over the blocks of a graph.
///
/// Each circle is visited once, from its lowest-ranked vertex. Restricting
/// the allowed start vertices restricts the search to circles whose
/// lowest-ranked vertex is allowed, so ranking a set `S` first and starting
/// only from `S` visits exactly the circles that meet `S`.
pub struct CircleSearch<'g> {
    graph: &'g Graph,
    rank: Vec<usize>,
    start_allowed: Vec<bool>,
}

impl<'g> CircleSearch<'g> {
    /// Search every circle; vertices ranked by index.
    pub fn new(graph: &'g Graph) -> Self {
        let n = graph.vertex_count();
        CircleSearch { graph, rank: (0..n).collect(), start_allowed: vec![true; n] }
    }

    /// Search only circles through at least one vertex with `marked[v]`.
    pub fn through(graph: &'g Graph, marked: &[bool]) -> Self {
        let n = graph.vertex_count();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (!marked[v], v));
        let mut rank = vec![0; n];
        for (r, &v) in order.iter().enumerate() {
            rank[v] = r;
        }
        CircleSearch { graph, rank, start_allowed: marked.to_vec() }
    }

    /// Calls `visit(edges, vertices)` per circle, where `vertices[i]` is the
    /// vertex before `edges[i]` in the walk. Stops early on `Break`.
    pub fn run<B>(&self, mut visit: impl FnMut(&[EdgeId], &[usize]) -> ControlFlow<B>) -> ControlFlow<B> {
        let g = self.graph;
        for e in g.edges() {
            if e.is_loop() && self.start_allowed[e.u] {
                visit(&[e.id], &[e.u])?;
            }
        }
        let bd = blocks(g);
        for block in bd.blocks.iter().filter(|b| b.nontrivial && b.edges.len() >= 2) {
            // local adjacency restricted to the block: (edge id, other vertex)
            let mut adj: Vec<Vec<(EdgeId, usize)>> = vec![Vec::new(); g.vertex_count()];
            for id in &block.edges {
                let e = g.edge(*id).expect("block edge");
                adj[e.u].push((e.id, e.v));
                adj[e.v].push((e.id, e.u));
            }
            let mut starts: Vec<usize> = block.vertices.iter().copied().filter(|&v| self.start_allowed[v]).collect();
            starts.sort_by_key(|&v| self.rank[v]);
            let mut on_path = vec![false; g.vertex_count()];
            for s in starts {
                let mut state = Dfs {
                    adj: &adj,
                    rank: &self.rank,
                    start: s,
                    on_path: &mut on_path,
                    edges: Vec::new(),
                    vertices: vec![s],
                };
                state.on_path[s] = true;
                let flow = state.extend(s, &mut visit);
                state.on_path[s] = false;
                flow?;
            }
        }
        ControlFlow::Continue(())
    }
}

struct Dfs<'a> {
    adj: &'a [Vec<(EdgeId, usize)>],
    rank: &'a [usize],
    start: usize,
    on_path: &'a mut [bool],
    edges: Vec<EdgeId>,
    vertices: Vec<usize>,
}

impl Dfs<'_> {
    fn extend<B>(
        &mut self,
        at: usize,
        visit: &mut impl FnMut(&[EdgeId], &[usize]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        let adj = self.adj;
        for &(id, w) in &adj[at] {
            if w == self.start {
                // the two traversal directions differ in which end edge comes
                // first; keep the one whose first edge has the smaller id
                if let Some(&first) = self.edges.first() {
                    if id != first && first < id {
                        self.edges.push(id);
                        let flow = visit(&self.edges, &self.vertices);
                        self.edges.pop();
                        flow?;
                    }
                }
            } else if !self.on_path[w] && self.rank[w] > self.rank[self.start] {
                self.on_path[w] = true;
                self.edges.push(id);
                self.vertices.push(w);
                let flow = self.extend(w, visit);
                self.vertices.pop();
                self.edges.pop();
                self.on_path[w] = false;
                flow?;
            }
        }
        ControlFlow::Continue(())
    }
}

/// All circles of `g` (loops and digons included), each once, in
/// lexicographic order of their sorted edge-id sets.
pub fn enumerate_circles(g: &Graph, cap: usize) -> Result<Vec<PathElement>> {
    let mut found: Vec<(Vec<EdgeId>, PathElement)> = Vec::new();
    let flow = CircleSearch::new(g).run(|edges, _| {
        if found.len() == cap {
            return ControlFlow::Break(());
        }
        let c = PathElement::Circle { edges: edges.to_vec() }.canonical();
        found.push((c.edge_set(), c));
        ControlFlow::Continue(())
    });
    if flow.is_break() {
        return Err(Error::CircleCapExceeded { cap });
    }
    found.sort();
    Ok(found.into_iter().map(|(_, c)| c).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeId;
    use std::collections::BTreeSet;

    /// Every edge subset that induces a connected 2-regular subgraph.
    fn circles_oracle(g: &Graph) -> Vec<Vec<EdgeId>> {
        let m = g.edge_count();
        let mut out = Vec::new();
        for mask in 1u32..(1 << m) {
            let chosen: Vec<_> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| g.edges()[i]).collect();
            let sub = Graph::new(g.vertex_count(), chosen.iter().map(|e| (e.id, e.u, e.v))).unwrap();
            let deg = sub.degrees();
            if deg.iter().any(|&d| d != 0 && d != 2) {
                continue;
            }
            let touched: BTreeSet<usize> = chosen.iter().flat_map(|e| [e.u, e.v]).collect();
            let labels = sub.component_labels();
            let roots: BTreeSet<usize> = touched.iter().map(|&v| labels[v]).collect();
            if roots.len() == 1 {
                out.push(chosen.iter().map(|e| e.id).collect());
            }
        }
        out.sort();
        out
    }

    fn edge_sets(g: &Graph) -> Vec<Vec<EdgeId>> {
        enumerate_circles(g, 1_000_000).unwrap().iter().map(|c| c.edge_set()).collect()
    }

    #[test]
    fn k4_has_seven_circles() {
        let k4 = Graph::from_pairs(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let oracle = circles_oracle(&k4);
        assert_eq!(oracle.len(), 7);
        assert_eq!(edge_sets(&k4), oracle);
        let lengths: Vec<usize> = enumerate_circles(&k4, 100).unwrap().iter().map(|c| c.len()).collect();
        assert_eq!(lengths.iter().filter(|&&l| l == 3).count(), 4);
        assert_eq!(lengths.iter().filter(|&&l| l == 4).count(), 3);
    }

    #[test]
    fn loop_and_theta() {
        let lp = Graph::from_pairs(1, &[(0, 0)]).unwrap();
        assert_eq!(enumerate_circles(&lp, 10).unwrap(), vec![PathElement::Circle { edges: vec![EdgeId(0)] }]);

        let theta = Graph::from_pairs(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        let oracle = circles_oracle(&theta);
        assert_eq!(oracle.len(), 3);
        assert_eq!(edge_sets(&theta), oracle);
    }

    #[test]
    fn every_reported_circle_traces() {
        let g = Graph::from_pairs(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2), (4, 4), (4, 5), (5, 3), (3, 4)])
            .unwrap();
        let circles = enumerate_circles(&g, 1000).unwrap();
        assert_eq!(circles.iter().map(|c| c.edge_set()).collect::<Vec<_>>(), circles_oracle(&g));
        for c in &circles {
            c.trace(&g).unwrap();
        }
    }

    #[test]
    fn cap_is_enforced() {
        let k4 = Graph::from_pairs(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(enumerate_circles(&k4, 6), Err(Error::CircleCapExceeded { cap: 6 }));
        assert_eq!(enumerate_circles(&k4, 7).unwrap().len(), 7);
    }

    #[test]
    fn restricted_search_sees_exactly_circles_through_marked() {
        let k4 = Graph::from_pairs(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let marked = [false, false, true, true];
        let mut seen = Vec::new();
        let _ = CircleSearch::through(&k4, &marked).run(|edges, verts| {
            assert!(verts.iter().any(|&v| marked[v]));
            let mut s = edges.to_vec();
            s.sort();
            seen.push(s);
            ControlFlow::<()>::Continue(())
        });
        seen.sort();
        let expected: Vec<_> = circles_oracle(&k4)
            .into_iter()
            .filter(|c| {
                c.iter().any(|id| {
                    let e = k4.edge(*id).unwrap();
                    marked[e.u] || marked[e.v]
                })
            })
            .collect();
        assert_eq!(seen, expected);
    }

    proptest::proptest! {
        #[test]
        fn matches_subset_oracle(n in 1usize..6, pairs in proptest::collection::vec((0usize..6, 0usize..6), 0..10)) {
            let pairs: Vec<_> = pairs.into_iter().map(|(a, b)| (a % n, b % n)).collect();
            let g = Graph::from_pairs(n, &pairs).unwrap();
            proptest::prop_assert_eq!(edge_sets(&g), circles_oracle(&g));
        }
    }
}
