//! Balance of signed graphs, decided by two independent routes: a switching
//! 2-colouring that extracts a negative circle on failure, and a direct test
//! that the negative edges form a cut.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{EdgeId, Graph, PathElement, SignedGraph};
use crate::structure::{blocks, suppress_divalent};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceReport {
    pub balanced: bool,
    /// Sorted vertex set `X` whose cut is exactly the negative edge set.
    /// Present iff balanced with at least one negative edge. The smallest
    /// vertex of every component lies outside `X`.
    pub witness_cut: Option<Vec<usize>>,
    /// A negative circle; present iff unbalanced.
    pub witness_circle: Option<PathElement>,
}

/// Edges with exactly one endpoint in `x` (given as a membership mask).
pub fn cut_edges(g: &Graph, in_x: &[bool]) -> Vec<EdgeId> {
    g.edges().iter().filter(|e| in_x[e.u] != in_x[e.v]).map(|e| e.id).collect()
}

/// Balance by switching: colour each component so positive edges join equal
/// colours and negative edges join different colours.
pub fn is_balanced_switching(s: &SignedGraph) -> BalanceReport {
    let g = s.graph();
    let n = g.vertex_count();
    if let Some(e) = s.negative_edges().find(|e| e.is_loop()) {
        return BalanceReport {
            balanced: false,
            witness_cut: None,
            witness_circle: Some(PathElement::Circle { edges: vec![e.id] }),
        };
    }
    let inc = g.incidence();
    let mut color: Vec<Option<bool>> = vec![None; n];
    let mut parent_edge: Vec<Option<usize>> = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if color[root].is_some() {
            continue;
        }
        color[root] = Some(false);
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            let cv = color[v].expect("queued vertices are coloured");
            for &(ei, w) in &inc[v] {
                let e = &g.edges()[ei];
                if e.is_loop() {
                    continue;
                }
                let want = cv ^ s.sign_at(ei).is_negative();
                match color[w] {
                    None => {
                        color[w] = Some(want);
                        parent_edge[w] = Some(ei);
                        depth[w] = depth[v] + 1;
                        queue.push_back(w);
                    }
                    Some(cw) if cw != want => {
                        let circle = fundamental_circle(g, &parent_edge, &depth, v, w, ei);
                        return BalanceReport { balanced: false, witness_cut: None, witness_circle: Some(circle) };
                    }
                    Some(_) => {}
                }
            }
        }
    }
    let in_x: Vec<bool> = color.iter().map(|c| c.unwrap_or(false)).collect();
    let has_negative = s.negative_edges().next().is_some();
    BalanceReport {
        balanced: true,
        witness_cut: has_negative.then(|| (0..n).filter(|&v| in_x[v]).collect()),
        witness_circle: None,
    }
}

fn fundamental_circle(
    g: &Graph,
    parent_edge: &[Option<usize>],
    depth: &[usize],
    v: usize,
    w: usize,
    closing: usize,
) -> PathElement {
    let step = |x: usize| {
        let pe = parent_edge[x].expect("non-root vertex has a tree edge");
        (pe, g.edges()[pe].other(x))
    };
    let (mut a, mut b) = (v, w);
    let mut from_v = Vec::new();
    let mut from_w = Vec::new();
    while depth[a] > depth[b] {
        let (e, up) = step(a);
        from_v.push(g.edges()[e].id);
        a = up;
    }
    while depth[b] > depth[a] {
        let (e, up) = step(b);
        from_w.push(g.edges()[e].id);
        b = up;
    }
    while a != b {
        let (ea, ua) = step(a);
        let (eb, ub) = step(b);
        from_v.push(g.edges()[ea].id);
        from_w.push(g.edges()[eb].id);
        a = ua;
        b = ub;
    }
    from_w.reverse();
    from_v.extend(from_w);
    from_v.push(g.edges()[closing].id);
    PathElement::Circle { edges: from_v }.canonical()
}

/// Candidate side assignment whose cut should be exactly the negative edges,
/// or `None` when no assignment exists. Positive edges are contracted first,
/// then the quotient is 2-coloured along negative edges.
fn negative_cut_candidate(s: &SignedGraph) -> Option<Vec<bool>> {
    let g = s.graph();
    let n = g.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (e, sign) in s.edges_with_signs() {
        if !sign.is_negative() {
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let class: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in s.negative_edges() {
        let (a, b) = (class[e.u], class[e.v]);
        if a == b {
            return None;
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut side: Vec<Option<bool>> = vec![None; n];
    for root in 0..n {
        if class[root] != root || side[root].is_some() {
            continue;
        }
        side[root] = Some(false);
        let mut stack = vec![root];
        while let Some(c) = stack.pop() {
            let sc = side[c].expect("visited class has a side");
            for &d in &adj[c] {
                match side[d] {
                    None => {
                        side[d] = Some(!sc);
                        stack.push(d);
                    }
                    Some(sd) if sd == sc => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some((0..n).map(|v| side[class[v]].unwrap_or(false)).collect())
}

/// Balance as "the negative edge set is empty or a cut".
pub fn is_balanced_cut(s: &SignedGraph) -> bool {
    if s.negative_edges().next().is_none() {
        return true;
    }
    let Some(in_x) = negative_cut_candidate(s) else {
        return false;
    };
    s.edges_with_signs().all(|(e, sign)| (in_x[e.u] != in_x[e.v]) == sign.is_negative())
}

/// Switching verdict, cross-checked against the cut test.
pub fn is_balanced(s: &SignedGraph) -> Result<BalanceReport> {
    let report = is_balanced_switching(s);
    if report.balanced != is_balanced_cut(s) {
        return Err(Error::InternalInconsistency(format!(
            "switching says balanced={} but the cut test disagrees",
            report.balanced
        )));
    }
    Ok(report)
}

/// Balance decided block by block: in every nontrivial block, suppress the
/// divalent vertices (degrees taken inside the block) and test whether the
/// negative edges are empty or a cut.
pub fn balanced_per_block_after_suppression(s: &SignedGraph) -> bool {
    let g = s.graph();
    let bd = blocks(g);
    let balanced = bd.nontrivial().all(|(_, block)| {
        let mut local = vec![usize::MAX; g.vertex_count()];
        for (i, &v) in block.vertices.iter().enumerate() {
            local[v] = i;
        }
        let sub = SignedGraph::from_edges(
            block.vertices.len(),
            block.edges.iter().map(|id| {
                let e = g.edge(*id).expect("block edge");
                (e.id, local[e.u], local[e.v], s.sign(e.id).expect("block edge"))
            }),
        )
        .expect("block subgraph is well formed");
        is_balanced_cut(&suppress_divalent(&sub).reduced)
    });
    balanced
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{EdgeId, Sign};

    fn sg(n: usize, edges: &[(usize, usize, char)]) -> SignedGraph {
        SignedGraph::from_edges(
            n,
            edges.iter().enumerate().map(|(i, &(a, b, c))| (EdgeId(i), a, b, Sign::from_char(c).unwrap())),
        )
        .unwrap()
    }

    #[test]
    fn all_positive_k4() {
        let k4 = sg(4, &[(0, 1, '+'), (0, 2, '+'), (0, 3, '+'), (1, 2, '+'), (1, 3, '+'), (2, 3, '+')]);
        let r = is_balanced(&k4).unwrap();
        assert!(r.balanced);
        assert_eq!(r.witness_cut, None);
        assert_eq!(r.witness_circle, None);
    }

    #[test]
    fn triangle_with_one_negative_edge() {
        let t = sg(3, &[(0, 1, '+'), (1, 2, '-'), (2, 0, '+')]);
        let r = is_balanced(&t).unwrap();
        assert!(!r.balanced);
        let c = r.witness_circle.unwrap();
        assert_eq!(c.edge_set(), vec![EdgeId(0), EdgeId(1), EdgeId(2)]);
        assert_eq!(t.path_sign(&c), Ok(Sign::Negative));
        assert!(!is_balanced_cut(&t));
    }

    #[test]
    fn alternating_c4_is_balanced_with_cut() {
        let c4 = sg(4, &[(0, 1, '-'), (1, 2, '+'), (2, 3, '-'), (3, 0, '+')]);
        let r = is_balanced(&c4).unwrap();
        assert!(r.balanced);
        let x = r.witness_cut.unwrap();
        assert_eq!(x, vec![1, 2]);
        let mut mask = vec![false; 4];
        for v in x {
            mask[v] = true;
        }
        assert_eq!(cut_edges(c4.graph(), &mask), vec![EdgeId(0), EdgeId(2)]);
    }

    #[test]
    fn cut_route_examples() {
        let tree = sg(4, &[(0, 1, '+'), (1, 2, '-'), (1, 3, '+')]);
        assert!(is_balanced_cut(&tree));
        let lp = sg(1, &[(0, 0, '-')]);
        assert!(!is_balanced_cut(&lp));
        let r = is_balanced(&lp).unwrap();
        assert_eq!(r.witness_circle, Some(PathElement::Circle { edges: vec![EdgeId(0)] }));
    }

    #[test]
    fn digon_of_opposite_signs() {
        let d = sg(2, &[(0, 1, '+'), (0, 1, '-')]);
        let r = is_balanced(&d).unwrap();
        assert!(!r.balanced);
        assert_eq!(r.witness_circle.unwrap().edge_set(), vec![EdgeId(0), EdgeId(1)]);
    }

    #[test]
    fn per_block_route_on_two_blocks() {
        // balanced square attached to an unbalanced triangle
        let s = sg(6, &[(0, 1, '-'), (1, 2, '-'), (2, 3, '+'), (3, 0, '+'), (3, 4, '+'), (4, 5, '-'), (5, 3, '+')]);
        assert!(!balanced_per_block_after_suppression(&s));
        let fixed = s.with_sign(EdgeId(6), Sign::Negative).unwrap();
        assert!(balanced_per_block_after_suppression(&fixed));
        assert!(is_balanced(&fixed).unwrap().balanced);
    }
}
