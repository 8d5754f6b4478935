//! The naturally vertex-signed line graph and the brute-force consistency
//! oracle.

use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::graph::{EdgeId, Graph, PathElement, Sign, SignedGraph, VertexSignedGraph};
use crate::structure::CircleSearch;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineGraphResult {
    pub lg: VertexSignedGraph,
    /// Original edge behind each line-graph vertex (ascending).
    pub vertex_origin: Vec<EdgeId>,
}

/// Line graph of a simple signed graph, each vertex carrying the sign of the
/// edge it stands for. Line-graph edges are numbered in order of the
/// (smaller, larger) vertex pair.
pub fn line_graph(s: &SignedGraph) -> Result<LineGraphResult> {
    let g = s.graph();
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    let edges = g.edges();
    let mut pairs = Vec::new();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            let (a, b) = (&edges[i], &edges[j]);
            if a.is_incident(b.u) || a.is_incident(b.v) {
                pairs.push((i, j));
            }
        }
    }
    let lg = Graph::from_pairs(edges.len(), &pairs)?;
    Ok(LineGraphResult { lg: VertexSignedGraph::new(lg, s.signs().to_vec())?, vertex_origin: g.edge_ids().collect() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Consistency {
    pub consistent: bool,
    /// A circle with negative vertex-sign product, when inconsistent.
    pub witness: Option<PathElement>,
}

/// Consistency by enumeration: every circle must have a positive product of
/// vertex signs. Only circles through a negative vertex can fail, so only
/// those are enumerated; `cap` bounds how many are visited.
pub fn is_consistent_bruteforce(vg: &VertexSignedGraph, cap: usize) -> Result<Consistency> {
    let g = vg.graph();
    let marked: Vec<bool> = vg.vertex_signs().iter().map(|s| s.is_negative()).collect();
    let mut visited = 0usize;
    let flow = CircleSearch::through(g, &marked).run(|edges, vertices| {
        if visited == cap {
            return ControlFlow::Break(None);
        }
        visited += 1;
        if Sign::product(vertices.iter().map(|&v| vg.vertex_sign(v))).is_negative() {
            return ControlFlow::Break(Some(PathElement::Circle { edges: edges.to_vec() }.canonical()));
        }
        ControlFlow::Continue(())
    });
    match flow {
        ControlFlow::Continue(()) => Ok(Consistency { consistent: true, witness: None }),
        ControlFlow::Break(Some(witness)) => Ok(Consistency { consistent: false, witness: Some(witness) }),
        ControlFlow::Break(None) => Err(Error::CircleCapExceeded { cap }),
    }
}

/// Line consistency decided by the brute-force oracle on the line graph.
pub fn is_line_consistent_oracle(s: &SignedGraph, cap: usize) -> Result<bool> {
    let lg = line_graph(s)?;
    Ok(is_consistent_bruteforce(&lg.lg, cap)?.consistent)
}
