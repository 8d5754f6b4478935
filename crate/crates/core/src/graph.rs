//! Multigraphs with identified edges, edge and vertex signings, and path
//! elements (open paths, closed paths and circles given as edge sequences).

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Mul, Neg};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }

    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Positive),
            '-' => Some(Sign::Negative),
            _ => None,
        }
    }

    /// Product of a sequence of signs; the empty product is positive.
    pub fn product<I: IntoIterator<Item = Sign>>(signs: I) -> Sign {
        signs.into_iter().fold(Sign::Positive, |acc, s| acc * s)
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        self * Sign::Negative
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// An edge with normalized endpoints (`u <= v`). A loop has `u == v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub id: EdgeId,
    pub u: usize,
    pub v: usize,
}

impl Edge {
    pub fn new(id: EdgeId, a: usize, b: usize) -> Edge {
        Edge { id, u: a.min(b), v: a.max(b) }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn is_incident(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint opposite `x`; `x` itself for a loop.
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// An undirected multigraph on vertices `0..n`. Loops and parallel edges are
/// allowed; edges are kept sorted by id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (EdgeId, usize, usize)>,
    {
        let mut list: Vec<Edge> = Vec::new();
        for (id, a, b) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { edge: id, vertex: x, vertices: n });
                }
            }
            list.push(Edge::new(id, a, b));
        }
        list.sort_by_key(|e| e.id);
        if let Some(w) = list.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::DuplicateEdgeId(w[0].id));
        }
        Ok(Graph { n, edges: list })
    }

    /// Graph whose edge ids are the positions in `pairs`.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Graph> {
        Graph::new(n, pairs.iter().enumerate().map(|(i, &(a, b))| (EdgeId(i), a, b)))
    }

    pub fn empty(n: usize) -> Graph {
        Graph { n, edges: Vec::new() }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().map(|e| e.id)
    }

    /// Position of `id` in [`Graph::edges`].
    pub fn index_of(&self, id: EdgeId) -> Option<usize> {
        self.edges.binary_search_by_key(&id, |e| e.id).ok()
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.index_of(id).map(|i| &self.edges[i])
    }

    pub fn max_edge_id(&self) -> Option<EdgeId> {
        self.edges.last().map(|e| e.id)
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|e| usize::from(e.u == v) + usize::from(e.v == v)).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            d[e.u] += 1;
            d[e.v] += 1;
        }
        d
    }

    /// Incidence lists: `(edge index, other endpoint)` per vertex, in edge id
    /// order. A loop appears twice at its vertex, so list length is degree.
    pub fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            inc[e.u].push((i, e.v));
            inc[e.v].push((i, e.u));
        }
        inc
    }

    pub fn has_loop_at(&self, v: usize) -> bool {
        self.edges.iter().any(|e| e.is_loop() && e.u == v)
    }

    /// No loops and no parallel edges.
    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges.iter().all(|e| !e.is_loop() && seen.insert((e.u, e.v)))
    }

    /// Edge induced subgraph on the same vertex set.
    pub fn edge_subgraph(&self, keep: impl Fn(&Edge) -> bool) -> Graph {
        Graph { n: self.n, edges: self.edges.iter().copied().filter(|e| keep(e)).collect() }
    }

    /// Component label per vertex; labels are the smallest vertex of each
    /// component.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        (0..self.n).map(|v| find(&mut parent, v)).collect()
    }

    pub fn component_count(&self) -> usize {
        let labels = self.component_labels();
        (0..self.n).filter(|&v| labels[v] == v).count()
    }

    /// `|E| - |V| + #components`.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + self.component_count() - self.n
    }
}

/// A graph together with a sign on every edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SignedGraph {
    graph: Graph,
    // parallel to graph.edges()
    signs: Vec<Sign>,
}

impl SignedGraph {
    /// `signs` is given in edge id order.
    pub fn new(graph: Graph, signs: Vec<Sign>) -> Result<SignedGraph> {
        if signs.len() != graph.edge_count() {
            return Err(Error::SignCount { expected: graph.edge_count(), got: signs.len() });
        }
        Ok(SignedGraph { graph, signs })
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<SignedGraph>
    where
        I: IntoIterator<Item = (EdgeId, usize, usize, Sign)>,
    {
        let mut list: Vec<_> = edges.into_iter().collect();
        list.sort_by_key(|e| e.0);
        let graph = Graph::new(n, list.iter().map(|&(id, a, b, _)| (id, a, b)))?;
        let signs = list.iter().map(|e| e.3).collect();
        SignedGraph::new(graph, signs)
    }

    pub fn all_positive(graph: Graph) -> SignedGraph {
        let signs = vec![Sign::Positive; graph.edge_count()];
        SignedGraph { graph, signs }
    }

    pub fn with_signs(graph: Graph, sign_of: impl Fn(&Edge) -> Sign) -> SignedGraph {
        let signs = graph.edges().iter().map(sign_of).collect();
        SignedGraph { graph, signs }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_parts(self) -> (Graph, Vec<Sign>) {
        (self.graph, self.signs)
    }

    /// Signs in edge id order.
    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn sign(&self, id: EdgeId) -> Option<Sign> {
        self.graph.index_of(id).map(|i| self.signs[i])
    }

    pub fn sign_at(&self, index: usize) -> Sign {
        self.signs[index]
    }

    pub fn edges_with_signs(&self) -> impl Iterator<Item = (&Edge, Sign)> + '_ {
        self.graph.edges.iter().zip(self.signs.iter().copied())
    }

    pub fn negative_edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges_with_signs().filter(|(_, s)| s.is_negative()).map(|(e, _)| e)
    }

    /// Number of negative edge incidences at `v`; a negative loop counts twice.
    pub fn negative_degree(&self, v: usize) -> usize {
        self.negative_edges().map(|e| usize::from(e.u == v) + usize::from(e.v == v)).sum()
    }

    pub fn negative_degrees(&self) -> Vec<usize> {
        self.negative_subgraph().degrees()
    }

    /// Spanning subgraph of the negative edges.
    pub fn negative_subgraph(&self) -> Graph {
        Graph { n: self.graph.n, edges: self.negative_edges().copied().collect() }
    }

    /// Product of the edge signs along `p`.
    pub fn path_sign(&self, p: &PathElement) -> Result<Sign> {
        p.edges()
            .iter()
            .try_fold(Sign::Positive, |acc, &id| self.sign(id).map(|s| acc * s).ok_or(Error::UnknownEdge(id)))
    }

    /// Same graph with one edge's sign replaced.
    pub fn with_sign(&self, id: EdgeId, sign: Sign) -> Result<SignedGraph> {
        let i = self.graph.index_of(id).ok_or(Error::UnknownEdge(id))?;
        let mut out = self.clone();
        out.signs[i] = sign;
        Ok(out)
    }
}

/// A graph with a sign on every vertex (a marked graph).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSignedGraph {
    graph: Graph,
    vsigns: Vec<Sign>,
}

impl VertexSignedGraph {
    pub fn new(graph: Graph, vsigns: Vec<Sign>) -> Result<VertexSignedGraph> {
        if vsigns.len() != graph.vertex_count() {
            return Err(Error::SignCount { expected: graph.vertex_count(), got: vsigns.len() });
        }
        Ok(VertexSignedGraph { graph, vsigns })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_signs(&self) -> &[Sign] {
        &self.vsigns
    }

    pub fn vertex_sign(&self, v: usize) -> Sign {
        self.vsigns[v]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathKind {
    Open,
    Closed,
    Circle,
}

impl PathKind {
    pub fn name(self) -> &'static str {
        match self {
            PathKind::Open => "open",
            PathKind::Closed => "closed",
            PathKind::Circle => "circle",
        }
    }
}

/// An open path, a closed path or a circle, given by its edge sequence.
///
/// Open paths carry their ordered termini and closed paths their terminus;
/// a circle has no terminus. All kinds have at least one edge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathElement {
    Open { edges: Vec<EdgeId>, termini: (usize, usize) },
    Closed { edges: Vec<EdgeId>, terminus: usize },
    Circle { edges: Vec<EdgeId> },
}

impl PathElement {
    pub fn kind(&self) -> PathKind {
        match self {
            PathElement::Open { .. } => PathKind::Open,
            PathElement::Closed { .. } => PathKind::Closed,
            PathElement::Circle { .. } => PathKind::Circle,
        }
    }

    pub fn edges(&self) -> &[EdgeId] {
        match self {
            PathElement::Open { edges, .. } | PathElement::Closed { edges, .. } | PathElement::Circle { edges } => {
                edges
            }
        }
    }

    pub fn len(&self) -> usize {
        self.edges().len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges().is_empty()
    }

    pub fn contains_edge(&self, id: EdgeId) -> bool {
        self.edges().contains(&id)
    }

    /// Termini: both ends of an open path, the single terminus of a closed
    /// path, none for a circle.
    pub fn termini(&self) -> Vec<usize> {
        match *self {
            PathElement::Open { termini: (a, b), .. } => vec![a, b],
            PathElement::Closed { terminus, .. } => vec![terminus],
            PathElement::Circle { .. } => Vec::new(),
        }
    }

    /// Walks the element in `g` and returns its vertex sequence (one longer
    /// than the edge sequence; first equals last for closed paths and
    /// circles). Fails unless the element is a genuine path or circle.
    pub fn trace(&self, g: &Graph) -> Result<Vec<usize>> {
        let edges = self.edges();
        if edges.is_empty() {
            return Err(Error::InvalidPath(format!("{} element has no edges", self.kind().name())));
        }
        let mut seen = BTreeSet::new();
        for id in edges {
            g.edge(*id).ok_or(Error::UnknownEdge(*id))?;
            if !seen.insert(*id) {
                return Err(Error::InvalidPath(format!("edge {id} repeated")));
            }
        }
        match *self {
            PathElement::Open { termini: (a, b), .. } => {
                if a == b {
                    return Err(Error::InvalidPath(format!("open path with equal termini {a}")));
                }
                let walk = walk_from(g, edges, a)
                    .ok_or_else(|| Error::InvalidPath(format!("edges do not form a walk from {a}")))?;
                if walk[walk.len() - 1] != b {
                    return Err(Error::InvalidPath(format!("walk from {a} does not end at {b}")));
                }
                distinct_vertices(&walk)?;
                Ok(walk)
            }
            PathElement::Closed { terminus, .. } => {
                let walk = walk_from(g, edges, terminus)
                    .ok_or_else(|| Error::InvalidPath(format!("edges do not form a walk from {terminus}")))?;
                if walk[walk.len() - 1] != terminus {
                    return Err(Error::InvalidPath(format!("closed walk does not return to {terminus}")));
                }
                distinct_vertices(&walk[..walk.len() - 1])?;
                Ok(walk)
            }
            PathElement::Circle { .. } => {
                let first = g.edge(edges[0]).expect("checked above");
                for start in [first.u, first.v] {
                    if let Some(walk) = walk_from(g, edges, start) {
                        if walk[walk.len() - 1] == start && distinct_vertices(&walk[..walk.len() - 1]).is_ok() {
                            return Ok(walk);
                        }
                    }
                }
                Err(Error::InvalidPath("edges do not form a circle".into()))
            }
        }
    }

    /// Canonical representative among the equivalent edge orders: open and
    /// closed paths read from the end with the smaller terminal edge id, and
    /// circles rotated to start at their smallest edge id.
    pub fn canonical(&self) -> PathElement {
        match self {
            PathElement::Open { edges, termini: (a, b) } => {
                let reverse = if edges.len() == 1 { a > b } else { edges[0] > edges[edges.len() - 1] };
                if reverse {
                    PathElement::Open { edges: edges.iter().rev().copied().collect(), termini: (*b, *a) }
                } else {
                    self.clone()
                }
            }
            PathElement::Closed { edges, terminus } => {
                if edges.len() > 1 && edges[0] > edges[edges.len() - 1] {
                    PathElement::Closed { edges: edges.iter().rev().copied().collect(), terminus: *terminus }
                } else {
                    self.clone()
                }
            }
            PathElement::Circle { edges } => {
                let k = edges.len();
                let start = (0..k).min_by_key(|&i| edges[i]).unwrap_or(0);
                let mut rotated: Vec<EdgeId> = (0..k).map(|i| edges[(start + i) % k]).collect();
                if k > 2 && rotated[1] > rotated[k - 1] {
                    rotated[1..].reverse();
                }
                PathElement::Circle { edges: rotated }
            }
        }
    }

    /// Sorted edge ids.
    pub fn edge_set(&self) -> Vec<EdgeId> {
        let mut s = self.edges().to_vec();
        s.sort();
        s
    }
}

fn walk_from(g: &Graph, edges: &[EdgeId], start: usize) -> Option<Vec<usize>> {
    let mut walk = Vec::with_capacity(edges.len() + 1);
    walk.push(start);
    let mut at = start;
    for id in edges {
        let e = g.edge(*id)?;
        if !e.is_incident(at) {
            return None;
        }
        at = e.other(at);
        walk.push(at);
    }
    Some(walk)
}

fn distinct_vertices(vs: &[usize]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for &v in vs {
        if !seen.insert(v) {
            return Err(Error::InvalidPath(format!("vertex {v} visited twice")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signed(n: usize, edges: &[(usize, usize, char)]) -> SignedGraph {
        SignedGraph::from_edges(
            n,
            edges.iter().enumerate().map(|(i, &(a, b, s))| (EdgeId(i), a, b, Sign::from_char(s).unwrap())),
        )
        .unwrap()
    }

    #[test]
    fn degrees_count_loops_twice() {
        let g = Graph::from_pairs(2, &[(0, 0), (0, 1)]).unwrap();
        assert_eq!(g.degrees(), vec![3, 1]);
        assert_eq!(g.degree(0), 3);
        assert_eq!(g.incidence()[0].len(), 3);
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(
            Graph::new(2, [(EdgeId(0), 0, 2)]),
            Err(Error::VertexOutOfRange { edge: EdgeId(0), vertex: 2, vertices: 2 })
        );
        assert_eq!(Graph::new(2, [(EdgeId(4), 0, 1), (EdgeId(4), 1, 0)]), Err(Error::DuplicateEdgeId(EdgeId(4))));
    }

    #[test]
    fn negative_subgraph_examples() {
        let tri = signed(3, &[(0, 1, '+'), (1, 2, '+'), (2, 0, '+')]);
        let neg = tri.negative_subgraph();
        assert_eq!(neg.vertex_count(), 3);
        assert_eq!(neg.edge_count(), 0);

        let c4 = signed(4, &[(0, 1, '-'), (1, 2, '-'), (2, 3, '+'), (3, 0, '+')]);
        let neg = c4.negative_subgraph();
        assert_eq!(neg.edge_ids().collect::<Vec<_>>(), vec![EdgeId(0), EdgeId(1)]);
        assert_eq!(neg.degrees(), vec![1, 2, 1, 0]);

        let lp = signed(1, &[(0, 0, '-')]);
        assert_eq!(lp.negative_subgraph().edges(), &[Edge::new(EdgeId(0), 0, 0)]);
        assert_eq!(lp.negative_degree(0), 2);
    }

    #[test]
    fn path_sign_is_product() {
        let p3 = signed(4, &[(0, 1, '+'), (1, 2, '+'), (2, 3, '-')]);
        let p = PathElement::Open { edges: vec![EdgeId(0), EdgeId(1), EdgeId(2)], termini: (0, 3) };
        assert_eq!(p3.path_sign(&p), Ok(Sign::Negative));
        let q = PathElement::Open { edges: vec![EdgeId(9)], termini: (0, 1) };
        assert_eq!(p3.path_sign(&q), Err(Error::UnknownEdge(EdgeId(9))));

        let c2 = signed(3, &[(0, 1, '-'), (1, 2, '-')]);
        let p = PathElement::Open { edges: vec![EdgeId(0), EdgeId(1)], termini: (0, 2) };
        assert_eq!(c2.path_sign(&p), Ok(Sign::Positive));
    }

    #[test]
    fn trace_checks_path_shape() {
        let c4 = Graph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let circle = PathElement::Circle { edges: vec![EdgeId(1), EdgeId(2), EdgeId(3), EdgeId(0)] };
        assert_eq!(circle.trace(&c4).unwrap(), vec![1, 2, 3, 0, 1]);
        let closed = PathElement::Closed { edges: vec![EdgeId(0), EdgeId(1), EdgeId(2), EdgeId(3)], terminus: 0 };
        assert_eq!(closed.trace(&c4).unwrap(), vec![0, 1, 2, 3, 0]);
        let bad = PathElement::Open { edges: vec![EdgeId(0), EdgeId(2)], termini: (0, 3) };
        assert!(bad.trace(&c4).is_err());
        let whole = PathElement::Open { edges: vec![EdgeId(0), EdgeId(1), EdgeId(2), EdgeId(3)], termini: (0, 0) };
        assert!(whole.trace(&c4).is_err());

        let theta = Graph::from_pairs(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        let digon = PathElement::Circle { edges: vec![EdgeId(0), EdgeId(2)] };
        assert_eq!(digon.trace(&theta).unwrap(), vec![0, 1, 0]);
        let loop_g = Graph::from_pairs(1, &[(0, 0)]).unwrap();
        assert_eq!(PathElement::Circle { edges: vec![EdgeId(0)] }.trace(&loop_g).unwrap(), vec![0, 0]);
    }

    #[test]
    fn canonical_forms() {
        let c = PathElement::Circle { edges: vec![EdgeId(3), EdgeId(1), EdgeId(0), EdgeId(2)] };
        assert_eq!(c.canonical(), PathElement::Circle { edges: vec![EdgeId(0), EdgeId(1), EdgeId(3), EdgeId(2)] });
        let o = PathElement::Open { edges: vec![EdgeId(5), EdgeId(2)], termini: (7, 1) };
        assert_eq!(o.canonical(), PathElement::Open { edges: vec![EdgeId(2), EdgeId(5)], termini: (1, 7) });
        let single = PathElement::Open { edges: vec![EdgeId(5)], termini: (3, 1) };
        assert_eq!(single.canonical(), PathElement::Open { edges: vec![EdgeId(5)], termini: (1, 3) });
    }

    #[test]
    fn cycle_rank_and_components() {
        let g = Graph::from_pairs(5, &[(0, 1), (1, 2), (2, 0), (3, 3)]).unwrap();
        assert_eq!(g.component_labels(), vec![0, 0, 0, 3, 4]);
        assert_eq!(g.cycle_rank(), 2);
        assert!(!g.is_simple());
    }
}
