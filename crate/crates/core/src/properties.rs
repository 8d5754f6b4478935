//! Local degree conditions for line consistency.
//!
//! Two checkers for the same condition: a circle-quantified one that reads
//! the condition literally (used as an oracle) and a linear one built on
//! degrees and isthmi (used in production). [`is_line_consistent`] combines
//! the linear checker with balance.

use alloc::vec::Vec;
use core::fmt;

use crate::balance::{is_balanced, BalanceReport};
use crate::graph::{Graph, PathElement, SignedGraph};
use crate::structure::{blocks, enumerate_circles};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Clause {
    /// degree above 3 with a negative edge
    P2a,
    /// degree 3 with one or three negative edges
    P2b,
    /// a circle through the vertex misses one of its two negative edges
    P2c,
    /// none of the three local alternatives holds
    P3,
    /// endpoint of a negative edge has degree above 2 (2-connected case)
    Cor2,
}

impl Clause {
    pub fn name(self) -> &'static str {
        match self {
            Clause::P2a => "P2a",
            Clause::P2b => "P2b",
            Clause::P2c => "P2c",
            Clause::P3 => "P3",
            Clause::Cor2 => "Cor2",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PropertyViolation {
    pub vertex: usize,
    pub clause: Clause,
    pub degree: usize,
    pub negative_degree: usize,
    /// The circle missing a negative edge, for [`Clause::P2c`].
    pub circle: Option<PathElement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyCheck {
    pub holds: bool,
    pub violations: Vec<PropertyViolation>,
}

impl PropertyCheck {
    fn from_violations(violations: Vec<PropertyViolation>) -> PropertyCheck {
        PropertyCheck { holds: violations.is_empty(), violations }
    }
}

/// The degree conditions read literally, with the circle clause quantified
/// over every circle through the vertex.
pub fn property2_literal(s: &SignedGraph, cap: usize) -> Result<PropertyCheck> {
    let g = s.graph();
    let deg = g.degrees();
    let neg = s.negative_degrees();
    let mut violations = Vec::new();
    let mut needs_circles = Vec::new();
    for v in 0..g.vertex_count() {
        let (d, dn) = (deg[v], neg[v]);
        let violation = |clause| PropertyViolation { vertex: v, clause, degree: d, negative_degree: dn, circle: None };
        if d > 3 && dn != 0 {
            violations.push(violation(Clause::P2a));
        }
        if d == 3 && dn != 0 && dn != 2 {
            violations.push(violation(Clause::P2b));
        }
        if dn == 2 {
            needs_circles.push(v);
        }
    }
    if !needs_circles.is_empty() {
        let circles = enumerate_circles(g, cap)?;
        for v in needs_circles {
            let negatives: Vec<_> = s.negative_edges().filter(|e| e.is_incident(v)).map(|e| e.id).collect();
            let through_v =
                circles.iter().filter(|c| c.edges().iter().any(|id| g.edge(*id).is_some_and(|e| e.is_incident(v))));
            if let Some(c) = through_v.into_iter().find(|c| negatives.iter().any(|id| !c.contains_edge(*id))) {
                violations.push(PropertyViolation {
                    vertex: v,
                    clause: Clause::P2c,
                    degree: deg[v],
                    negative_degree: neg[v],
                    circle: Some(c.clone()),
                });
            }
        }
    }
    violations.sort();
    Ok(PropertyCheck::from_violations(violations))
}

/// Linear local check: at every vertex, no negative edge, or one or two
/// negative incidences with degree at most 2, or two negative incidences
/// with degree 3 where the positive edge is an isthmus.
pub fn property3_local(s: &SignedGraph) -> PropertyCheck {
    let g = s.graph();
    let deg = g.degrees();
    let neg = s.negative_degrees();
    let isthmus = blocks(g).isthmus_flags(g);
    let violations = (0..g.vertex_count())
        .filter(|&v| {
            let (d, dn) = (deg[v], neg[v]);
            let ok = dn == 0
                || (1 <= dn && dn <= d && d <= 2)
                || (dn == 2 && d == 3 && positive_edge_is_isthmus(s, &isthmus, v));
            !ok
        })
        .map(|v| PropertyViolation {
            vertex: v,
            clause: Clause::P3,
            degree: deg[v],
            negative_degree: neg[v],
            circle: None,
        })
        .collect();
    PropertyCheck::from_violations(violations)
}

fn positive_edge_is_isthmus(s: &SignedGraph, isthmus: &[bool], v: usize) -> bool {
    s.edges_with_signs()
        .enumerate()
        .filter(|(_, (e, sign))| e.is_incident(v) && !sign.is_negative())
        .all(|(i, _)| isthmus[i])
}

/// Failures of the local check, each labelled with the clause of the
/// circle-quantified condition it breaks: degree above 3 ([`Clause::P2a`]),
/// degree 3 without exactly two negative edges ([`Clause::P2b`]), or degree 3
/// with a positive edge on a circle, which is then returned as the witness
/// ([`Clause::P2c`]).
pub fn property2_clauses(s: &SignedGraph) -> PropertyCheck {
    let local = property3_local(s);
    let violations = local
        .violations
        .into_iter()
        .map(|mut v| {
            v.clause = match (v.degree, v.negative_degree) {
                (d, _) if d > 3 => Clause::P2a,
                (3, 2) => {
                    v.circle = positive_edge_circle(s, v.vertex);
                    Clause::P2c
                }
                (3, _) => Clause::P2b,
                _ => Clause::P3,
            };
            v
        })
        .collect();
    PropertyCheck::from_violations(violations)
}

// a circle through the positive edge at `v`, found as a shortest path back
// to `v` that avoids the edge
fn positive_edge_circle(s: &SignedGraph, v: usize) -> Option<PathElement> {
    let g = s.graph();
    let (pi, e) = s
        .edges_with_signs()
        .enumerate()
        .find(|(_, (e, sign))| e.is_incident(v) && !sign.is_negative() && !e.is_loop())
        .map(|(i, (e, _))| (i, e))?;
    let w = e.other(v);
    let inc = g.incidence();
    let mut parent: Vec<Option<usize>> = alloc::vec![None; g.vertex_count()];
    let mut seen = alloc::vec![false; g.vertex_count()];
    let mut queue = alloc::collections::VecDeque::from([w]);
    seen[w] = true;
    while let Some(x) = queue.pop_front() {
        if x == v {
            break;
        }
        for &(ei, y) in &inc[x] {
            if ei != pi && !seen[y] {
                seen[y] = true;
                parent[y] = Some(ei);
                queue.push_back(y);
            }
        }
    }
    if !seen[v] {
        return None;
    }
    let mut edges = alloc::vec![e.id];
    let mut at = v;
    while at != w {
        let ei = parent[at].expect("reached through a tree edge");
        edges.push(g.edges()[ei].id);
        at = g.edges()[ei].other(at);
    }
    Some(PathElement::Circle { edges }.canonical())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub balance: BalanceReport,
    pub property: PropertyCheck,
    /// `None` when the graph is not simple, where line consistency is not
    /// defined.
    pub line_consistent: Option<bool>,
}

/// Balance and the local conditions, on any signed graph.
pub fn check(s: &SignedGraph) -> Result<CheckReport> {
    let balance = is_balanced(s)?;
    let property = property3_local(s);
    let line_consistent = s.graph().is_simple().then_some(balance.balanced && property.holds);
    Ok(CheckReport { balance, property, line_consistent })
}

/// Line consistency of a simple signed graph: balanced and locally fine.
pub fn is_line_consistent(s: &SignedGraph) -> Result<CheckReport> {
    if !s.graph().is_simple() {
        return Err(Error::NotSimple);
    }
    check(s)
}

/// Simple, at least three vertices, and one block covering every vertex.
pub fn is_two_connected(g: &Graph) -> bool {
    if !g.is_simple() || g.vertex_count() < 3 {
        return false;
    }
    let bd = blocks(g);
    bd.blocks.len() == 1 && bd.blocks[0].nontrivial && bd.blocks[0].vertices.len() == g.vertex_count()
}

/// Line consistency of a simple 2-connected signed graph: balanced, and
/// every endpoint of a negative edge has degree at most 2.
pub fn corollary2_check(s: &SignedGraph) -> Result<bool> {
    Ok(corollary2_violations(s)?.is_empty() && is_balanced(s)?.balanced)
}

/// Degree violations of the 2-connected criterion, one per offending
/// endpoint.
pub fn corollary2_violations(s: &SignedGraph) -> Result<Vec<PropertyViolation>> {
    let g = s.graph();
    if !is_two_connected(g) {
        return Err(Error::NotTwoConnected);
    }
    let deg = g.degrees();
    let neg = s.negative_degrees();
    Ok((0..g.vertex_count())
        .filter(|&v| neg[v] > 0 && deg[v] > 2)
        .map(|v| PropertyViolation {
            vertex: v,
            clause: Clause::Cor2,
            degree: deg[v],
            negative_degree: neg[v],
            circle: None,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{EdgeId, Sign};
    use alloc::vec;

    fn sg(n: usize, edges: &[(usize, usize, char)]) -> SignedGraph {
        SignedGraph::from_edges(
            n,
            edges.iter().enumerate().map(|(i, &(a, b, c))| (EdgeId(i), a, b, Sign::from_char(c).unwrap())),
        )
        .unwrap()
    }

    fn k4(neg: &[usize]) -> SignedGraph {
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let edges: Vec<_> =
            pairs.iter().enumerate().map(|(i, &(a, b))| (a, b, if neg.contains(&i) { '-' } else { '+' })).collect();
        sg(4, &edges)
    }

    fn clauses(c: &PropertyCheck) -> Vec<(usize, Clause)> {
        c.violations.iter().map(|v| (v.vertex, v.clause)).collect()
    }

    #[test]
    fn degree_four_with_negative_edge() {
        // vertex 0 has degree 4 and one negative edge
        let s = sg(5, &[(0, 1, '-'), (0, 2, '+'), (0, 3, '+'), (0, 4, '+')]);
        let c = property2_literal(&s, 100).unwrap();
        assert_eq!(clauses(&c), vec![(0, Clause::P2a)]);
        assert_eq!(clauses(&property3_local(&s)), vec![(0, Clause::P3)]);
    }

    #[test]
    fn degree_three_with_one_negative_edge() {
        let s = sg(4, &[(0, 1, '-'), (0, 2, '+'), (0, 3, '+')]);
        assert_eq!(clauses(&property2_literal(&s, 100).unwrap()), vec![(0, Clause::P2b)]);
        assert!(!property3_local(&s).holds);
    }

    #[test]
    fn k4_two_negatives_at_a_vertex() {
        // edges 0-1 and 0-2 negative; triangle 0-1-3 misses 0-2
        let s = k4(&[0, 1]);
        let c = property2_literal(&s, 100).unwrap();
        let at0 = c.violations.iter().find(|v| v.vertex == 0).unwrap();
        assert_eq!(at0.clause, Clause::P2c);
        let circle = at0.circle.as_ref().unwrap();
        assert!(!(circle.contains_edge(EdgeId(0)) && circle.contains_edge(EdgeId(1))));
        assert!(!property3_local(&s).holds);
    }

    #[test]
    fn local_check_clause_c() {
        // path 1-0-2 negative, pendant 0-3 positive isthmus
        let s = sg(4, &[(1, 0, '-'), (0, 2, '-'), (0, 3, '+')]);
        assert!(property3_local(&s).holds);
        assert!(property2_literal(&s, 10).unwrap().holds);
        // the third edge inside a block
        let s = sg(4, &[(1, 0, '-'), (0, 2, '-'), (0, 3, '+'), (3, 1, '+')]);
        assert_eq!(clauses(&property3_local(&s)), vec![(0, Clause::P3)]);
        assert_eq!(clauses(&property2_literal(&s, 10).unwrap()), vec![(0, Clause::P2c)]);
    }

    #[test]
    fn clause_labels_for_local_failures() {
        let s = sg(4, &[(1, 0, '-'), (0, 2, '-'), (0, 3, '+'), (3, 1, '+')]);
        let c = property2_clauses(&s);
        assert_eq!(clauses(&c), vec![(0, Clause::P2c)]);
        let circle = c.violations[0].circle.as_ref().unwrap();
        assert_eq!(circle.edge_set(), vec![EdgeId(0), EdgeId(2), EdgeId(3)]);
        assert_eq!(clauses(&property2_clauses(&k4(&[0]))), vec![(0, Clause::P2b), (1, Clause::P2b)]);
        let s = sg(5, &[(0, 1, '-'), (0, 2, '+'), (0, 3, '+'), (0, 4, '+')]);
        assert_eq!(clauses(&property2_clauses(&s)), vec![(0, Clause::P2a)]);
    }

    #[test]
    fn all_positive_passes() {
        assert!(property3_local(&k4(&[])).holds);
    }

    #[test]
    fn line_consistency_examples() {
        let c4 = sg(4, &[(0, 1, '-'), (1, 2, '-'), (2, 3, '+'), (3, 0, '+')]);
        assert_eq!(is_line_consistent(&c4).unwrap().line_consistent, Some(true));

        let r = is_line_consistent(&k4(&[0])).unwrap();
        assert_eq!(r.line_consistent, Some(false));
        assert_eq!(clauses(&r.property), vec![(0, Clause::P3), (1, Clause::P3)]);
        assert_eq!(clauses(&property2_literal(&k4(&[0]), 100).unwrap()), vec![(0, Clause::P2b), (1, Clause::P2b)]);

        let c3 = sg(3, &[(0, 1, '-'), (1, 2, '+'), (2, 0, '+')]);
        let r = is_line_consistent(&c3).unwrap();
        assert!(r.property.holds);
        assert!(!r.balance.balanced);
        assert_eq!(r.line_consistent, Some(false));

        assert_eq!(is_line_consistent(&sg(1, &[(0, 0, '+')])), Err(Error::NotSimple));
        assert_eq!(check(&sg(1, &[(0, 0, '+')])).unwrap().line_consistent, None);
    }

    #[test]
    fn two_connected_shortcut_examples() {
        let c5 = sg(5, &[(0, 1, '-'), (1, 2, '+'), (2, 3, '-'), (3, 4, '+'), (4, 0, '+')]);
        assert_eq!(corollary2_check(&c5), Ok(true));
        assert_eq!(corollary2_check(&k4(&[0])), Ok(false));
        // C4 plus chord 0-2; negative edges 1-2 and 2-3 make it balanced via X = {2}
        let s = sg(4, &[(0, 1, '+'), (1, 2, '-'), (2, 3, '-'), (3, 0, '+'), (0, 2, '-')]);
        assert!(is_balanced(&s).unwrap().balanced);
        assert_eq!(corollary2_check(&s), Ok(false));
        let path = sg(3, &[(0, 1, '+'), (1, 2, '+')]);
        assert_eq!(corollary2_check(&path), Err(Error::NotTwoConnected));
    }
}
