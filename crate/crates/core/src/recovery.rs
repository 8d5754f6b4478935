//! Reading the Construction B data back off a signed graph that meets the
//! local degree conditions.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::constructions::{apply_plan_b, subdivision_layout, PlanB, Subdivision};
use crate::graph::{EdgeId, PathElement, Sign, SignedGraph};
use crate::properties::property3_local;
use crate::structure::{suppress_divalent, SuppressionResult};
use crate::{Error, Result};

// one end of a base edge: (edge, 0 at its first vertex / 1 at its last)
type End = (EdgeId, usize);

/// The unique Construction B plan that builds `s`.
///
/// The base is `s` with every possible divalent vertex suppressed; `F'`
/// holds the base edges whose subdivision path is not all positive. Two
/// ends of `F'` edges meeting at a base vertex belong to one element when
/// the original edges there are both negative; a loop on an otherwise
/// isolated vertex always closes into a circle.
pub fn recover_plan(s: &SignedGraph) -> Result<PlanB> {
    let check = property3_local(s);
    if !check.holds {
        return Err(Error::PropertyViolated(check.violations));
    }
    let sup = suppress_divalent(s);
    Ok(plan_from_suppression(s, &sup))
}

fn plan_from_suppression(s: &SignedGraph, sup: &SuppressionResult) -> PlanB {
    let base = sup.reduced.clone();
    let g = base.graph();
    let deg = g.degrees();
    let signs: BTreeMap<EdgeId, Vec<Sign>> = sup
        .expansion
        .iter()
        .map(|(id, exp)| (*id, exp.iter().map(|e| s.sign(*e).expect("expansion edge")).collect()))
        .collect();
    let f_prime: BTreeSet<EdgeId> =
        signs.iter().filter(|(_, seq)| seq.iter().any(|x| x.is_negative())).map(|(id, _)| *id).collect();

    let vertex_of = |(id, side): End| {
        let e = g.edge(id).expect("base edge");
        if side == 0 {
            e.u
        } else {
            e.v
        }
    };
    let end_sign = |(id, side): End| {
        let seq = &signs[&id];
        if side == 0 {
            seq[0]
        } else {
            seq[seq.len() - 1]
        }
    };

    let mut ends_at: BTreeMap<usize, Vec<End>> = BTreeMap::new();
    for &id in &f_prime {
        for side in 0..2 {
            ends_at.entry(vertex_of((id, side))).or_default().push((id, side));
        }
    }
    let mut partner: BTreeMap<End, End> = BTreeMap::new();
    for (&v, ends) in &ends_at {
        let joined: Vec<End> = if deg[v] == 2 {
            // only an isolated loop leaves a divalent base vertex
            ends.clone()
        } else {
            ends.iter().copied().filter(|&x| end_sign(x).is_negative()).collect()
        };
        if let [a, b] = joined[..] {
            partner.insert(a, b);
            partner.insert(b, a);
        }
    }

    let mut used: BTreeSet<EdgeId> = BTreeSet::new();
    let mut elements = Vec::new();
    // walk from `start`, leaving through the other end of its edge
    let trace = |start: End, used: &mut BTreeSet<EdgeId>| -> (Vec<EdgeId>, usize, bool) {
        let mut edges = Vec::new();
        let mut at = start;
        loop {
            used.insert(at.0);
            edges.push(at.0);
            let out = (at.0, 1 - at.1);
            match partner.get(&out) {
                Some(&next) if next == start => return (edges, vertex_of(out), true),
                Some(&next) => at = next,
                None => return (edges, vertex_of(out), false),
            }
        }
    };
    for &id in &f_prime {
        if used.contains(&id) {
            continue;
        }
        // an edge with an unjoined end starts its chain there
        if let Some(start) = (0..2).map(|side| (id, side)).find(|x| !partner.contains_key(x)) {
            let from = vertex_of(start);
            let (edges, to, _) = trace(start, &mut used);
            elements.push(if from == to {
                PathElement::Closed { edges, terminus: from }
            } else {
                PathElement::Open { edges, termini: (from, to) }
            });
        }
    }
    for &id in &f_prime {
        if !used.contains(&id) {
            let (edges, _, closed) = trace((id, 0), &mut used);
            debug_assert!(closed);
            elements.push(PathElement::Circle { edges });
        }
    }
    let mut steps = Subdivision { f_prime, elements, signs };
    steps.canonicalize();
    PlanB { base, steps }
}

/// `s` renumbered the way Construction B numbers the graph it builds from
/// the suppressed base: surviving vertices keep their relative order, and
/// subdivision vertices and edges follow in base edge order.
pub fn canonical_numbering(s: &SignedGraph) -> SignedGraph {
    canonical_numbering_with(s, &suppress_divalent(s))
}

fn canonical_numbering_with(s: &SignedGraph, sup: &SuppressionResult) -> SignedGraph {
    let g = s.graph();
    let base = sup.reduced.graph();
    let (n, layout) = subdivision_layout(base, |id| sup.expansion[&id].len());
    let mut vertex: Vec<usize> = sup.vertex_map.iter().map(|v| v.unwrap_or(usize::MAX)).collect();
    let mut edge_id: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();
    for piece in &layout {
        let walk = sup.expansion_walk(g, piece.base).expect("reduced edge");
        for (j, &v) in walk.iter().enumerate() {
            if vertex[v] == usize::MAX {
                vertex[v] = piece.vertices[j];
            }
        }
        for (orig, new) in sup.expansion[&piece.base].iter().zip(&piece.edges) {
            edge_id.insert(*orig, *new);
        }
    }
    SignedGraph::from_edges(n, s.edges_with_signs().map(|(e, sign)| (edge_id[&e.id], vertex[e.u], vertex[e.v], sign)))
        .expect("renumbering is a bijection")
}

/// Whether rebuilding `s` from its recovered plan gives `s` back, compared
/// exactly under the canonical numbering.
pub fn round_trip_check(s: &SignedGraph) -> Result<bool> {
    let check = property3_local(s);
    if !check.holds {
        return Err(Error::PropertyViolated(check.violations));
    }
    let sup = suppress_divalent(s);
    let plan = plan_from_suppression(s, &sup);
    match apply_plan_b(&plan) {
        Ok(built) => Ok(built == canonical_numbering_with(s, &sup)),
        Err(Error::InvalidPlan(_)) => Ok(false),
        Err(e) => Err(e),
    }
}
