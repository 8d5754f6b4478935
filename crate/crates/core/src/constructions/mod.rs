//! Constructions of signed graphs satisfying the local degree conditions.
//!
//! * Construction A signs a graph directly: chosen vertex-disjoint paths and
//!   circles of restricted shape become negative.
//! * Construction B starts from a signed base graph without suppressible
//!   divalent vertices, groups a superset `F'` of its negative edges into
//!   paths and circles, subdivides every edge, and signs each subdivision
//!   path under local rules.
//! * Construction C is B with the base signs left out and read off the
//!   result afterwards.
//! * Construction D is B with every nontrivial block of the base signed
//!   balanced.
//!
//! Every plan has a validator reporting each failed rule, and an applier.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{EdgeId, Graph, PathElement, Sign};

mod plan_a;
mod plan_b;
mod sample;

pub use plan_a::{apply_plan_a, sample_plan_a, validate_plan_a, PlanA};
pub use plan_b::{
    apply_plan_b, apply_plan_c, apply_plan_d, derive_plan_d_signs, validate_plan_b, validate_plan_c, validate_plan_d,
    BlockSigning, PlanB, PlanC, PlanD,
};
pub use sample::{sample_plan_b, sample_plan_c, sample_plan_d, SamplerParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// element is not a well-formed path or circle of the base graph
    Malformed,
    /// two Construction A elements share a vertex
    Disjoint,
    /// Construction A clause (i): divalent path inside a nontrivial block
    ClauseI,
    /// Construction A clause (ii): path of isthmi
    ClauseII,
    /// Construction A clause (iii): megablock that is a circle
    ClauseIII,
    /// base graph has a divalent vertex without a loop
    BaseDivalent,
    /// `F'` misses a negative base edge
    Step2,
    /// elements do not partition `F'`
    Step3Partition,
    Step3a,
    Step3b,
    Step3c,
    Step3d,
    /// subdivision missing, empty, or given for an unknown edge
    Subdivision,
    Step5,
    Step6a,
    Step6b,
    Step6c,
    Step6d,
    /// no sign sequence of the given length satisfies the step 6 rules
    SignInfeasible,
    /// bad block signing in Construction D
    BlockSigning,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Malformed => "malformed",
            Rule::Disjoint => "disjoint",
            Rule::ClauseI => "A(i)",
            Rule::ClauseII => "A(ii)",
            Rule::ClauseIII => "A(iii)",
            Rule::BaseDivalent => "base-divalent",
            Rule::Step2 => "step2",
            Rule::Step3Partition => "step3-partition",
            Rule::Step3a => "step3a",
            Rule::Step3b => "step3b",
            Rule::Step3c => "step3c",
            Rule::Step3d => "step3d",
            Rule::Subdivision => "subdivision",
            Rule::Step5 => "step5",
            Rule::Step6a => "step6a",
            Rule::Step6b => "step6b",
            Rule::Step6c => "step6c",
            Rule::Step6d => "step6d",
            Rule::SignInfeasible => "sign-infeasible",
            Rule::BlockSigning => "block-signing",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PlanViolation {
    pub rule: Rule,
    pub element: Option<usize>,
    pub vertex: Option<usize>,
    pub edge: Option<EdgeId>,
    pub detail: String,
}

impl PlanViolation {
    pub(crate) fn new(rule: Rule, detail: impl Into<String>) -> Self {
        PlanViolation { rule, element: None, vertex: None, edge: None, detail: detail.into() }
    }

    pub(crate) fn element(mut self, i: usize) -> Self {
        self.element = Some(i);
        self
    }

    pub(crate) fn vertex(mut self, v: usize) -> Self {
        self.vertex = Some(v);
        self
    }

    pub(crate) fn edge(mut self, e: EdgeId) -> Self {
        self.edge = Some(e);
        self
    }
}

impl fmt::Display for PlanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.rule.name())?;
        if let Some(i) = self.element {
            write!(f, " element {i}")?;
        }
        if let Some(v) = self.vertex {
            write!(f, " vertex {v}")?;
        }
        if let Some(e) = self.edge {
            write!(f, " edge {e}")?;
        }
        write!(f, ": {}", self.detail)
    }
}

/// The part of Constructions B, C and D shared by all three: the chosen
/// edge set `F'`, its partition into paths and circles, and the sign
/// sequence each base edge is subdivided into.
///
/// A sign sequence runs from the smaller endpoint of its base edge to the
/// larger; for a loop it starts and ends at the loop vertex.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Subdivision {
    pub f_prime: BTreeSet<EdgeId>,
    pub elements: Vec<PathElement>,
    pub signs: BTreeMap<EdgeId, Vec<Sign>>,
}

impl Subdivision {
    /// Subdivision length of a base edge (1 keeps the edge).
    pub fn length(&self, e: EdgeId) -> usize {
        self.signs.get(&e).map_or(1, Vec::len)
    }

    /// Elements canonicalized and sorted.
    pub fn canonicalize(&mut self) {
        for el in &mut self.elements {
            *el = el.canonical();
        }
        self.elements.sort_by(|a, b| a.edges()[0].cmp(&b.edges()[0]).then_with(|| a.cmp(b)));
    }
}

/// Where the pieces of a subdivided base edge land in the built graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubdividedEdge {
    pub base: EdgeId,
    /// Vertex walk, from the smaller base endpoint.
    pub vertices: Vec<usize>,
    pub edges: Vec<EdgeId>,
}

/// Numbering used when subdividing: base vertices keep their indices and
/// the first edge of each path keeps the base id; new vertices and new edge
/// ids are appended in path order, base edges taken in increasing id.
/// Returns the total vertex count and the per-edge layout.
pub fn subdivision_layout(base: &Graph, length: impl Fn(EdgeId) -> usize) -> (usize, Vec<SubdividedEdge>) {
    let mut next_vertex = base.vertex_count();
    let mut next_edge = base.max_edge_id().map_or(0, |e| e.0 + 1);
    let mut out = Vec::with_capacity(base.edge_count());
    for e in base.edges() {
        let len = length(e.id).max(1);
        let mut vertices = Vec::with_capacity(len + 1);
        vertices.push(e.u);
        for _ in 1..len {
            vertices.push(next_vertex);
            next_vertex += 1;
        }
        vertices.push(e.v);
        let mut edges = Vec::with_capacity(len);
        edges.push(e.id);
        for _ in 1..len {
            edges.push(EdgeId(next_edge));
            next_edge += 1;
        }
        out.push(SubdividedEdge { base: e.id, vertices, edges });
    }
    (next_vertex, out)
}

/// Local sign requirements on one subdivision path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub(crate) struct SignRule {
    pub first: Option<Sign>,
    pub last: Option<Sign>,
    pub product: Option<Sign>,
}

impl SignRule {
    /// Whether some sequence of length `len` meets the end constraints, the
    /// product, and has a negative entry.
    pub fn feasible(&self, len: usize) -> bool {
        if len == 0 {
            return false;
        }
        if len == 1 {
            if let (Some(a), Some(b)) = (self.first, self.last) {
                if a != b {
                    return false;
                }
            }
        }
        let forced: Vec<Sign> = if len == 1 {
            self.first.or(self.last).into_iter().collect()
        } else {
            self.first.into_iter().chain(self.last).collect()
        };
        let free = len - forced.len();
        let forced_product = Sign::product(forced.iter().copied());
        let forced_negative = forced.iter().any(|s| s.is_negative());
        match (free, self.product) {
            (0, target) => forced_negative && target.is_none_or(|t| t == forced_product),
            (1, Some(target)) => forced_negative || (target * forced_product).is_negative(),
            _ => true,
        }
    }

    pub fn min_len(&self) -> usize {
        self.feasible_from(1)
    }

    /// Smallest feasible length not below `len`. Feasibility is not
    /// monotone: both ends negative with a negative product works at length
    /// 1 but not 2.
    pub fn feasible_from(&self, len: usize) -> usize {
        (len.max(1)..).find(|&l| self.feasible(l)).expect("every length from 4 on is feasible")
    }

    /// Whether `seq` meets every requirement.
    pub fn accepts(&self, seq: &[Sign]) -> bool {
        !seq.is_empty()
            && self.first.is_none_or(|s| seq[0] == s)
            && self.last.is_none_or(|s| seq[seq.len() - 1] == s)
            && self.product.is_none_or(|p| Sign::product(seq.iter().copied()) == p)
            && seq.iter().any(|s| s.is_negative())
    }

    /// A random accepted sequence of length `len`, if feasible.
    pub fn sample<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Option<Vec<Sign>> {
        if !self.feasible(len) {
            return None;
        }
        let mut seq: Vec<Sign> =
            (0..len).map(|_| if rng.gen_bool(0.5) { Sign::Negative } else { Sign::Positive }).collect();
        let mut free: Vec<usize> = (0..len).collect();
        if let Some(s) = self.first {
            seq[0] = s;
            free.retain(|&i| i != 0);
        }
        if let Some(s) = self.last {
            seq[len - 1] = s;
            free.retain(|&i| i != len - 1);
        }
        free.shuffle(rng);
        if let Some(p) = self.product {
            if Sign::product(seq.iter().copied()) != p {
                seq[free[0]] = -seq[free[0]];
            }
        }
        if seq.iter().all(|s| !s.is_negative()) {
            match self.product {
                Some(_) => {
                    seq[free[0]] = Sign::Negative;
                    seq[free[1]] = Sign::Negative;
                }
                None => seq[free[0]] = Sign::Negative,
            }
        }
        debug_assert!(self.accepts(&seq));
        Some(seq)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::rng;
    use alloc::vec;
    use Sign::{Negative as N, Positive as P};

    // every sequence of the given length
    fn all_sequences(len: usize) -> Vec<Vec<Sign>> {
        (0u32..1 << len).map(|m| (0..len).map(|i| if m >> i & 1 == 1 { N } else { P }).collect()).collect()
    }

    #[test]
    fn feasibility_matches_enumeration() {
        let opts = [None, Some(P), Some(N)];
        for first in opts {
            for last in opts {
                for product in opts {
                    let rule = SignRule { first, last, product };
                    for len in 1..=6 {
                        let expected = all_sequences(len).iter().any(|s| rule.accepts(s));
                        assert_eq!(rule.feasible(len), expected, "{rule:?} len {len}");
                    }
                }
            }
        }
    }

    #[test]
    fn sampled_sequences_are_accepted() {
        let mut r = rng(7);
        let opts = [None, Some(P), Some(N)];
        for first in opts {
            for last in opts {
                for product in opts {
                    let rule = SignRule { first, last, product };
                    let min = rule.min_len();
                    assert!(min <= 4);
                    for len in (min..min + 4).filter(|&l| rule.feasible(l)) {
                        for _ in 0..20 {
                            let seq = rule.sample(len, &mut r).unwrap();
                            assert!(rule.accepts(&seq));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn feasibility_is_not_monotone() {
        let rule = SignRule { first: Some(N), last: Some(N), product: Some(N) };
        assert!(rule.feasible(1) && !rule.feasible(2) && rule.feasible(3));
        assert_eq!(rule.feasible_from(2), 3);
    }

    #[test]
    fn terminal_edge_between_two_branch_vertices() {
        // both ends forced positive, product negative
        let rule = SignRule { first: Some(P), last: Some(P), product: Some(N) };
        assert!(!rule.feasible(1));
        assert!(!rule.feasible(2));
        assert!(rule.feasible(3));
        assert!(rule.accepts(&[P, N, P]));
    }

    #[test]
    fn layout_numbering() {
        let base = Graph::new(2, [(EdgeId(0), 0, 1), (EdgeId(3), 1, 1)]).unwrap();
        let (n, layout) = subdivision_layout(&base, |e| if e == EdgeId(0) { 3 } else { 2 });
        assert_eq!(n, 5);
        assert_eq!(layout[0].vertices, vec![0, 2, 3, 1]);
        assert_eq!(layout[0].edges, vec![EdgeId(0), EdgeId(4), EdgeId(5)]);
        assert_eq!(layout[1].vertices, vec![1, 4, 1]);
        assert_eq!(layout[1].edges, vec![EdgeId(3), EdgeId(6)]);
    }
}
