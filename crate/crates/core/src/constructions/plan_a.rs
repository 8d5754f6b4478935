use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{PlanViolation, Rule};
use crate::graph::{EdgeId, Graph, PathElement, Sign, SignedGraph};
use crate::random::rng;
use crate::structure::{blocks, megablocks_of, BlockDecomposition, Megablock};
use crate::{Error, Result};

/// A graph and the paths and circles to make negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanA {
    pub base: Graph,
    pub elements: Vec<PathElement>,
}

struct Context<'a> {
    g: &'a Graph,
    degrees: Vec<usize>,
    bd: BlockDecomposition,
    isthmus: Vec<bool>,
    megablocks: Vec<Megablock>,
}

impl<'a> Context<'a> {
    fn new(g: &'a Graph) -> Self {
        let bd = blocks(g);
        let isthmus = bd.isthmus_flags(g);
        let megablocks = megablocks_of(&bd);
        Context { g, degrees: g.degrees(), bd, isthmus, megablocks }
    }

    fn index(&self, id: EdgeId) -> usize {
        self.g.index_of(id).expect("traced element edge")
    }

    fn check_max_degree(&self, walk: &[usize], rule: Rule) -> core::result::Result<(), PlanViolation> {
        match walk.iter().find(|&&v| self.degrees[v] > 3) {
            Some(&v) => Err(PlanViolation::new(rule, format!("degree {} exceeds 3", self.degrees[v])).vertex(v)),
            None => Ok(()),
        }
    }

    /// Divalent path inside one nontrivial block with divalent termini.
    fn clause_i(&self, el: &PathElement, walk: &[usize]) -> core::result::Result<(), PlanViolation> {
        let PathElement::Open { edges, termini: (a, b) } = el else {
            return Err(PlanViolation::new(Rule::ClauseI, "not an open path"));
        };
        let block = self.bd.block_of_index(self.index(edges[0]));
        if let Some(e) = edges.iter().find(|e| self.bd.block_of_index(self.index(**e)) != block) {
            return Err(PlanViolation::new(Rule::ClauseI, "edges lie in different blocks").edge(*e));
        }
        let block = &self.bd.blocks[block];
        if !block.nontrivial {
            return Err(PlanViolation::new(Rule::ClauseI, "block is trivial").edge(edges[0]));
        }
        for &v in &walk[1..walk.len() - 1] {
            let in_block: usize = block
                .edges
                .iter()
                .map(|id| {
                    let e = self.g.edge(*id).expect("block edge");
                    usize::from(e.u == v) + usize::from(e.v == v)
                })
                .sum();
            if in_block != 2 {
                return Err(PlanViolation::new(
                    Rule::ClauseI,
                    format!("internal vertex has degree {in_block} in its block"),
                )
                .vertex(v));
            }
        }
        self.check_max_degree(walk, Rule::ClauseI)?;
        for t in [*a, *b] {
            if self.degrees[t] != 2 {
                return Err(
                    PlanViolation::new(Rule::ClauseI, format!("terminus has degree {}", self.degrees[t])).vertex(t)
                );
            }
        }
        Ok(())
    }

    /// Path of isthmi with termini of degree at most 2.
    fn clause_ii(&self, el: &PathElement, walk: &[usize]) -> core::result::Result<(), PlanViolation> {
        let PathElement::Open { edges, termini: (a, b) } = el else {
            return Err(PlanViolation::new(Rule::ClauseII, "not an open path"));
        };
        if let Some(e) = edges.iter().find(|e| !self.isthmus[self.index(**e)]) {
            return Err(PlanViolation::new(Rule::ClauseII, "edge is not an isthmus").edge(*e));
        }
        self.check_max_degree(walk, Rule::ClauseII)?;
        for t in [*a, *b] {
            if self.degrees[t] > 2 {
                return Err(
                    PlanViolation::new(Rule::ClauseII, format!("terminus has degree {}", self.degrees[t])).vertex(t)
                );
            }
        }
        Ok(())
    }

    /// A whole megablock that is a circle.
    fn clause_iii(&self, el: &PathElement, walk: &[usize]) -> core::result::Result<(), PlanViolation> {
        if !matches!(el, PathElement::Circle { .. }) {
            return Err(PlanViolation::new(Rule::ClauseIII, "not a circle"));
        }
        let edges = el.edge_set();
        if !self.megablocks.iter().any(|m| m.edges == edges) {
            return Err(PlanViolation::new(Rule::ClauseIII, "circle is not a whole megablock"));
        }
        self.check_max_degree(walk, Rule::ClauseIII)
    }
}

/// Checks every element against clauses (i), (ii), (iii) and pairwise
/// vertex-disjointness.
pub fn validate_plan_a(p: &PlanA) -> core::result::Result<(), Vec<PlanViolation>> {
    let cx = Context::new(&p.base);
    let mut violations = Vec::new();
    let mut owner: alloc::collections::BTreeMap<usize, usize> = Default::default();
    for (i, el) in p.elements.iter().enumerate() {
        let walk = match el.trace(&p.base) {
            Ok(w) => w,
            Err(err) => {
                violations.push(PlanViolation::new(Rule::Malformed, format!("{err}")).element(i));
                continue;
            }
        };
        let attempts = [cx.clause_i(el, &walk), cx.clause_ii(el, &walk), cx.clause_iii(el, &walk)];
        if attempts.iter().all(|r| r.is_err()) {
            violations.extend(attempts.into_iter().filter_map(|r| r.err()).map(|v| v.element(i)));
        }
        let vertices: BTreeSet<usize> = walk.iter().copied().collect();
        for v in vertices {
            if let Some(&j) = owner.get(&v) {
                violations
                    .push(PlanViolation::new(Rule::Disjoint, format!("shared with element {j}")).element(i).vertex(v));
            } else {
                owner.insert(v, i);
            }
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Edges of the elements negative, all others positive.
pub fn apply_plan_a(p: &PlanA) -> Result<SignedGraph> {
    validate_plan_a(p).map_err(Error::InvalidPlan)?;
    let negative: BTreeSet<EdgeId> = p.elements.iter().flat_map(|el| el.edges().iter().copied()).collect();
    Ok(SignedGraph::with_signs(
        p.base.clone(),
        |e| {
            if negative.contains(&e.id) {
                Sign::Negative
            } else {
                Sign::Positive
            }
        },
    ))
}

/// Every element shape the clauses allow, each once.
fn candidates(g: &Graph) -> Vec<PathElement> {
    let cx = Context::new(g);
    let inc = g.incidence();
    let mut out: BTreeSet<PathElement> = BTreeSet::new();

    for m in &cx.megablocks {
        let el = circle_of(g, &m.edges);
        if let Some(el) = el {
            if let Ok(walk) = el.trace(g) {
                if cx.clause_iii(&el, &walk).is_ok() {
                    out.insert(el.canonical());
                }
            }
        }
    }

    // paths from every start along edges of one kind (isthmi, or edges of
    // one block), keeping each one that satisfies a clause
    for s in 0..g.vertex_count() {
        if cx.degrees[s] > 2 {
            continue;
        }
        for &(first, _) in &inc[s] {
            if !g.edges()[first].is_loop() {
                let mut walk = alloc::vec![s];
                let mut edges = Vec::new();
                grow(&cx, &inc, first, first, &mut walk, &mut edges, &mut out);
            }
        }
    }
    out.into_iter().collect()
}

fn grow(
    cx: &Context<'_>,
    inc: &[Vec<(usize, usize)>],
    kind: usize,
    ei: usize,
    walk: &mut Vec<usize>,
    edges: &mut Vec<EdgeId>,
    out: &mut BTreeSet<PathElement>,
) {
    let g = cx.g;
    let e = g.edges()[ei];
    let at = e.other(walk[walk.len() - 1]);
    if walk.contains(&at) {
        return;
    }
    walk.push(at);
    edges.push(e.id);
    let el = PathElement::Open { edges: edges.clone(), termini: (walk[0], at) };
    if cx.clause_i(&el, walk).is_ok() || cx.clause_ii(&el, walk).is_ok() {
        out.insert(el.canonical());
    }
    if cx.degrees[at] <= 3 {
        let same_kind = |fi: usize| {
            fi != ei
                && !g.edges()[fi].is_loop()
                && if cx.isthmus[kind] {
                    cx.isthmus[fi]
                } else {
                    cx.bd.block_of_index(fi) == cx.bd.block_of_index(kind)
                }
        };
        let options: Vec<usize> = inc[at].iter().map(|&(fi, _)| fi).filter(|&fi| same_kind(fi)).collect();
        // inside a block only divalent vertices may be passed through
        if cx.isthmus[kind] || options.len() == 1 {
            for fi in options {
                grow(cx, inc, kind, fi, walk, edges, out);
            }
        }
    }
    walk.pop();
    edges.pop();
}

fn circle_of(g: &Graph, edges: &[EdgeId]) -> Option<PathElement> {
    // order the edge set as a walk, if it is a circle
    let mut remaining: Vec<EdgeId> = edges.to_vec();
    let first = remaining.remove(0);
    let e0 = g.edge(first)?;
    let start = e0.u;
    let mut at = e0.other(start);
    let mut order = alloc::vec![first];
    while !remaining.is_empty() {
        let pos = remaining.iter().position(|id| g.edge(*id).is_some_and(|e| e.is_incident(at)))?;
        let id = remaining.remove(pos);
        at = g.edge(id)?.other(at);
        order.push(id);
    }
    (at == start).then_some(PathElement::Circle { edges: order })
}

/// Random plan for `g`: candidate elements in random order, each kept with
/// probability one half when disjoint from those already kept.
pub fn sample_plan_a(g: &Graph, seed: u64) -> PlanA {
    let mut r = rng(seed);
    let mut pool = candidates(g);
    pool.shuffle(&mut r);
    let mut used: BTreeSet<usize> = BTreeSet::new();
    let mut elements = Vec::new();
    for el in pool {
        let walk = el.trace(g).expect("candidate traces");
        if walk.iter().any(|v| used.contains(v)) || !r.gen_bool(0.5) {
            continue;
        }
        used.extend(walk);
        elements.push(el);
    }
    elements.sort();
    PlanA { base: g.clone(), elements }
}
