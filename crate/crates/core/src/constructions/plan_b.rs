use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use super::{subdivision_layout, PlanViolation, Rule, SignRule, Subdivision};
use crate::graph::{EdgeId, Graph, PathElement, Sign, SignedGraph};
use crate::structure::blocks;
use crate::{Error, Result};

/// A signed base graph and how to subdivide and re-sign it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanB {
    pub base: SignedGraph,
    pub steps: Subdivision,
}

/// Like [`PlanB`] without base signs; `F'` is unconstrained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanC {
    pub base: Graph,
    pub steps: Subdivision,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockSigning {
    AllPositive,
    /// The block edges with exactly one end in this vertex set are negative.
    Cut(Vec<usize>),
}

/// Like [`PlanB`], with base signs given block by block so that every
/// nontrivial block is balanced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanD {
    pub base: Graph,
    /// One entry per nontrivial block, in block order.
    pub block_signing: Vec<BlockSigning>,
    /// Isthmi signed negative; all other isthmi are positive.
    pub negative_isthmi: BTreeSet<EdgeId>,
    pub steps: Subdivision,
}

fn errors_to_result(v: Vec<PlanViolation>) -> core::result::Result<(), Vec<PlanViolation>> {
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

/// Steps 2 to 6 against `base`. With `signs` present, `F'` must contain the
/// negative edges and every subdivision path must carry its base sign.
fn validate_subdivision(base: &Graph, signs: Option<&SignedGraph>, steps: &Subdivision) -> Vec<PlanViolation> {
    let g = base;
    let deg = g.degrees();
    let inc = g.incidence();
    let bd = blocks(g);
    let isthmus = bd.isthmus_flags(g);
    let index = |id: EdgeId| g.index_of(id).expect("traced element edge");
    let mut out = Vec::new();

    for v in 0..g.vertex_count() {
        if deg[v] == 2 && !g.has_loop_at(v) {
            out.push(PlanViolation::new(Rule::BaseDivalent, "divalent vertex without a loop").vertex(v));
        }
    }
    for e in g.edges() {
        match steps.signs.get(&e.id) {
            None => out.push(PlanViolation::new(Rule::Subdivision, "no sign sequence").edge(e.id)),
            Some(seq) if seq.is_empty() => {
                out.push(PlanViolation::new(Rule::Subdivision, "empty sign sequence").edge(e.id))
            }
            Some(_) => {}
        }
    }
    for id in steps.signs.keys() {
        if g.edge(*id).is_none() {
            out.push(PlanViolation::new(Rule::Subdivision, "sign sequence for an unknown edge").edge(*id));
        }
    }
    for id in &steps.f_prime {
        if g.edge(*id).is_none() {
            out.push(PlanViolation::new(Rule::Step3Partition, "F' names an unknown edge").edge(*id));
        }
    }
    if let Some(s) = signs {
        for e in s.negative_edges() {
            if !steps.f_prime.contains(&e.id) {
                out.push(PlanViolation::new(Rule::Step2, "negative edge missing from F'").edge(e.id));
            }
        }
    }

    let mut owner: BTreeMap<EdgeId, usize> = BTreeMap::new();
    for (i, el) in steps.elements.iter().enumerate() {
        let walk = match el.trace(g) {
            Ok(w) => w,
            Err(err) => {
                out.push(PlanViolation::new(Rule::Malformed, format!("{err}")).element(i));
                continue;
            }
        };
        let edges = el.edges();
        for id in edges {
            if !steps.f_prime.contains(id) {
                out.push(PlanViolation::new(Rule::Step3Partition, "edge not in F'").element(i).edge(*id));
            }
            if let Some(j) = owner.insert(*id, i) {
                out.push(
                    PlanViolation::new(Rule::Step3Partition, format!("edge also in element {j}")).element(i).edge(*id),
                );
            }
        }

        let circle = matches!(el, PathElement::Circle { .. });
        let internal = if circle { &walk[..walk.len() - 1] } else { &walk[1..walk.len() - 1] };
        for &v in internal {
            if deg[v] > 3 {
                out.push(
                    PlanViolation::new(Rule::Step3a, format!("internal vertex of degree {}", deg[v]))
                        .element(i)
                        .vertex(v),
                );
            } else if deg[v] == 3 {
                let third: Vec<usize> =
                    inc[v].iter().map(|&(ei, _)| ei).filter(|&ei| !edges.contains(&g.edges()[ei].id)).collect();
                if third.len() != 1 || !isthmus[third[0]] {
                    out.push(PlanViolation::new(Rule::Step3b, "third edge is not an isthmus").element(i).vertex(v));
                }
            }
        }
        let block = bd.block_of_index(index(edges[0]));
        let one_block = bd.blocks[block].nontrivial && edges.iter().all(|e| bd.block_of_index(index(*e)) == block);
        let all_isthmi = edges.iter().all(|e| isthmus[index(*e)]);
        if !(one_block || (all_isthmi && matches!(el, PathElement::Open { .. }))) {
            out.push(PlanViolation::new(Rule::Step3c, "not inside one nontrivial block nor made of isthmi").element(i));
        }
        for t in el.termini() {
            if deg[t] == 2 {
                out.push(PlanViolation::new(Rule::Step3d, "divalent terminus").element(i).vertex(t));
            }
        }

        // step 6, one subdivision path at a time
        for (pos, &id) in edges.iter().enumerate() {
            let Some(seq) = steps.signs.get(&id).filter(|s| !s.is_empty()) else {
                continue;
            };
            let (first, last) = end_rules(g, &deg, el, &walk, pos);
            let product = signs.map(|s| s.sign(id).expect("base edge"));
            let rule = SignRule { first: first.map(|c| c.0), last: last.map(|c| c.0), product };
            if !rule.feasible(seq.len()) {
                out.push(
                    PlanViolation::new(Rule::SignInfeasible, format!("no valid signing of length {}", seq.len()))
                        .element(i)
                        .edge(id),
                );
                continue;
            }
            if let Some(p) = product {
                if Sign::product(seq.iter().copied()) != p {
                    out.push(
                        PlanViolation::new(Rule::Step6a, format!("sign product differs from base sign {p}"))
                            .element(i)
                            .edge(id),
                    );
                }
            }
            if seq.iter().all(|s| !s.is_negative()) {
                out.push(PlanViolation::new(Rule::Step6b, "all positive").element(i).edge(id));
            }
            for (c, got, which) in [(first, seq[0], "first"), (last, seq[seq.len() - 1], "last")] {
                if let Some((want, r)) = c {
                    if got != want {
                        out.push(PlanViolation::new(r, format!("{which} sign must be {want}")).element(i).edge(id));
                    }
                }
            }
        }
    }
    for id in &steps.f_prime {
        if g.edge(*id).is_some() && !owner.contains_key(id) {
            out.push(PlanViolation::new(Rule::Step3Partition, "edge of F' in no element").edge(*id));
        }
    }
    for e in g.edges() {
        if !steps.f_prime.contains(&e.id) && steps.signs.get(&e.id).is_some_and(|s| s.iter().any(|x| x.is_negative())) {
            out.push(PlanViolation::new(Rule::Step5, "edge outside F' must stay positive").edge(e.id));
        }
    }
    out.sort();
    out
}

pub(super) type ForcedEnd = Option<(Sign, Rule)>;

/// Sign forced on the first and last edge of the subdivision path of the
/// element edge at `pos`, in the stored orientation of that edge, with the
/// rule forcing it.
pub(super) fn end_rules(
    g: &Graph,
    deg: &[usize],
    el: &PathElement,
    walk: &[usize],
    pos: usize,
) -> (ForcedEnd, ForcedEnd) {
    let circle = matches!(el, PathElement::Circle { .. });
    let id = el.edges()[pos];
    let end = |x: usize, terminal: bool| {
        if terminal {
            (deg[x] != 1).then_some((Sign::Positive, Rule::Step6c))
        } else {
            (deg[x] == 3).then_some((Sign::Negative, Rule::Step6d))
        }
    };
    let at_start = end(walk[pos], !circle && pos == 0);
    let at_end = end(walk[pos + 1], !circle && pos + 1 == el.len());
    let e = g.edge(id).expect("traced element edge");
    if e.is_loop() || walk[pos] == e.u {
        (at_start, at_end)
    } else {
        (at_end, at_start)
    }
}

fn build(base: &Graph, steps: &Subdivision) -> SignedGraph {
    let (n, layout) = subdivision_layout(base, |e| steps.length(e));
    let mut edges = Vec::new();
    for piece in &layout {
        let seq = &steps.signs[&piece.base];
        for (j, &id) in piece.edges.iter().enumerate() {
            edges.push((id, piece.vertices[j], piece.vertices[j + 1], seq[j]));
        }
    }
    SignedGraph::from_edges(n, edges).expect("layout ids and vertices are valid")
}

pub fn validate_plan_b(p: &PlanB) -> core::result::Result<(), Vec<PlanViolation>> {
    errors_to_result(validate_subdivision(p.base.graph(), Some(&p.base), &p.steps))
}

pub fn apply_plan_b(p: &PlanB) -> Result<SignedGraph> {
    validate_plan_b(p).map_err(Error::InvalidPlan)?;
    Ok(build(p.base.graph(), &p.steps))
}

pub fn validate_plan_c(p: &PlanC) -> core::result::Result<(), Vec<PlanViolation>> {
    errors_to_result(validate_subdivision(&p.base, None, &p.steps))
}

/// The built graph, and the base signed by the sign product of each
/// subdivision path.
pub fn apply_plan_c(p: &PlanC) -> Result<(SignedGraph, SignedGraph)> {
    validate_plan_c(p).map_err(Error::InvalidPlan)?;
    let derived = SignedGraph::with_signs(p.base.clone(), |e| Sign::product(p.steps.signs[&e.id].iter().copied()));
    Ok((build(&p.base, &p.steps), derived))
}

fn block_signing_violations(p: &PlanD) -> Vec<(PlanViolation, Option<usize>)> {
    let g = &p.base;
    let bd = blocks(g);
    let isthmus = bd.isthmus_flags(g);
    let mut out = Vec::new();
    let nontrivial: Vec<_> = bd.nontrivial().map(|(_, b)| b).collect();
    if nontrivial.len() != p.block_signing.len() {
        out.push((
            PlanViolation::new(
                Rule::BlockSigning,
                format!("{} nontrivial blocks but {} signings", nontrivial.len(), p.block_signing.len()),
            ),
            None,
        ));
    }
    for (k, (block, signing)) in nontrivial.iter().zip(&p.block_signing).enumerate() {
        let BlockSigning::Cut(x) = signing else { continue };
        let set: BTreeSet<usize> = x.iter().copied().collect();
        let bad = if set.is_empty() || set.len() >= block.vertices.len() {
            Some("cut side must be a nonempty proper subset of the block")
        } else if !set.iter().all(|v| block.vertices.binary_search(v).is_ok()) {
            Some("cut side leaves the block")
        } else if !block.edges.iter().any(|id| {
            let e = g.edge(*id).expect("block edge");
            set.contains(&e.u) != set.contains(&e.v)
        }) {
            Some("cut is empty")
        } else {
            None
        };
        if let Some(msg) = bad {
            out.push((PlanViolation::new(Rule::BlockSigning, format!("block {k}: {msg}")), Some(k)));
        }
    }
    for id in &p.negative_isthmi {
        if !g.index_of(*id).is_some_and(|i| isthmus[i]) {
            out.push((PlanViolation::new(Rule::BlockSigning, "negative isthmus is not an isthmus").edge(*id), None));
        }
    }
    out
}

/// The base signs a block signing stands for.
pub fn derive_plan_d_signs(p: &PlanD) -> Result<SignedGraph> {
    let problems = block_signing_violations(p);
    if let Some(block) = problems.iter().find_map(|(_, b)| *b) {
        return Err(Error::InvalidCut { block });
    }
    if !problems.is_empty() {
        return Err(Error::InvalidPlan(problems.into_iter().map(|(v, _)| v).collect()));
    }
    let g = &p.base;
    let bd = blocks(g);
    let mut negative: BTreeSet<EdgeId> = p.negative_isthmi.clone();
    for ((_, block), signing) in bd.nontrivial().zip(&p.block_signing) {
        if let BlockSigning::Cut(x) = signing {
            for id in &block.edges {
                let e = g.edge(*id).expect("block edge");
                if x.contains(&e.u) != x.contains(&e.v) {
                    negative.insert(*id);
                }
            }
        }
    }
    Ok(SignedGraph::with_signs(g.clone(), |e| if negative.contains(&e.id) { Sign::Negative } else { Sign::Positive }))
}

pub fn validate_plan_d(p: &PlanD) -> core::result::Result<(), Vec<PlanViolation>> {
    let problems = block_signing_violations(p);
    if !problems.is_empty() {
        return Err(problems.into_iter().map(|(v, _)| v).collect());
    }
    let base = derive_plan_d_signs(p).expect("block signing already checked");
    errors_to_result(validate_subdivision(&p.base, Some(&base), &p.steps))
}

pub fn apply_plan_d(p: &PlanD) -> Result<SignedGraph> {
    let base = derive_plan_d_signs(p)?;
    apply_plan_b(&PlanB { base, steps: p.steps.clone() })
}
