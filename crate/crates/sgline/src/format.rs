//! Line-oriented text formats for signed graphs, vertex-signed graphs and
//! construction plans. `#` starts a comment; blank lines are ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use sgline_core::constructions::{BlockSigning, PlanA, PlanB, PlanC, PlanD, Subdivision};
use sgline_core::{EdgeId, Graph, PathElement, Sign, SignedGraph, VertexSignedGraph};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

// (line number, tokens) for every non-blank line
fn tokenize(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, l)| {
            let l = l.split('#').next().unwrap_or("");
            let toks: Vec<&str> = l.split_whitespace().collect();
            (!toks.is_empty()).then_some((i + 1, toks))
        })
        .collect()
}

fn num(line: usize, tok: &str, what: &str) -> Result<usize, ParseError> {
    tok.parse().map_err(|_| err(line, format!("expected {what}, found {tok:?}")))
}

fn sign(line: usize, tok: &str) -> Result<Sign, ParseError> {
    let mut chars = tok.chars();
    match (chars.next().and_then(Sign::from_char), chars.next()) {
        (Some(s), None) => Ok(s),
        _ => Err(err(line, format!("expected + or -, found {tok:?}"))),
    }
}

fn signs(line: usize, tok: &str) -> Result<Vec<Sign>, ParseError> {
    tok.chars().map(|c| Sign::from_char(c).ok_or_else(|| err(line, format!("bad sign {c:?} in {tok:?}")))).collect()
}

fn sign_string(seq: &[Sign]) -> String {
    seq.iter().map(|s| s.as_char()).collect()
}

#[derive(Default)]
struct EdgeList {
    vertices: Option<(usize, usize)>,
    edges: Vec<(usize, EdgeId, usize, usize, Option<Sign>)>,
}

impl EdgeList {
    /// Takes a `vertices` or `edge` line; false for any other keyword.
    fn accept(&mut self, line: usize, toks: &[&str], signed: Option<bool>) -> Result<bool, ParseError> {
        match toks[0] {
            "vertices" => {
                if self.vertices.is_some() {
                    return Err(err(line, "repeated vertices line"));
                }
                if toks.len() != 2 {
                    return Err(err(line, "usage: vertices <n>"));
                }
                self.vertices = Some((line, num(line, toks[1], "a vertex count")?));
            }
            "edge" => {
                let want = match signed {
                    Some(true) => 5,
                    Some(false) => 4,
                    None if toks.len() == 5 => 5,
                    None => 4,
                };
                if toks.len() != want {
                    let usage = if want == 5 { "edge <id> <u> <v> <+|->" } else { "edge <id> <u> <v>" };
                    return Err(err(line, format!("usage: {usage}")));
                }
                let id = EdgeId(num(line, toks[1], "an edge id")?);
                let u = num(line, toks[2], "a vertex")?;
                let v = num(line, toks[3], "a vertex")?;
                let s = if want == 5 { Some(sign(line, toks[4])?) } else { None };
                self.edges.push((line, id, u, v, s));
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn vertex_count(&self, fallback_line: usize) -> Result<usize, ParseError> {
        self.vertices.map(|(_, n)| n).ok_or_else(|| err(fallback_line, "missing vertices line"))
    }

    fn graph(&self, fallback_line: usize) -> Result<Graph, ParseError> {
        let n = self.vertex_count(fallback_line)?;
        let mut seen = BTreeSet::new();
        for &(line, id, u, v, _) in &self.edges {
            if !seen.insert(id) {
                return Err(err(line, format!("duplicate edge id {id}")));
            }
            if u >= n || v >= n {
                return Err(err(line, format!("vertex out of range (graph has {n} vertices)")));
            }
        }
        Ok(Graph::new(n, self.edges.iter().map(|&(_, id, u, v, _)| (id, u, v))).expect("checked above"))
    }

    fn signed(&self, fallback_line: usize) -> Result<SignedGraph, ParseError> {
        let g = self.graph(fallback_line)?;
        let by_id: BTreeMap<EdgeId, Sign> =
            self.edges.iter().map(|&(_, id, _, _, s)| (id, s.expect("signed edge line"))).collect();
        Ok(SignedGraph::with_signs(g, |e| by_id[&e.id]))
    }
}

/// Parses the signed graph format:
///
/// ```text
/// vertices 4
/// edge 0 0 1 -
/// edge 1 1 2 +
/// ```
pub fn parse_sg(text: &str) -> Result<SignedGraph, ParseError> {
    let mut list = EdgeList::default();
    let lines = tokenize(text);
    for (line, toks) in &lines {
        if !list.accept(*line, toks, Some(true))? {
            return Err(err(*line, format!("unknown keyword {:?}", toks[0])));
        }
    }
    list.signed(lines.first().map_or(1, |l| l.0))
}

fn write_edges(out: &mut String, g: &Graph, signs: Option<&[Sign]>) {
    writeln!(out, "vertices {}", g.vertex_count()).unwrap();
    for (i, e) in g.edges().iter().enumerate() {
        match signs {
            Some(s) => writeln!(out, "edge {} {} {} {}", e.id, e.u, e.v, s[i].as_char()).unwrap(),
            None => writeln!(out, "edge {} {} {}", e.id, e.u, e.v).unwrap(),
        }
    }
}

pub fn write_sg(s: &SignedGraph) -> String {
    let mut out = String::new();
    write_edges(&mut out, s.graph(), Some(s.signs()));
    out
}

/// Parses the vertex-signed format: a `vertices` line, one `vsign <v> <+|->`
/// line per vertex, and unsigned `edge <id> <u> <v>` lines.
pub fn parse_vsign(text: &str) -> Result<VertexSignedGraph, ParseError> {
    let mut list = EdgeList::default();
    let mut vs: BTreeMap<usize, Sign> = BTreeMap::new();
    let lines = tokenize(text);
    for (line, toks) in &lines {
        if toks[0] == "vsign" {
            if toks.len() != 3 {
                return Err(err(*line, "usage: vsign <v> <+|->"));
            }
            let v = num(*line, toks[1], "a vertex")?;
            if vs.insert(v, sign(*line, toks[2])?).is_some() {
                return Err(err(*line, format!("vertex {v} signed twice")));
            }
        } else if !list.accept(*line, toks, Some(false))? {
            return Err(err(*line, format!("unknown keyword {:?}", toks[0])));
        }
    }
    let first = lines.first().map_or(1, |l| l.0);
    let g = list.graph(first)?;
    if vs.keys().copied().ne(0..g.vertex_count()) {
        return Err(err(first, "every vertex needs exactly one vsign line"));
    }
    Ok(VertexSignedGraph::new(g, vs.into_values().collect()).expect("one sign per vertex"))
}

pub fn write_vsign(vg: &VertexSignedGraph) -> String {
    let mut out = String::new();
    writeln!(out, "vertices {}", vg.graph().vertex_count()).unwrap();
    for (v, s) in vg.vertex_signs().iter().enumerate() {
        writeln!(out, "vsign {v} {}", s.as_char()).unwrap();
    }
    for e in vg.graph().edges() {
        writeln!(out, "edge {} {} {}", e.id, e.u, e.v).unwrap();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Plan {
    A(PlanA),
    B(PlanB),
    C(PlanC),
    D(PlanD),
}

impl Plan {
    pub fn kind(&self) -> char {
        match self {
            Plan::A(_) => 'a',
            Plan::B(_) => 'b',
            Plan::C(_) => 'c',
            Plan::D(_) => 'd',
        }
    }
}

fn parse_element(line: usize, toks: &[&str]) -> Result<PathElement, ParseError> {
    let usage = "usage: element open <ids> terminus <a> <b> | element closed <ids> terminus <v> | element circle <ids>";
    if toks.len() < 3 {
        return Err(err(line, usage));
    }
    let split = toks.iter().position(|t| *t == "terminus").unwrap_or(toks.len());
    let edges: Vec<EdgeId> =
        toks[2..split].iter().map(|t| num(line, t, "an edge id").map(EdgeId)).collect::<Result<_, _>>()?;
    if edges.is_empty() {
        return Err(err(line, "element without edges"));
    }
    let termini: Vec<usize> =
        toks.get(split + 1..).unwrap_or(&[]).iter().map(|t| num(line, t, "a vertex")).collect::<Result<_, _>>()?;
    match (toks[1], split < toks.len(), termini.as_slice()) {
        ("open", true, &[a, b]) => Ok(PathElement::Open { edges, termini: (a, b) }),
        ("closed", true, &[t]) => Ok(PathElement::Closed { edges, terminus: t }),
        ("circle", false, []) => Ok(PathElement::Circle { edges }),
        _ => Err(err(line, usage)),
    }
}

/// Parses a plan file. See the README for the grammar.
pub fn parse_plan(text: &str) -> Result<Plan, ParseError> {
    let lines = tokenize(text);
    let Some((first_line, head)) = lines.first() else {
        return Err(err(1, "empty plan"));
    };
    let kind = match head.as_slice() {
        ["plan", k @ ("a" | "b" | "c" | "d")] => k.chars().next().unwrap(),
        _ => return Err(err(*first_line, "first line must be: plan a|b|c|d")),
    };
    let signed_base = kind == 'b';
    let mut base = EdgeList::default();
    let mut in_base = false;
    let mut saw_base = false;
    let mut f_prime: Option<BTreeSet<EdgeId>> = None;
    let mut elements = Vec::new();
    let mut subdiv: BTreeMap<EdgeId, Vec<Sign>> = BTreeMap::new();
    let mut block_lines: BTreeMap<usize, BlockSigning> = BTreeMap::new();
    let mut negisthmi = BTreeSet::new();

    for (line, toks) in &lines[1..] {
        let line = *line;
        if in_base && base.accept(line, toks, Some(signed_base))? {
            continue;
        }
        in_base = false;
        let allowed = |ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(err(line, format!("{:?} is not allowed in a plan {kind}", toks[0])))
            }
        };
        match toks[0] {
            "base" => {
                if saw_base || toks.len() != 1 {
                    return Err(err(line, "expected a single bare base line"));
                }
                saw_base = true;
                in_base = true;
            }
            "fprime" => {
                allowed(kind != 'a')?;
                if f_prime.is_some() {
                    return Err(err(line, "repeated fprime line"));
                }
                f_prime =
                    Some(toks[1..].iter().map(|t| num(line, t, "an edge id").map(EdgeId)).collect::<Result<_, _>>()?);
            }
            "element" => elements.push(parse_element(line, toks)?),
            "subdiv" => {
                allowed(kind != 'a')?;
                if toks.len() != 4 {
                    return Err(err(line, "usage: subdiv <id> <len> <signs>"));
                }
                let id = EdgeId(num(line, toks[1], "an edge id")?);
                let len = num(line, toks[2], "a length")?;
                let seq = signs(line, toks[3])?;
                if seq.len() != len {
                    return Err(err(line, format!("length {len} but {} signs", seq.len())));
                }
                if subdiv.insert(id, seq).is_some() {
                    return Err(err(line, format!("edge {id} subdivided twice")));
                }
            }
            "block" => {
                allowed(kind == 'd')?;
                let idx = toks.get(1).map(|t| num(line, t, "a block index")).transpose()?;
                let signing = match toks.get(2..) {
                    Some(["allpos"]) => BlockSigning::AllPositive,
                    Some(["cut", rest @ ..]) if !rest.is_empty() => {
                        BlockSigning::Cut(rest.iter().map(|t| num(line, t, "a vertex")).collect::<Result<_, _>>()?)
                    }
                    _ => return Err(err(line, "usage: block <index> allpos | block <index> cut <v>...")),
                };
                let idx = idx.expect("matched above");
                if block_lines.insert(idx, signing).is_some() {
                    return Err(err(line, format!("block {idx} signed twice")));
                }
            }
            "negisthmus" => {
                allowed(kind == 'd')?;
                for t in &toks[1..] {
                    negisthmi.insert(EdgeId(num(line, t, "an edge id")?));
                }
            }
            "vertices" | "edge" => return Err(err(line, "graph lines belong right after the base line")),
            other => return Err(err(line, format!("unknown keyword {other:?}"))),
        }
    }
    if !saw_base {
        return Err(err(*first_line, "missing base section"));
    }
    if block_lines.keys().copied().ne(0..block_lines.len()) {
        return Err(err(*first_line, "block indices must run 0, 1, 2, ..."));
    }
    let steps = Subdivision { f_prime: f_prime.unwrap_or_default(), elements, signs: subdiv };
    Ok(match kind {
        'a' => Plan::A(PlanA { base: base.graph(*first_line)?, elements: steps.elements }),
        'b' => Plan::B(PlanB { base: base.signed(*first_line)?, steps }),
        'c' => Plan::C(PlanC { base: base.graph(*first_line)?, steps }),
        _ => Plan::D(PlanD {
            base: base.graph(*first_line)?,
            block_signing: block_lines.into_values().collect(),
            negative_isthmi: negisthmi,
            steps,
        }),
    })
}

fn write_element(out: &mut String, el: &PathElement) {
    let ids = |edges: &[EdgeId]| edges.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ");
    match el {
        PathElement::Open { edges, termini: (a, b) } => writeln!(out, "element open {} terminus {a} {b}", ids(edges)),
        PathElement::Closed { edges, terminus } => writeln!(out, "element closed {} terminus {terminus}", ids(edges)),
        PathElement::Circle { edges } => writeln!(out, "element circle {}", ids(edges)),
    }
    .unwrap();
}

fn write_steps(out: &mut String, steps: &Subdivision) {
    let ids: Vec<String> = steps.f_prime.iter().map(|e| e.to_string()).collect();
    if ids.is_empty() {
        writeln!(out, "fprime").unwrap();
    } else {
        writeln!(out, "fprime {}", ids.join(" ")).unwrap();
    }
    for el in &steps.elements {
        write_element(out, el);
    }
    for (id, seq) in &steps.signs {
        writeln!(out, "subdiv {id} {} {}", seq.len(), sign_string(seq)).unwrap();
    }
}

pub fn write_plan(p: &Plan) -> String {
    let mut out = format!("plan {}\nbase\n", p.kind());
    match p {
        Plan::A(a) => {
            write_edges(&mut out, &a.base, None);
            for el in &a.elements {
                write_element(&mut out, el);
            }
        }
        Plan::B(b) => {
            write_edges(&mut out, b.base.graph(), Some(b.base.signs()));
            write_steps(&mut out, &b.steps);
        }
        Plan::C(c) => {
            write_edges(&mut out, &c.base, None);
            write_steps(&mut out, &c.steps);
        }
        Plan::D(d) => {
            write_edges(&mut out, &d.base, None);
            write_steps(&mut out, &d.steps);
            for (i, b) in d.block_signing.iter().enumerate() {
                match b {
                    BlockSigning::AllPositive => writeln!(out, "block {i} allpos").unwrap(),
                    BlockSigning::Cut(x) => {
                        let xs: Vec<String> = x.iter().map(|v| v.to_string()).collect();
                        writeln!(out, "block {i} cut {}", xs.join(" ")).unwrap();
                    }
                }
            }
            for id in &d.negative_isthmi {
                writeln!(out, "negisthmus {id}").unwrap();
            }
        }
    }
    out
}
