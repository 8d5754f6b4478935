//! Byte-stable `key: value` reports for the `check` command.

use std::fmt::Write as _;

use sgline_core::balance::is_balanced;
use sgline_core::linegraph::is_line_consistent_oracle;
use sgline_core::properties::{property2_clauses, PropertyViolation};
use sgline_core::{EdgeId, Error, PathElement, SignedGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub text: String,
    pub balanced: bool,
    pub property: bool,
    /// `None` when the graph is not simple.
    pub line_consistent: Option<bool>,
    /// Brute-force verdict, when asked for.
    pub oracle: Option<bool>,
}

impl Report {
    pub fn disagrees(&self) -> bool {
        matches!((self.line_consistent, self.oracle), (Some(a), Some(b)) if a != b)
    }
}

fn ids(edges: &[EdgeId]) -> String {
    edges.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn violation_line(v: &PropertyViolation) -> String {
    let mut line =
        format!("violation {} vertex {} degree {} negative {}", v.clause, v.vertex, v.degree, v.negative_degree);
    if let Some(c) = &v.circle {
        write!(line, " circle {}", ids(c.edges())).unwrap();
    }
    line
}

/// Builds the report. `oracle_cap` asks for the brute-force verdict on
/// simple graphs; a cap overflow is returned as an error.
pub fn check_report(s: &SignedGraph, oracle_cap: Option<usize>) -> Result<Report, Error> {
    let g = s.graph();
    let balance = is_balanced(s)?;
    let property = property2_clauses(s);
    let simple = g.is_simple();
    let line_consistent = simple.then_some(balance.balanced && property.holds);

    let mut out = String::new();
    writeln!(out, "vertices: {}", g.vertex_count()).unwrap();
    writeln!(out, "edges: {}", g.edge_count()).unwrap();
    writeln!(out, "negative-edges: {}", s.negative_edges().count()).unwrap();
    writeln!(out, "simple: {}", yes_no(simple)).unwrap();
    writeln!(out, "balanced: {}", yes_no(balance.balanced)).unwrap();
    if let Some(x) = &balance.witness_cut {
        let xs: Vec<String> = x.iter().map(|v| v.to_string()).collect();
        writeln!(out, "negative-cut: {}", xs.join(" ")).unwrap();
    }
    if let Some(PathElement::Circle { edges }) = &balance.witness_circle {
        writeln!(out, "negative-circle: {}", ids(edges)).unwrap();
    }
    writeln!(out, "property2: {}", yes_no(property.holds)).unwrap();
    for v in &property.violations {
        writeln!(out, "{}", violation_line(v)).unwrap();
    }
    let verdict = line_consistent.map_or("n/a", yes_no);
    writeln!(out, "line-consistent: {verdict}").unwrap();

    let mut oracle = None;
    if let Some(cap) = oracle_cap {
        if simple {
            let o = is_line_consistent_oracle(s, cap)?;
            oracle = Some(o);
            writeln!(out, "oracle: {}", yes_no(o)).unwrap();
            writeln!(out, "oracle-agreement: {}", if Some(o) == line_consistent { "AGREE" } else { "DISAGREE" })
                .unwrap();
        } else {
            writeln!(out, "oracle: n/a").unwrap();
        }
    }
    Ok(Report { text: out, balanced: balance.balanced, property: property.holds, line_consistent, oracle })
}
