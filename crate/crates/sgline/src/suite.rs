//! Randomized and exhaustive cross-checks between the fast decision
//! procedures, the brute-force oracle and the constructions.
//!
//! Every instance draws from its own generator seeded by
//! `criterion * SEED_STRIDE + index`, so instances can run in any order
//! and any one of them can be replayed alone.

use std::fmt::Write as _;
use std::ops::ControlFlow;
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;
use sgline_core::balance::{is_balanced, is_balanced_cut, is_balanced_switching};
use sgline_core::constructions::{
    apply_plan_a, apply_plan_b, apply_plan_c, apply_plan_d, sample_plan_a, sample_plan_b, sample_plan_c, sample_plan_d,
    PlanD, SamplerParams,
};
use sgline_core::linegraph::is_line_consistent_oracle;
use sgline_core::properties::{corollary2_check, property2_literal, property3_local};
use sgline_core::random::{
    random_multigraph, random_signing, random_simple_graph, random_two_connected, rng, SeededRng,
};
use sgline_core::recovery::{recover_plan, round_trip_check};
use sgline_core::structure::{suppress_divalent, CircleSearch};
use sgline_core::{Graph, Sign, SignedGraph};

use crate::format::{write_plan, write_sg, Plan};
use crate::report::check_report;

pub const SEED_STRIDE: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Instances per randomized criterion; `None` runs the full counts.
    pub seeds: Option<usize>,
    pub max_vertices: usize,
    pub cap: usize,
    /// Feeds the fast checker a graph with one sign flipped, to show the
    /// harness notices.
    pub inject_mutant: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seeds: None, max_vertices: 8, cap: 100_000, inject_mutant: false }
    }
}

/// A failed instance, with enough to replay it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub criterion: u8,
    pub seed: u64,
    pub detail: String,
    pub graph: Option<SignedGraph>,
    pub plan: Option<Plan>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionResult {
    pub criterion: u8,
    pub name: &'static str,
    pub instances: usize,
    pub failures: Vec<Counterexample>,
    /// Extra counts worth printing, such as how many instances were
    /// eligible for a sub-check.
    pub notes: String,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn line(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let mut line = format!(
            "criterion {} {}: {verdict} {}/{}",
            self.criterion,
            self.name,
            self.instances - self.failures.len().min(self.instances),
            self.instances
        );
        if !self.notes.is_empty() {
            write!(line, " ({})", self.notes).unwrap();
        }
        line
    }
}

type Outcome = Result<(), Box<Counterexample>>;

fn fail(criterion: u8, seed: u64, detail: impl Into<String>, graph: Option<&SignedGraph>) -> Box<Counterexample> {
    Box::new(Counterexample { criterion, seed, detail: detail.into(), graph: graph.cloned(), plan: None })
}

fn seed_of(criterion: u8, index: usize) -> u64 {
    criterion as u64 * SEED_STRIDE + index as u64
}

fn run_instances(criterion: u8, count: usize, f: impl Fn(u64) -> Outcome + Sync) -> Vec<Counterexample> {
    let results: Vec<Outcome> = (0..count).into_par_iter().map(|i| f(seed_of(criterion, i))).collect();
    results.into_iter().filter_map(|r| r.err().map(|b| *b)).collect()
}

const SIGN_PROBABILITIES: [f64; 3] = [0.1, 0.3, 0.5];

/// The simple signed graphs behind criterion 1 (and reused by 6).
pub fn random_simple_instance(seed: u64, max_vertices: usize) -> SignedGraph {
    let mut r = rng(seed);
    let n = r.gen_range(1..=max_vertices.max(1));
    let m = r.gen_range(0..=(n * (n - 1) / 2).min(14));
    let p = SIGN_PROBABILITIES[(seed % 3) as usize];
    let g = random_simple_graph(&mut r, n, m);
    random_signing(&mut r, g, p)
}

fn random_multi_instance(r: &mut SeededRng, max_vertices: usize, max_edges: usize) -> SignedGraph {
    let n = r.gen_range(1..=max_vertices.max(1));
    let m = r.gen_range(0..=max_edges);
    let g = random_multigraph(r, n, m, 0.15);
    let p = SIGN_PROBABILITIES[r.gen_range(0..3)];
    random_signing(r, g, p)
}

fn flip_first_sign(s: &SignedGraph) -> SignedGraph {
    match s.graph().edges().first() {
        Some(e) => s.with_sign(e.id, -s.sign_at(0)).expect("edge exists"),
        None => s.clone(),
    }
}

/// Two adjacent negative edges on a square: line consistent.
pub fn mutant_fixture() -> SignedGraph {
    SignedGraph::from_edges(
        4,
        [(0, 0, 1, Sign::Negative), (1, 1, 2, Sign::Negative), (2, 2, 3, Sign::Positive), (3, 3, 0, Sign::Positive)]
            .map(|(i, a, b, s)| (sgline_core::EdgeId(i), a, b, s)),
    )
    .expect("fixture is well formed")
}

fn fast_vs_oracle(criterion: u8, seed: u64, fast_input: &SignedGraph, s: &SignedGraph, cap: usize) -> Outcome {
    let fast = is_balanced(fast_input).map_err(|e| fail(criterion, seed, e.to_string(), Some(s)))?.balanced
        && property3_local(fast_input).holds;
    match is_line_consistent_oracle(s, cap) {
        Ok(oracle) if oracle == fast => Ok(()),
        Ok(oracle) => Err(fail(criterion, seed, format!("fast verdict {fast}, oracle {oracle}"), Some(s))),
        Err(e) => Err(fail(criterion, seed, format!("oracle unavailable: {e}"), Some(s))),
    }
}

fn criterion1(cfg: &SuiteConfig, count: usize) -> CriterionResult {
    let mut failures = run_instances(1, count, |seed| {
        let s = random_simple_instance(seed, cfg.max_vertices);
        fast_vs_oracle(1, seed, &s, &s, cfg.cap)
    });
    let mut instances = count;
    if cfg.inject_mutant {
        let s = mutant_fixture();
        instances += 1;
        if let Err(c) = fast_vs_oracle(1, u64::MAX, &flip_first_sign(&s), &s, cfg.cap) {
            failures.push(Counterexample { detail: format!("injected mutant: {}", c.detail), ..*c });
        }
    }
    CriterionResult { criterion: 1, name: "fast-decision-vs-oracle", instances, failures, notes: String::new() }
}

fn literal_vs_local(criterion: u8, seed: u64, s: &SignedGraph, cap: usize) -> Outcome {
    let local = property3_local(s).holds;
    match property2_literal(s, cap) {
        Ok(lit) if lit.holds == local => Ok(()),
        Ok(lit) => Err(fail(criterion, seed, format!("literal {}, local {local}", lit.holds), Some(s))),
        Err(e) => Err(fail(criterion, seed, e.to_string(), Some(s))),
    }
}

/// Every labelled simple graph on up to `max_n` vertices under every sign
/// pattern, stopping once `limit` instances have been produced. The seed of
/// an instance encodes `(n, edge mask, sign mask)`.
fn criterion2a(cfg: &SuiteConfig, max_n: usize, limit: usize) -> CriterionResult {
    let mut jobs: Vec<(usize, u64)> = Vec::new();
    let mut total = 0usize;
    'outer: for n in 1..=max_n {
        let pairs = n * (n - 1) / 2;
        for mask in 0..1u64 << pairs {
            let m = mask.count_ones() as usize;
            if total + (1usize << m) > limit {
                break 'outer;
            }
            total += 1 << m;
            jobs.push((n, mask));
        }
    }
    let failures: Vec<Counterexample> = jobs
        .par_iter()
        .flat_map_iter(|&(n, mask)| {
            let all: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
            let chosen: Vec<(usize, usize)> = (0..all.len()).filter(|i| mask >> i & 1 == 1).map(|i| all[i]).collect();
            let g = Graph::from_pairs(n, &chosen).expect("pairs in range");
            (0..1u64 << chosen.len()).filter_map(move |signs| {
                let s = SignedGraph::with_signs(g.clone(), |e| {
                    if signs >> e.id.0 & 1 == 1 {
                        Sign::Negative
                    } else {
                        Sign::Positive
                    }
                });
                let seed = ((n as u64) << 56) | (mask << 20) | signs;
                literal_vs_local(2, seed, &s, cfg.cap).err().map(|b| *b)
            })
        })
        .collect();
    CriterionResult {
        criterion: 2,
        name: "literal-vs-local-exhaustive",
        instances: total,
        failures,
        notes: format!("all simple graphs on at most {max_n} vertices"),
    }
}

fn criterion2b(cfg: &SuiteConfig, count: usize) -> CriterionResult {
    let failures = run_instances(2, count, |seed| {
        let s = random_multi_instance(&mut rng(seed), cfg.max_vertices, 14);
        literal_vs_local(2, seed, &s, cfg.cap)
    });
    CriterionResult {
        criterion: 2,
        name: "literal-vs-local-multigraphs",
        instances: count,
        failures,
        notes: String::new(),
    }
}

fn criterion3(cfg: &SuiteConfig, count: usize) -> CriterionResult {
    let checked = std::sync::atomic::AtomicUsize::new(0);
    let failures = run_instances(3, count, |seed| {
        let s = random_multi_instance(&mut rng(seed), cfg.max_vertices, 14);
        let switching = is_balanced_switching(&s).balanced;
        let cut = is_balanced_cut(&s);
        if switching != cut {
            return Err(fail(3, seed, format!("switching {switching}, cut {cut}"), Some(&s)));
        }
        if s.graph().edge_count() <= 10 {
            checked.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            let found = CircleSearch::new(s.graph()).run(|edges, _| {
                if Sign::product(edges.iter().map(|e| s.sign(*e).expect("circle edge"))).is_negative() {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            });
            let has_negative_circle = found.is_break();
            if has_negative_circle == switching {
                return Err(fail(
                    3,
                    seed,
                    format!("balanced {switching} but negative circle {has_negative_circle}"),
                    Some(&s),
                ));
            }
        }
        Ok(())
    });
    let checked = checked.into_inner();
    let notes = format!("{checked} with at most 10 edges checked against every circle");
    CriterionResult { criterion: 3, name: "switching-vs-cut", instances: count, failures, notes }
}

fn criterion4(cfg: &SuiteConfig, count: usize) -> CriterionResult {
    let failures = run_instances(4, count, |seed| {
        let s = random_multi_instance(&mut rng(seed), cfg.max_vertices, 14);
        let reduced = suppress_divalent(&s).reduced;
        let before = is_balanced_switching(&s).balanced;
        let after = is_balanced_switching(&reduced).balanced;
        if before != after {
            return Err(fail(4, seed, format!("balanced {before} before suppression, {after} after"), Some(&s)));
        }
        let (r0, r1) = (s.graph().cycle_rank(), reduced.graph().cycle_rank());
        if r0 != r1 {
            return Err(fail(4, seed, format!("cycle rank {r0} became {r1}"), Some(&s)));
        }
        Ok(())
    });
    CriterionResult { criterion: 4, name: "suppression-invariance", instances: count, failures, notes: String::new() }
}

fn sampler_params(cfg: &SuiteConfig) -> SamplerParams {
    SamplerParams { max_vertices: cfg.max_vertices, ..SamplerParams::default() }
}

fn plan_failure(
    criterion: u8,
    seed: u64,
    detail: String,
    graph: Option<&SignedGraph>,
    plan: Plan,
) -> Box<Counterexample> {
    Box::new(Counterexample { plan: Some(plan), ..*fail(criterion, seed, detail, graph) })
}

fn local_holds(criterion: u8, seed: u64, s: &SignedGraph, plan: Plan) -> Outcome {
    let check = property3_local(s);
    if check.holds {
        Ok(())
    } else {
        let at: Vec<String> = check.violations.iter().map(|v| v.vertex.to_string()).collect();
        Err(plan_failure(criterion, seed, format!("local conditions fail at {}", at.join(" ")), Some(s), plan))
    }
}

fn criterion5(cfg: &SuiteConfig, count: usize) -> CriterionResult {
    let params = sampler_params(cfg);
    // three interleaved streams: A on random multigraphs, then B, then C
    let failures = run_instances(5, 3 * count, |seed| {
        let which = seed % 3;
        match which {
            0 => {
                let mut r = rng(seed);
                let n = r.gen_range(1..=cfg.max_vertices.max(1));
                let m = r.gen_range(0..=12);
                let g = random_multigraph(&mut r, n, m, 0.1);
                let plan = sample_plan_a(&g, seed);
                match apply_plan_a(&plan) {
                    Ok(s) => local_holds(5, seed, &s, Plan::A(plan)),
                    Err(e) => Err(plan_failure(5, seed, e.to_string(), None, Plan::A(plan))),
                }
            }
            1 => match sample_plan_b(seed, &params) {
                Ok(plan) => match apply_plan_b(&plan) {
                    Ok(s) => local_holds(5, seed, &s, Plan::B(plan)),
                    Err(e) => Err(plan_failure(5, seed, e.to_string(), None, Plan::B(plan))),
                },
                Err(e) => Err(fail(5, seed, e.to_string(), None)),
            },
            _ => match sample_plan_c(seed, &params) {
                Ok(plan) => match apply_plan_c(&plan) {
                    Ok((s, _)) => local_holds(5, seed, &s, Plan::C(plan)),
                    Err(e) => Err(plan_failure(5, seed, e.to_string(), None, Plan::C(plan))),
                },
                Err(e) => Err(fail(5, seed, e.to_string(), None)),
            },
        }
    });
    CriterionResult {
        criterion: 5,
        name: "construction-soundness",
        instances: 3 * count,
        failures,
        notes: format!("{count} each of A, B, C"),
    }
}

fn criterion6(cfg: &SuiteConfig, stream: usize, count: usize) -> CriterionResult {
    let eligible = std::sync::atomic::AtomicUsize::new(0);
    let mut failures = run_instances(1, stream, |seed| {
        let s = random_simple_instance(seed, cfg.max_vertices);
        if !property3_local(&s).holds {
            return Ok(());
        }
        eligible.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        match round_trip_check(&s) {
            Ok(true) => Ok(()),
            Ok(false) => Err(fail(6, seed, "rebuilt graph differs", Some(&s))),
            Err(e) => Err(fail(6, seed, e.to_string(), Some(&s))),
        }
    });
    let params = sampler_params(cfg);
    failures.extend(run_instances(6, count, |seed| {
        let plan = sample_plan_b(seed, &params).map_err(|e| fail(6, seed, e.to_string(), None))?;
        let s = apply_plan_b(&plan).map_err(|e| plan_failure(6, seed, e.to_string(), None, Plan::B(plan.clone())))?;
        match recover_plan(&s) {
            Ok(back) if back == plan => Ok(()),
            Ok(back) => Err(plan_failure(
                6,
                seed,
                format!("recovered a different plan:\n{}", write_plan(&Plan::B(back))),
                Some(&s),
                Plan::B(plan),
            )),
            Err(e) => Err(plan_failure(6, seed, e.to_string(), Some(&s), Plan::B(plan))),
        }
    }));
    let eligible = eligible.into_inner();
    CriterionResult {
        criterion: 6,
        name: "round-trip-and-uniqueness",
        instances: eligible + count,
        failures,
        notes: format!("{eligible} graphs from criterion 1 stream, {count} sampled plans"),
    }
}

/// Largest output the oracle is asked about in criterion 7, the edge bound
/// of criterion 1. Past roughly 16 edges subdivided outputs can have more
/// than 10^8 line-graph circles.
pub const ORACLE_EDGE_BOUND: usize = 14;

fn d_output(seed: u64, params: &SamplerParams) -> Result<(PlanD, SignedGraph), Box<Counterexample>> {
    let plan = sample_plan_d(seed, params).map_err(|e| fail(7, seed, e.to_string(), None))?;
    let s = apply_plan_d(&plan).map_err(|e| plan_failure(7, seed, e.to_string(), None, Plan::D(plan.clone())))?;
    Ok((plan, s))
}

/// Each instance checks one default-size plan for balance and the local
/// conditions, and one plan redrawn until its output has at most
/// [`ORACLE_EDGE_BOUND`] edges, which also faces the oracle when simple.
fn criterion7(cfg: &SuiteConfig, count: usize) -> CriterionResult {
    let params = sampler_params(cfg);
    let oracle_runs = std::sync::atomic::AtomicUsize::new(0);
    let failures = run_instances(7, count, |seed| {
        for (attempt, oracle_scale) in [(0u64, false), (1, true)] {
            let mut draw = seed | attempt << 48;
            let (plan, s) = loop {
                let (plan, s) = d_output(draw, &params)?;
                if !oracle_scale || s.graph().edge_count() <= ORACLE_EDGE_BOUND {
                    break (plan, s);
                }
                draw += 1 << 49;
                if draw >> 49 > params.max_attempts as u64 {
                    return Err(fail(7, seed, "no small enough plan within the retry budget", None));
                }
            };
            let wrap = |detail: String| plan_failure(7, draw, detail, Some(&s), Plan::D(plan.clone()));
            if !is_balanced(&s).map_err(|e| wrap(e.to_string()))?.balanced {
                return Err(wrap("not balanced".into()));
            }
            local_holds(7, draw, &s, Plan::D(plan.clone()))?;
            if oracle_scale && s.graph().is_simple() {
                oracle_runs.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                match is_line_consistent_oracle(&s, cfg.cap) {
                    Ok(true) => {}
                    Ok(false) => return Err(wrap("oracle finds an inconsistent circle".into())),
                    Err(e) => return Err(wrap(format!("oracle unavailable: {e}"))),
                }
            }
        }
        Ok(())
    });
    let runs = oracle_runs.into_inner();
    CriterionResult {
        criterion: 7,
        name: "construction-d",
        instances: count,
        failures,
        notes: format!("{count} default-size and {count} small plans, {runs} simple outputs checked by the oracle"),
    }
}

fn criterion8(cfg: &SuiteConfig, count: usize) -> CriterionResult {
    let failures = run_instances(8, count, |seed| {
        let mut r = rng(seed);
        let n = r.gen_range(3..=cfg.max_vertices.max(3));
        let chords = r.gen_range(0..=n);
        let g = random_two_connected(&mut r, n, chords);
        let s = random_signing(&mut r, g, SIGN_PROBABILITIES[(seed % 3) as usize]);
        let short = corollary2_check(&s).map_err(|e| fail(8, seed, e.to_string(), Some(&s)))?;
        let full =
            is_balanced(&s).map_err(|e| fail(8, seed, e.to_string(), Some(&s)))?.balanced && property3_local(&s).holds;
        if short == full {
            Ok(())
        } else {
            Err(fail(8, seed, format!("2-connected shortcut {short}, full check {full}"), Some(&s)))
        }
    });
    CriterionResult { criterion: 8, name: "two-connected-shortcut", instances: count, failures, notes: String::new() }
}

/// Criteria 1 to 8. Criterion 2 comes back as two results.
pub fn run_checks(cfg: &SuiteConfig) -> Vec<CriterionResult> {
    let n = |full: usize| cfg.seeds.unwrap_or(full);
    // a scaled-down run keeps the exhaustive part to four vertices
    let exhaustive_n = cfg.max_vertices.min(if cfg.seeds.is_some() { 4 } else { 5 });
    vec![
        criterion1(cfg, n(5000)),
        criterion2a(cfg, exhaustive_n, 1_000_000),
        criterion2b(cfg, n(5000)),
        criterion3(cfg, n(5000)),
        criterion4(cfg, n(5000)),
        criterion5(cfg, n(1000)),
        criterion6(cfg, n(5000), n(1000)),
        criterion7(cfg, n(1000)),
        criterion8(cfg, n(2000)),
    ]
}

pub fn render(cfg: &SuiteConfig, results: &[CriterionResult]) -> String {
    let mut out = String::new();
    let seeds = cfg.seeds.map_or("full".to_string(), |k| k.to_string());
    writeln!(out, "suite: seeds {seeds} max-vertices {} cap {}", cfg.max_vertices, cfg.cap).unwrap();
    for r in results {
        writeln!(out, "{}", r.line()).unwrap();
        for c in &r.failures {
            let first = c.detail.lines().next().unwrap_or("");
            writeln!(out, "counterexample criterion {} seed {}: {first}", c.criterion, c.seed).unwrap();
        }
    }
    out
}

/// Full suite: criteria 1 to 8, then a second run whose rendering must match
/// the first byte for byte.
#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub results: Vec<CriterionResult>,
    pub determinism: bool,
    pub report: String,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.determinism && self.results.iter().all(CriterionResult::passed)
    }
}

pub fn run_suite(cfg: &SuiteConfig) -> SuiteOutcome {
    let results = run_checks(cfg);
    let first = render(cfg, &results);
    let second = render(cfg, &run_checks(cfg));
    let determinism = first == second;
    let mut report = first;
    writeln!(report, "criterion 9 determinism: {}", if determinism { "PASS" } else { "FAIL" }).unwrap();
    let ok = determinism && results.iter().all(CriterionResult::passed);
    writeln!(report, "summary: {}", if ok { "PASS" } else { "FAIL" }).unwrap();
    SuiteOutcome { results, determinism, report }
}

/// Writes each counterexample as `<name>.sg` (or `.plan`) plus
/// `<name>.report`, named after criterion and seed.
pub fn dump_counterexamples(dir: &Path, results: &[CriterionResult]) -> std::io::Result<usize> {
    std::fs::create_dir_all(dir)?;
    let mut written = 0;
    for c in results.iter().flat_map(|r| &r.failures) {
        let stem = format!("criterion{}-seed{}", c.criterion, c.seed);
        let mut report = format!("criterion: {}\nseed: {}\ndetail: {}\n", c.criterion, c.seed, c.detail);
        if let Some(s) = &c.graph {
            std::fs::write(dir.join(format!("{stem}.sg")), write_sg(s))?;
            match check_report(s, None) {
                Ok(r) => report.push_str(&r.text),
                Err(e) => writeln!(report, "error: {e}").unwrap(),
            }
        }
        if let Some(p) = &c.plan {
            std::fs::write(dir.join(format!("{stem}.plan")), write_plan(p))?;
        }
        std::fs::write(dir.join(format!("{stem}.report")), report)?;
        written += 1;
    }
    Ok(written)
}
