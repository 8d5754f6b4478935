//! Acceptance gate: every criterion at its full instance count, one line
//! each. Runs without the test harness so the lines always show.

use std::process::ExitCode;
use std::time::Instant;

use sgline::suite::{render, run_checks, CriterionResult, SuiteConfig};

struct Gate<'a> {
    criterion: u8,
    parts: Vec<&'a CriterionResult>,
    /// Minimum instance count per part.
    minimum: Vec<usize>,
}

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let start = Instant::now();
    let results = run_checks(&cfg);
    let elapsed = start.elapsed();
    let by = |c: u8| results.iter().filter(move |r| r.criterion == c);

    let gates = [
        Gate { criterion: 1, parts: by(1).collect(), minimum: vec![5000] },
        // exhaustive part: 59809 instances on at most 5 vertices, under the 10^6 cap
        Gate { criterion: 2, parts: by(2).collect(), minimum: vec![59809, 5000] },
        Gate { criterion: 3, parts: by(3).collect(), minimum: vec![5000] },
        Gate { criterion: 4, parts: by(4).collect(), minimum: vec![5000] },
        Gate { criterion: 5, parts: by(5).collect(), minimum: vec![3000] },
        Gate { criterion: 6, parts: by(6).collect(), minimum: vec![1001] },
        Gate { criterion: 7, parts: by(7).collect(), minimum: vec![1000] },
        Gate { criterion: 8, parts: by(8).collect(), minimum: vec![2000] },
    ];

    let mut all = true;
    for g in &gates {
        let sized =
            g.parts.len() == g.minimum.len() && g.parts.iter().zip(&g.minimum).all(|(r, &min)| r.instances >= min);
        let ok = sized && g.parts.iter().all(|r| r.passed());
        all &= ok;
        let detail: Vec<String> = g.parts.iter().map(|r| r.line()).collect();
        println!("criterion {}: {} [{}]", g.criterion, if ok { "PASS" } else { "FAIL" }, detail.join("; "));
        for r in &g.parts {
            for c in &r.failures {
                println!("  seed {}: {}", c.seed, c.detail.lines().next().unwrap_or(""));
            }
        }
    }

    let first = render(&cfg, &results);
    let second = render(&cfg, &run_checks(&cfg));
    let deterministic = first == second;
    all &= deterministic;
    println!(
        "criterion 9: {} [two full runs, {} report bytes, {}]",
        if deterministic { "PASS" } else { "FAIL" },
        first.len(),
        if deterministic { "identical" } else { "different" }
    );
    println!("criteria 1-8 ran in {:.1}s", elapsed.as_secs_f64());

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
