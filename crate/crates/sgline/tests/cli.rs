use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn read_golden(name: &str) -> String {
    std::fs::read_to_string(golden(name)).unwrap()
}

fn sgline(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgline")).args(args).env_remove("SGLINE_CAP").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn square_with_adjacent_negatives_is_line_consistent() {
    let o = sgline(&["check", "--oracle", path(&golden("square.sg"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("line-consistent: yes\n"));
    assert_eq!(stdout(&o), read_golden("square.check"));
}

#[test]
fn k4_with_one_negative_edge_fails_at_both_ends() {
    let o = sgline(&["check", "--oracle", path(&golden("k4_one_negative.sg"))]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("violation P2b vertex 0 "));
    assert!(out.contains("violation P2b vertex 1 "));
    assert_eq!(out, read_golden("k4_one_negative.check"));
}

#[test]
fn malformed_file_exits_2() {
    let o = sgline(&["check", path(&golden("malformed.sg"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"));
    let missing = sgline(&["check", "/nonexistent/graph.sg"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn multigraph_exits_4_unless_properties_only() {
    let o = sgline(&["check", path(&golden("multigraph.sg"))]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(stdout(&o), read_golden("multigraph.check"));
    let p = sgline(&["check", "--properties-only", path(&golden("multigraph.sg"))]);
    assert_eq!(p.status.code(), Some(1));
    let square = sgline(&["check", "--properties-only", path(&golden("square.sg"))]);
    assert_eq!(square.status.code(), Some(0));
}

#[test]
fn oracle_cap_overflow_exits_3() {
    let o = sgline(&["check", "--oracle", "--cap", "0", path(&golden("square.sg"))]);
    assert_eq!(o.status.code(), Some(3));
    let env = Command::new(env!("CARGO_BIN_EXE_sgline"))
        .args(["check", "--oracle", path(&golden("square.sg"))])
        .env("SGLINE_CAP", "0")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(3));
}

#[test]
fn construct_golden_plans() {
    let dir = tempfile::tempdir().unwrap();
    for (kind, plan, expected) in [
        ("a", "square_path.plan", "square_path.sg"),
        ("a", "p4_middle.plan", "p4_middle.sg"),
        ("b", "theta.plan", "theta.sg"),
    ] {
        let out = dir.path().join(expected);
        let o = sgline(&["construct", kind, "--plan", path(&golden(plan)), "-o", path(&out)]);
        assert_eq!(o.status.code(), Some(0), "{plan}: {}", stderr(&o));
        assert_eq!(std::fs::read_to_string(&out).unwrap(), read_golden(expected), "{plan}");
    }
}

#[test]
fn invalid_plan_exits_3_with_clause_diagnostics() {
    let o = sgline(&["construct", "b", "--plan", path(&golden("theta_short.plan"))]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("plan-violation sign-infeasible element 0 edge 0"));
    let wrong_kind = sgline(&["construct", "c", "--plan", path(&golden("theta.plan"))]);
    assert_eq!(wrong_kind.status.code(), Some(3));
}

#[test]
fn random_construction_writes_a_replayable_plan() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["a", "b", "c", "d"] {
        let out = dir.path().join(format!("{kind}.sg"));
        let o = sgline(&["construct", kind, "--random", "--seed", "11", "-o", path(&out)]);
        assert_eq!(o.status.code(), Some(0), "{kind}: {}", stderr(&o));
        let plan = dir.path().join(format!("{kind}.sg.plan"));
        let again = dir.path().join(format!("{kind}.again.sg"));
        let o = sgline(&["construct", kind, "--plan", path(&plan), "-o", path(&again)]);
        assert_eq!(o.status.code(), Some(0), "{kind}: {}", stderr(&o));
        let built = std::fs::read_to_string(&out).unwrap();
        assert_eq!(built, std::fs::read_to_string(&again).unwrap());
        let c = sgline(&["check", "--properties-only", path(&out)]);
        assert!(stdout(&c).contains("property2: yes\n"), "{kind}: {}", stdout(&c));
        if kind == "a" || kind == "d" {
            assert_eq!(c.status.code(), Some(0), "{kind}: {}", stdout(&c));
        }
    }
    let base = sgline(&["construct", "a", "--random", "--seed", "3", "--base", path(&golden("k4_one_negative.sg"))]);
    assert_eq!(base.status.code(), Some(0));
    // no element can be made negative in K4
    assert!(!stdout(&base).lines().any(|l| l.starts_with("edge") && l.ends_with('-')));
}

#[test]
fn recover_suppress_and_linegraph_goldens() {
    let r = sgline(&["recover", path(&golden("theta.sg"))]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(stdout(&r), read_golden("theta.recovered.plan"));
    let s = sgline(&["suppress", path(&golden("theta.sg"))]);
    assert_eq!(stdout(&s), read_golden("theta.suppressed.sg"));
    let l = sgline(&["linegraph", path(&golden("square.sg"))]);
    assert_eq!(stdout(&l), read_golden("square.vsign"));
}

#[test]
fn recover_and_linegraph_refusals() {
    let r = sgline(&["recover", path(&golden("k4_one_negative.sg"))]);
    assert_eq!(r.status.code(), Some(1));
    assert!(stderr(&r).contains("violation P2b vertex 0"));
    let l = sgline(&["linegraph", path(&golden("multigraph.sg"))]);
    assert_eq!(l.status.code(), Some(4));
}

#[test]
fn smoke_suite_is_quick_and_passes() {
    let start = std::time::Instant::now();
    let o = sgline(&["equiv-suite", "--seeds", "1"]);
    assert!(start.elapsed().as_secs_f64() < 1.0);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("summary: PASS\n"));
}

#[test]
fn injected_mutant_is_reported_and_dumped() {
    let dir = tempfile::tempdir().unwrap();
    let o = sgline(&["equiv-suite", "--seeds", "3", "--inject-mutant", "--dump", path(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("criterion 1 fast-decision-vs-oracle: FAIL"));
    assert!(out.contains("injected mutant: fast verdict false, oracle true"));
    let dumped: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(dumped.len(), 2);
}
