use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;
use sgline::format::{parse_plan, parse_sg, write_plan, write_sg, write_vsign, Plan};
use sgline::report::{check_report, violation_line};
use sgline::suite::{dump_counterexamples, run_suite, SuiteConfig};
use sgline_core::constructions::{
    apply_plan_a, apply_plan_b, apply_plan_c, apply_plan_d, sample_plan_a, sample_plan_b, sample_plan_c, sample_plan_d,
    PlanViolation, SamplerParams,
};
use sgline_core::linegraph::line_graph;
use sgline_core::properties::property2_clauses;
use sgline_core::random::{random_multigraph, rng};
use sgline_core::recovery::recover_plan;
use sgline_core::structure::suppress_divalent;
use sgline_core::{Error, SignedGraph};

const DEFAULT_CAP: usize = 100_000;

#[derive(Parser)]
#[command(name = "sgline", version, about = "Line consistency of signed graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Balance, local degree conditions and line consistency of a graph
    Check {
        file: PathBuf,
        /// Also run the brute-force line-graph oracle
        #[arg(long)]
        oracle: bool,
        /// Circle budget for the oracle (default: $SGLINE_CAP or 100000)
        #[arg(long)]
        cap: Option<usize>,
        /// Decide balance and the degree conditions only; multigraphs allowed
        #[arg(long)]
        properties_only: bool,
    },
    /// Build a signed graph from a plan, or from a random one
    Construct {
        kind: Kind,
        #[arg(long, conflicts_with_all = ["random", "seed", "base"])]
        plan: Option<PathBuf>,
        #[arg(long, requires = "seed")]
        random: bool,
        #[arg(long)]
        seed: Option<u64>,
        /// Base graph for a random plan a (edge signs ignored)
        #[arg(long, requires = "random")]
        base: Option<PathBuf>,
        /// Output graph; with --random the plan goes to <out>.plan
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Recover the unique plan b that builds a graph
    Recover {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Suppress divalent vertices
    Suppress {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Vertex-signed line graph of a simple signed graph
    Linegraph {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Cross-check the fast procedures against brute force and each other
    EquivSuite {
        /// Instances per randomized check (default: the full counts)
        #[arg(long)]
        seeds: Option<usize>,
        #[arg(long, default_value_t = 8)]
        max_vertices: usize,
        #[arg(long)]
        cap: Option<usize>,
        /// Directory for counterexample files
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Hand the fast checker a sign-flipped copy of a known fixture
        #[arg(long)]
        inject_mutant: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    A,
    B,
    C,
    D,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotSimple => Failure::new(4, e.to_string()),
            Error::InvalidPlan(ref v) => Failure::new(3, plan_diagnostics(v)),
            Error::PropertyViolated(ref v) => {
                let lines: Vec<String> = v.iter().map(violation_line).collect();
                Failure::new(1, format!("{e}\n{}", lines.join("\n")))
            }
            _ => Failure::new(3, e.to_string()),
        }
    }
}

fn plan_diagnostics(v: &[PlanViolation]) -> String {
    let mut lines = vec![format!("invalid plan: {} violations", v.len())];
    lines.extend(v.iter().map(|x| format!("plan-violation {x}")));
    lines.join("\n")
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))
}

fn read_sg(path: &Path) -> Result<SignedGraph, Failure> {
    parse_sg(&read(path)?).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::new(3, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cap_or_default(cap: Option<usize>) -> Result<usize, Failure> {
    if let Some(c) = cap {
        return Ok(c);
    }
    match std::env::var("SGLINE_CAP") {
        Ok(v) => v.trim().parse().map_err(|_| Failure::new(2, format!("SGLINE_CAP is not a number: {v:?}"))),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

fn check(file: &Path, oracle: bool, cap: Option<usize>, properties_only: bool) -> Outcome {
    let s = read_sg(file)?;
    let cap = cap_or_default(cap)?;
    let report = check_report(&s, oracle.then_some(cap))?;
    print!("{}", report.text);
    if properties_only {
        return Ok(if report.balanced && report.property { 0 } else { 1 });
    }
    match report.line_consistent {
        None => Err(Failure::new(4, "graph is not simple; line consistency needs a simple graph")),
        Some(_) if report.disagrees() => Err(Failure::new(1, "fast verdict and oracle disagree")),
        Some(true) => Ok(0),
        Some(false) => Ok(1),
    }
}

fn construct(
    kind: Kind,
    plan: Option<PathBuf>,
    seed: Option<u64>,
    base: Option<PathBuf>,
    out: Option<PathBuf>,
) -> Outcome {
    let params = SamplerParams::default();
    let (plan, sampled) = match (plan, seed) {
        (Some(path), _) => {
            let p = parse_plan(&read(&path)?).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
            let expected = match kind {
                Kind::A => 'a',
                Kind::B => 'b',
                Kind::C => 'c',
                Kind::D => 'd',
            };
            if p.kind() != expected {
                return Err(Failure::new(3, format!("plan file holds a plan {}, not {expected}", p.kind())));
            }
            (p, false)
        }
        (None, Some(seed)) => {
            let p = match kind {
                Kind::A => {
                    let g = match base {
                        Some(b) => read_sg(&b)?.into_parts().0,
                        None => {
                            let mut r = rng(seed);
                            let n = r.gen_range(1..=params.max_vertices);
                            let m = r.gen_range(0..=params.max_edges);
                            random_multigraph(&mut r, n, m, params.p_loop)
                        }
                    };
                    Plan::A(sample_plan_a(&g, seed))
                }
                Kind::B => Plan::B(sample_plan_b(seed, &params)?),
                Kind::C => Plan::C(sample_plan_c(seed, &params)?),
                Kind::D => Plan::D(sample_plan_d(seed, &params)?),
            };
            (p, true)
        }
        (None, None) => return Err(Failure::new(2, "give --plan FILE or --random --seed S")),
    };
    let s = match &plan {
        Plan::A(p) => apply_plan_a(p)?,
        Plan::B(p) => apply_plan_b(p)?,
        Plan::C(p) => apply_plan_c(p)?.0,
        Plan::D(p) => apply_plan_d(p)?,
    };
    emit(out.as_deref(), &write_sg(&s))?;
    if sampled {
        let text = write_plan(&plan);
        match &out {
            Some(o) => {
                let mut p = o.clone().into_os_string();
                p.push(".plan");
                emit(Some(Path::new(&p)), &text)?;
            }
            None => {
                emit(None, &format!("# plan used\n{}", text.lines().map(|l| format!("# {l}\n")).collect::<String>()))?
            }
        }
    }
    Ok(0)
}

fn recover(file: &Path, out: Option<PathBuf>) -> Outcome {
    let s = read_sg(file)?;
    let local = property2_clauses(&s);
    if !local.holds {
        let lines: Vec<String> = local.violations.iter().map(violation_line).collect();
        return Err(Failure::new(1, format!("no plan builds this graph\n{}", lines.join("\n"))));
    }
    let plan = recover_plan(&s)?;
    emit(out.as_deref(), &write_plan(&Plan::B(plan)))?;
    Ok(0)
}

fn suppress(file: &Path, out: Option<PathBuf>) -> Outcome {
    let s = read_sg(file)?;
    let r = suppress_divalent(&s);
    let mut text = String::new();
    for (id, exp) in &r.expansion {
        let ids: Vec<String> = exp.iter().map(|e| e.to_string()).collect();
        text.push_str(&format!("# expansion {id}: {}\n", ids.join(" ")));
    }
    let kept: Vec<String> = r.original_vertex.iter().map(|v| v.to_string()).collect();
    text.push_str(&format!("# vertices from: {}\n", kept.join(" ")));
    text.push_str(&write_sg(&r.reduced));
    emit(out.as_deref(), &text)?;
    Ok(0)
}

fn linegraph(file: &Path, out: Option<PathBuf>) -> Outcome {
    let s = read_sg(file)?;
    let lg = line_graph(&s)?;
    let origin: Vec<String> = lg.vertex_origin.iter().map(|e| e.to_string()).collect();
    let text = format!("# vertex i stands for edge: {}\n{}", origin.join(" "), write_vsign(&lg.lg));
    emit(out.as_deref(), &text)?;
    Ok(0)
}

fn equiv_suite(
    seeds: Option<usize>,
    max_vertices: usize,
    cap: Option<usize>,
    dump: Option<PathBuf>,
    inject_mutant: bool,
) -> Outcome {
    if max_vertices == 0 {
        return Err(Failure::new(2, "--max-vertices must be positive"));
    }
    let cfg = SuiteConfig { seeds, max_vertices, cap: cap_or_default(cap)?, inject_mutant };
    let outcome = run_suite(&cfg);
    print!("{}", outcome.report);
    if let Some(dir) = dump {
        let n = dump_counterexamples(&dir, &outcome.results)
            .map_err(|e| Failure::new(3, format!("{}: {e}", dir.display())))?;
        if n > 0 {
            eprintln!("wrote {n} counterexamples to {}", dir.display());
        }
    }
    Ok(if outcome.passed() { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check { file, oracle, cap, properties_only } => check(&file, oracle, cap, properties_only),
        Command::Construct { kind, plan, random: _, seed, base, out } => construct(kind, plan, seed, base, out),
        Command::Recover { file, out } => recover(&file, out),
        Command::Suppress { file, out } => suppress(&file, out),
        Command::Linegraph { file, out } => linegraph(&file, out),
        Command::EquivSuite { seeds, max_vertices, cap, dump, inject_mutant } => {
            equiv_suite(seeds, max_vertices, cap, dump, inject_mutant)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("sgline: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
