use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dejonquieres::counts::{
    dejonquieres_count_ordered, expected_dimension, symmetry_factor, CountError, DJProblem,
};
use dejonquieres::degen::{
    self, build_rho_step_degeneration, build_rho_zero_degeneration, enumerate_case_analysis, CaseAnalysis,
    CaseLabel, ConstantTerm, DegenError,
};
use dejonquieres::graph::DualGraph;
use dejonquieres::partitions::{all_partition_pairs, unzip_parts};
use dejonquieres::twists::{self, BalanceConvention};
use dejonquieres::verify::{run_suite, Suite};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "dejq", version, about = "Exact de Jonquières counts, degenerations and twist systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count de Jonquières divisors for a zero-dimensional problem.
    Count(CountArgs),
    /// Tabulate counts and expected dimensions over parameter ranges.
    Sweep(SweepArgs),
    /// Solve the twist system of a dual graph read from JSON.
    TwistSolve(TwistArgs),
    /// Degeneration constructions and inequality reports.
    Degenerate {
        #[command(subcommand)]
        which: Degenerate,
    },
    /// Expected dimension for a partition with negative entries.
    ExtendNegative(NegativeArgs),
    /// Run a built-in verification suite.
    Check(CheckArgs),
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    g: u32,
    #[arg(long)]
    r: u32,
    #[arg(long)]
    d: u32,
    #[arg(long, value_delimiter = ',', required = true)]
    mu1: Vec<u32>,
    #[arg(long, value_delimiter = ',', required = true)]
    mu2: Vec<u32>,
    /// Print a JSON object instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// Every partition pair of each degree.
    All,
    /// `r = 1` with one simple ramification point.
    RiemannHurwitz,
    /// Canonical series with `g - 1` double points.
    Theta,
}

#[derive(Args)]
struct SweepArgs {
    /// Genus range, as `a..b` (inclusive), a single value, or a list.
    #[arg(long, default_value = "0..3", value_parser = parse_range)]
    g: Values,
    #[arg(long, default_value = "1", value_parser = parse_range)]
    r: Values,
    #[arg(long, default_value = "2..6", value_parser = parse_range)]
    d: Values,
    #[arg(long, value_enum, default_value = "all")]
    family: Family,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    Literal,
    Dualizing,
}

impl From<Convention> for BalanceConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Literal => BalanceConvention::Literal,
            Convention::Dualizing => BalanceConvention::Dualizing,
        }
    }
}

#[derive(Args)]
struct TwistArgs {
    /// Dual graph JSON file.
    #[arg(long)]
    graph: PathBuf,
    /// Also list every solution with values in `[-bound, bound]`.
    #[arg(long)]
    bound: Option<i64>,
    #[arg(long, value_enum, default_value = "literal")]
    convention: Convention,
    /// Classify a one-parameter family by the twists of `COMPONENT` at two
    /// nodes, given as `COMPONENT,NODE_A,NODE_B`.
    #[arg(long, value_delimiter = ',', num_args = 3)]
    ends: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum Degenerate {
    /// Two components with rho = 0, from (r, s).
    RhoZero {
        #[arg(long)]
        r: i64,
        #[arg(long)]
        s: i64,
        #[command(flatten)]
        partition: PartitionArgs,
    },
    /// Elliptic tail lowering rho by one.
    Step {
        #[arg(long)]
        g: i64,
        #[arg(long)]
        r: i64,
        #[arg(long)]
        d: i64,
        #[command(flatten)]
        partition: PartitionArgs,
    },
    /// The quadratic inequality chain, for one point or a grid.
    Smoothness {
        #[arg(long, required_unless_present = "grid")]
        g: Option<i64>,
        #[arg(long, required_unless_present = "grid")]
        r: Option<i64>,
        #[arg(long, required_unless_present = "grid")]
        d: Option<i64>,
        #[arg(long, required_unless_present = "grid")]
        n: Option<i64>,
        /// Sweep `g = (r+1)s` over the ranges below.
        #[arg(long)]
        grid: bool,
        #[arg(long, default_value = "3..12", value_parser = parse_range)]
        r_range: Values,
        #[arg(long, default_value = "2..12", value_parser = parse_range)]
        s_range: Values,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Which argument gives transversality without degenerating.
    Transversality {
        #[arg(long)]
        g: i64,
        #[arg(long)]
        r: i64,
        #[arg(long)]
        d: i64,
    },
    /// Base case of the non-existence induction.
    BaseCase {
        #[arg(long)]
        g: i64,
        #[arg(long)]
        r: i64,
        #[arg(long)]
        d: i64,
        #[arg(long)]
        n: i64,
    },
    /// Chain curve with a rational bridge and the induced twist system.
    Chain {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        r: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        mu: Vec<u32>,
        /// Position of the exceptional component in the bridge, from 1.
        #[arg(long, default_value_t = 1)]
        exceptional: usize,
    },
}

#[derive(Args)]
struct PartitionArgs {
    #[arg(long, value_delimiter = ',', requires = "mu2")]
    mu1: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',', requires = "mu1")]
    mu2: Option<Vec<u32>>,
    /// List every case instead of a summary.
    #[arg(long)]
    full: bool,
}

#[derive(Args)]
struct NegativeArgs {
    #[arg(long)]
    g: i64,
    #[arg(long)]
    r: i64,
    #[arg(long)]
    d: i64,
    /// Signed coefficients, e.g. `2,2,-2`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    mu: Vec<i64>,
    /// The twisted bundle is the canonical bundle.
    #[arg(long)]
    canonical: bool,
}

#[derive(Args)]
struct CheckArgs {
    /// One of classical, series, degeneration, smoothness, twists, negative, all.
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

enum Failure {
    /// Bad usage or an unmet precondition.
    Usage(String),
    /// Input that could not be read or parsed.
    Input(String),
    /// A verification suite failed; its report is already printed.
    Check,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check => 1,
            Failure::Usage(_) => 2,
            Failure::Input(_) => 3,
        }
    }
}

impl From<CountError> for Failure {
    fn from(e: CountError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<DegenError> for Failure {
    fn from(e: DegenError) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Parameter values given on the command line.
#[derive(Clone)]
struct Values(Vec<u32>);

impl std::ops::Deref for Values {
    type Target = [u32];
    fn deref(&self) -> &[u32] {
        &self.0
    }
}

/// `a..b` (inclusive), `a`, or `a,b,c`.
fn parse_range(s: &str) -> Result<Values, String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
    if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(format!("empty range {s}"));
        }
        Ok(Values((a..=b).collect()))
    } else {
        s.split(',').map(num).collect::<Result<_, _>>().map(Values)
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialise"));
}

fn cmd_count(a: CountArgs) -> Result<(), Failure> {
    let p = DJProblem::new(a.g, a.r, a.d, a.mu1, a.mu2)?;
    let ordered = dejonquieres_count_ordered(&p)?;
    let factor = symmetry_factor(&p.mu1, &p.mu2);
    let count = &ordered / &factor;
    let exponent = i64::from(p.d) - i64::from(p.r) - i64::from(p.g);
    let source = format!(
        "coefficient of t^({}) in (1 + sum a_i^2 t_i)^{} (1 + sum a_i t_i)^{}",
        p.mu2.iter().map(u32::to_string).collect::<Vec<_>>().join(","),
        p.g,
        exponent
    );
    if a.json {
        print_json(&json!({
            "g": p.g, "r": p.r, "d": p.d, "mu1": p.mu1, "mu2": p.mu2,
            "ordered": ordered.to_string(),
            "symmetry_factor": factor.to_string(),
            "count": count.to_string(),
            "source": source,
        }));
    } else {
        println!("{count}");
        println!("ordered {ordered}, symmetry factor {factor}");
        println!("{source}");
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepRow {
    g: u32,
    r: u32,
    d: u32,
    mu1: Vec<u32>,
    mu2: Vec<u32>,
    n: u32,
    expected_dimension: i64,
    count: Option<String>,
}

fn sweep_problems(a: &SweepArgs) -> Vec<DJProblem> {
    let mut out = Vec::new();
    match a.family {
        Family::All => {
            for &g in a.g.iter() {
                for &r in a.r.iter() {
                    for &d in a.d.iter() {
                        for parts in all_partition_pairs(d).into_iter().filter(|p| !p.is_empty()) {
                            let (mu1, mu2) = unzip_parts(&parts);
                            if let Ok(p) = DJProblem::new(g, r, d, mu1, mu2) {
                                out.push(p);
                            }
                        }
                    }
                }
            }
        }
        Family::RiemannHurwitz => {
            for &g in a.g.iter() {
                for &d in a.d.iter().filter(|&&d| d >= 2) {
                    let mut mu1 = vec![2];
                    mu1.resize(d as usize - 1, 1);
                    if let Ok(p) = DJProblem::new(g, 1, d, mu1, vec![1; d as usize - 1]) {
                        out.push(p);
                    }
                }
            }
        }
        Family::Theta => {
            for &g in a.g.iter().filter(|&&g| g >= 2) {
                let k = g as usize - 1;
                if let Ok(p) = DJProblem::new(g, g - 1, 2 * g - 2, vec![2; k], vec![1; k]) {
                    out.push(p);
                }
            }
        }
    }
    out.sort_by(|a, b| (a.g, a.r, a.d, &a.mu1, &a.mu2).cmp(&(b.g, b.r, b.d, &b.mu1, &b.mu2)));
    out
}

fn join(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_sweep(a: SweepArgs) -> Result<(), Failure> {
    let problems = sweep_problems(&a);
    if problems.is_empty() {
        return Err(Failure::Usage("the ranges contain no valid problem".into()));
    }
    let rows: Vec<SweepRow> = problems
        .par_iter()
        .map(|p| {
            let e = expected_dimension(p);
            let count = (e == 0)
                .then(|| dejonquieres::dejonquieres_count(p).ok().map(|c| c.to_string()))
                .flatten();
            SweepRow {
                g: p.g,
                r: p.r,
                d: p.d,
                mu1: p.mu1.clone(),
                mu2: p.mu2.clone(),
                n: p.n(),
                expected_dimension: e,
                count,
            }
        })
        .collect();
    let sep = match a.format {
        Format::Json => {
            print_json(&rows);
            return Ok(());
        }
        Format::Csv => ",",
        Format::Tsv => "\t",
    };
    let mut out = ["g", "r", "d", "mu1", "mu2", "N", "expdim", "count"].join(sep);
    out.push('\n');
    for row in &rows {
        let fields = [
            row.g.to_string(),
            row.r.to_string(),
            row.d.to_string(),
            join(&row.mu1),
            join(&row.mu2),
            row.n.to_string(),
            row.expected_dimension.to_string(),
            row.count.clone().unwrap_or_else(|| "\u{2014}".into()),
        ];
        writeln!(out, "{}", fields.join(sep)).expect("writing to a string");
    }
    print!("{out}");
    Ok(())
}

/// The unique positive-genus component meeting the rest in exactly two
/// nodes, with those nodes, when there is one.
fn guess_ends(graph: &DualGraph) -> Option<(String, String, String)> {
    let mut found = None;
    for v in 0..graph.vertex_count() {
        let incident: Vec<usize> = (0..graph.edge_count())
            .filter(|&e| !graph.is_loop(e) && (graph.ends(e).0 == v || graph.ends(e).1 == v))
            .collect();
        if graph.genus_of(v) > 0 && incident.len() == 2 {
            if found.is_some() {
                return None;
            }
            let id = |e: usize| graph.edges()[e].id.clone();
            found = Some((graph.vertices()[v].id.clone(), id(incident[0]), id(incident[1])));
        }
    }
    found
}

fn cmd_twist_solve(a: TwistArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&a.graph)
        .map_err(|e| Failure::Input(format!("{}: {e}", a.graph.display())))?;
    let graph = DualGraph::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", a.graph.display())))?;
    let usage = |e: twists::TwistError| Failure::Usage(e.to_string());
    let solution = twists::solve_twists(&graph).map_err(usage)?;
    let mut report = serde_json::to_value(&solution).expect("solution serialises");
    let obj = report.as_object_mut().expect("solution is an object");
    obj.insert("dimension".into(), json!(solution.dimension()));
    obj.insert(
        "quasi_stability".into(),
        serde_json::to_value(twists::quasi_stability(&graph)).expect("serialises"),
    );
    match twists::balance_report(&graph, a.convention.into()) {
        Ok(b) => obj.insert("balance".into(), serde_json::to_value(b).expect("serialises")),
        Err(e) => obj.insert("balance".into(), json!({ "error": e.to_string() })),
    };
    let ends = match a.ends {
        Some(v) => Some((v[0].clone(), v[1].clone(), v[2].clone())),
        None if solution.dimension() == 1 => guess_ends(&graph),
        None => None,
    };
    if let Some((c, qa, qb)) = ends {
        let classified = twists::classify_end_twists(&solution, &c, &qa, &qb);
        let value = match classified {
            Some(e) => {
                let mut v = serde_json::to_value(&e).expect("serialises");
                let mut subcases = Vec::new();
                if let Some(t) = e.both_nonzero_at {
                    subcases.push(json!({ "case": "both_nonzero", "length": 2, "parameter": t }));
                }
                for &t in &e.exactly_one_nonzero_at {
                    subcases.push(json!({ "case": "exactly_one_nonzero", "length": 1, "parameter": t }));
                }
                v["subcases"] = Value::Array(subcases);
                v
            }
            None => Value::Null,
        };
        obj.insert("ends".into(), value);
    }
    if let Some(bound) = a.bound {
        let listed = solution.solutions_within(bound).map_err(usage)?;
        obj.insert("solutions".into(), serde_json::to_value(listed).expect("serialises"));
    }
    print_json(&report);
    Ok(())
}

fn summarize(analysis: &CaseAnalysis, full: bool) -> Value {
    if full {
        return serde_json::to_value(analysis).expect("serialises");
    }
    let count = |label: CaseLabel| analysis.cases.iter().filter(|c| c.label == label).count();
    json!({
        "kind": analysis.kind,
        "n": analysis.n,
        "expected": analysis.expected,
        "weight_range": analysis.weight_range,
        "cases": {
            "boundary_high": count(CaseLabel::BoundaryHigh),
            "boundary_low": count(CaseLabel::BoundaryLow),
            "interior": count(CaseLabel::Interior),
            "rejected": count(CaseLabel::Rejected),
            "realizable": analysis.cases.iter().filter(|c| c.realizable).count(),
        },
        "max_bound": analysis.max_bound,
        "attains_expected": analysis.attains_expected(),
    })
}

fn degeneration_report(data: degen::DegenerationData, part: PartitionArgs) -> Result<(), Failure> {
    let mut report = json!({ "degeneration": data });
    if let (Some(mu1), Some(mu2)) = (part.mu1, part.mu2) {
        let p = DJProblem::new(data.g as u32, data.r as u32, data.d as u32, mu1, mu2)?;
        let analysis = enumerate_case_analysis(&data, &p)?;
        report["analysis"] = summarize(&analysis, part.full);
    }
    print_json(&report);
    Ok(())
}

fn cmd_degenerate(which: Degenerate) -> Result<(), Failure> {
    match which {
        Degenerate::RhoZero { r, s, partition } => degeneration_report(build_rho_zero_degeneration(r, s)?, partition),
        Degenerate::Step { g, r, d, partition } => degeneration_report(build_rho_step_degeneration(g, r, d)?, partition),
        Degenerate::Smoothness { g, r, d, n, grid, r_range, s_range, format } => {
            if !grid {
                let report = degen::smoothness_inequality_check(g.unwrap(), r.unwrap(), d.unwrap(), n.unwrap())?;
                print_json(&report);
                return Ok(());
            }
            let (r0, r1) = (r_range[0], *r_range.last().unwrap());
            let (s0, s1) = (s_range[0], *s_range.last().unwrap());
            if r0 < 3 || s0 < 2 {
                return Err(Failure::Usage("the grid needs r >= 3 and s >= 2".into()));
            }
            let reports = degen::smoothness_grid(i64::from(r0)..=i64::from(r1), i64::from(s0)..=i64::from(s1));
            let sep = match format {
                Format::Json => {
                    print_json(&reports);
                    return Ok(());
                }
                Format::Csv => ",",
                Format::Tsv => "\t",
            };
            let mut out = [
                "r",
                "s",
                "g",
                "d",
                "sufficient",
                "case_two_gate",
                "contradiction_s_plus_one",
                "contradiction_s_plus_r",
                "sqrt_step_s_plus_r",
            ]
            .join(sep);
            out.push('\n');
            for rep in &reports {
                let fields = [
                    rep.r.to_string(),
                    rep.s.to_string(),
                    rep.g.to_string(),
                    rep.d.to_string(),
                    rep.sufficient_holds.to_string(),
                    rep.case_two_gate.to_string(),
                    rep.variant(ConstantTerm::SPlusOne).contradiction.to_string(),
                    rep.variant(ConstantTerm::SPlusR).contradiction.to_string(),
                    rep.variant(ConstantTerm::SPlusR).sqrt_step_holds.to_string(),
                ];
                writeln!(out, "{}", fields.join(sep)).expect("writing to a string");
            }
            print!("{out}");
            Ok(())
        }
        Degenerate::Transversality { g, r, d } => {
            let t = degen::transversality_special_cases(g, r, d);
            print_json(&json!({
                "g": g, "r": r, "d": d,
                "classification": t,
                "holds_without_degeneration": t.holds_without_degeneration(),
            }));
            Ok(())
        }
        Degenerate::BaseCase { g, r, d, n } => {
            let verdict = degen::nonexistence_base_case(g, r, d, n)?;
            print_json(&json!({ "g": g, "r": r, "d": d, "n": n, "verdict": verdict }));
            Ok(())
        }
        Degenerate::Chain { g, r, mu, exceptional } => {
            print_json(&degen::chain_analysis(g, r, &mu, exceptional)?);
            Ok(())
        }
    }
}

fn cmd_extend_negative(a: NegativeArgs) -> Result<(), Failure> {
    print_json(&degen::negative_partition_extend(a.g, a.r, a.d, &a.mu, a.canonical)?);
    Ok(())
}

fn cmd_check(a: CheckArgs) -> Result<(), Failure> {
    let suite: Suite = a.suite.parse().map_err(Failure::Usage)?;
    let results = run_suite(suite, a.seed);
    let passed = results.iter().filter(|c| c.passed).count();
    if a.json {
        print_json(&json!({ "suite": suite.to_string(), "passed": passed, "total": results.len(), "checks": results }));
    } else {
        for c in &results {
            println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        println!("{passed}/{} checks passed", results.len());
    }
    if passed == results.len() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("DEJQ_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .parse()
        .map_err(|_| Failure::Usage(format!("DEJQ_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Count(a) => cmd_count(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::TwistSolve(a) => cmd_twist_solve(a),
        Command::Degenerate { which } => cmd_degenerate(which),
        Command::ExtendNegative(a) => cmd_extend_negative(a),
        Command::Check(a) => cmd_check(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) | Failure::Input(m) => eprintln!("dejq: {m}"),
                Failure::Check => {}
            }
            ExitCode::from(f.code())
        }
    }
}
