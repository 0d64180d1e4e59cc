//! Self-checks against independent oracles, grouped into suites.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::counts::{
    binomial, dejonquieres_count, dejonquieres_count_ordered, expected_dimension, restricted_class_coefficient,
    DJProblem,
};
use crate::degen::{
    build_rho_step_degeneration, build_rho_zero_degeneration, chain_analysis, enumerate_case_analysis,
    negative_partition_extend, smoothness_grid, ConstantTerm, H0Case,
};
use crate::graph::{DualGraph, Edge, Marking, Vertex};
use crate::partitions::{partition_pairs, unzip_parts};
use crate::series::{MultiIndex, TruncatedSeries};
use crate::twists::{solve_twists, Twist};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Classical,
    Series,
    Degeneration,
    Smoothness,
    Twists,
    Negative,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = ["classical", "series", "degeneration", "smoothness", "twists", "negative", "all"];
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "classical" => Suite::Classical,
            "series" => Suite::Series,
            "degeneration" => Suite::Degeneration,
            "smoothness" => Suite::Smoothness,
            "twists" => Suite::Twists,
            "negative" => Suite::Negative,
            "all" => Suite::All,
            _ => return Err(format!("unknown suite {s:?}; expected one of {}", Suite::NAMES.join(", "))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = *self as usize;
        f.write_str(Suite::NAMES[i])
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> Vec<CheckResult> {
    match suite {
        Suite::Classical => classical(seed),
        Suite::Series => series(seed),
        Suite::Degeneration => degeneration(),
        Suite::Smoothness => smoothness(),
        Suite::Twists => twists(seed),
        Suite::Negative => negative(seed),
        Suite::All => [
            Suite::Classical,
            Suite::Series,
            Suite::Degeneration,
            Suite::Smoothness,
            Suite::Twists,
            Suite::Negative,
        ]
        .into_iter()
        .flat_map(|s| run_suite(s, seed))
        .collect(),
    }
}

fn count(g: u32, r: u32, d: u32, mu1: Vec<u32>, mu2: Vec<u32>) -> Option<BigInt> {
    DJProblem::new(g, r, d, mu1, mu2).ok().and_then(|p| dejonquieres_count(&p).ok())
}

/// `2^(g-1) (2^g - 1)`.
fn odd_thetas(g: u32) -> BigInt {
    let half = BigInt::from(1) << (g - 1);
    half.clone() * (half * 2 - 1)
}

fn classical(seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let flex = count(1, 2, 3, vec![3], vec![1]);
    out.push(CheckResult::new(
        "classical/flexes",
        flex == Some(BigInt::from(9)),
        format!("plane cubic flexes: {flex:?}"),
    ));

    let mut bad = Vec::new();
    for d in 2..=8u32 {
        for g in 0..=5u32 {
            let mut mu1 = vec![2];
            mu1.extend(std::iter::repeat_n(1, d as usize - 2));
            let mu2 = vec![1; d as usize - 1];
            let got = count(g, 1, d, mu1, mu2);
            let want = BigInt::from(2 * d + 2 * g - 2);
            if got.as_ref() != Some(&want) {
                bad.push(format!("g={g} d={d}: {got:?} != {want}"));
            }
        }
    }
    out.push(CheckResult::new(
        "classical/riemann-hurwitz",
        bad.is_empty(),
        if bad.is_empty() { "42 covers".into() } else { bad.join("; ") },
    ));

    let mut thetas = Vec::new();
    let mut ok = true;
    for g in 2..=6u32 {
        let k = g as usize - 1;
        let got = count(g, g - 1, 2 * g - 2, vec![2; k], vec![1; k]);
        ok &= got.as_ref() == Some(&odd_thetas(g));
        thetas.push(got.map_or("-".into(), |c| c.to_string()));
    }
    out.push(CheckResult::new("classical/odd-thetas", ok, thetas.join(", ")));

    let samples = [
        (count(2, 1, 2, vec![2], vec![1]), 6),
        (count(0, 0, 2, vec![1, 1], vec![1, 1]), 1),
    ];
    out.push(CheckResult::new(
        "classical/small-counts",
        samples.iter().all(|(got, want)| got.as_ref() == Some(&BigInt::from(*want))),
        format!("{:?}", samples.iter().map(|(g, _)| g.clone()).collect::<Vec<_>>()),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = 0;
    let cases = 200;
    for _ in 0..cases {
        let p = random_zero_dimensional(&mut rng);
        let a = dejonquieres_count_ordered(&p).expect("zero expected dimension");
        let b = restricted_class_coefficient(&p).expect("valid problem");
        mismatches += usize::from(a != b);
    }
    out.push(CheckResult::new(
        "classical/formula-agreement",
        mismatches == 0,
        format!("{cases} random problems, {mismatches} mismatches"),
    ));
    out
}

/// A random valid problem with `N - d + r = 0`.
pub fn random_zero_dimensional(rng: &mut impl Rng) -> DJProblem {
    loop {
        let k = rng.gen_range(1..=4usize);
        let mu1: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=4)).collect();
        let mu2: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=3)).collect();
        let d: u32 = mu1.iter().zip(&mu2).map(|(a, b)| a * b).sum();
        let n: u32 = mu2.iter().sum();
        let g = rng.gen_range(0..=5);
        if let Ok(p) = DJProblem::new(g, d - n, d, mu1, mu2) {
            return p;
        }
    }
}

fn random_series(rng: &mut impl Rng, caps: &[u32]) -> TruncatedSeries {
    let mut terms = Vec::new();
    let count = rng.gen_range(0..=6);
    for _ in 0..count {
        let e: Vec<u32> = caps.iter().map(|&c| rng.gen_range(0..=c)).collect();
        terms.push((MultiIndex::new(e), BigInt::from(rng.gen_range(-5..=5))));
    }
    TruncatedSeries::from_terms(caps.to_vec(), terms).expect("exponents within caps")
}

type Dense = BTreeMap<Vec<u32>, i128>;

fn dense(s: &TruncatedSeries) -> Dense {
    s.terms()
        .map(|(m, c)| (m.exponents().to_vec(), i128::try_from(c).expect("small coefficients")))
        .collect()
}

fn naive_mul(a: &Dense, b: &Dense, caps: &[u32]) -> Dense {
    let mut out = Dense::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if e.iter().zip(caps).all(|(x, c)| x <= c) {
                *out.entry(e).or_default() += ca * cb;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn series(seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5e7);
    let mut mul_bad = 0;
    let mut law_bad = 0;
    let cases = 1000;
    for _ in 0..cases {
        let nvars = rng.gen_range(1..=3);
        let caps: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=4)).collect();
        let (a, b, c) = (random_series(&mut rng, &caps), random_series(&mut rng, &caps), random_series(&mut rng, &caps));
        if dense(&(&a * &b)) != naive_mul(&dense(&a), &dense(&b), &caps) {
            mul_bad += 1;
        }
        let assoc = &(&a * &b) * &c == &a * &(&b * &c);
        let distrib = &a * &(&b + &c) == &(&a * &b) + &(&a * &c);
        let comm = &a * &b == &b * &a;
        law_bad += usize::from(!(assoc && distrib && comm));
    }
    // binomial expansion of (1 + 2t)^m against the power routine
    let mut pow_ok = true;
    for m in 0..8u32 {
        let s = TruncatedSeries::affine(vec![6], BigInt::from(1), &[BigInt::from(2)]);
        let p = s.pow(i64::from(m)).unwrap();
        for j in 0..=6u32 {
            let want = binomial(m, j) * (BigInt::from(1) << j);
            pow_ok &= p.coefficient(&MultiIndex::new(vec![j])).unwrap() == want;
        }
    }
    vec![
        CheckResult::new(
            "series/naive-product",
            mul_bad == 0,
            format!("{cases} random products, {mul_bad} mismatches"),
        ),
        CheckResult::new(
            "series/ring-laws",
            law_bad == 0,
            format!("{cases} random triples, {law_bad} failures"),
        ),
        CheckResult::new("series/binomial-powers", pow_ok, "(1+2t)^m for m < 8"),
    ]
}

#[derive(Default)]
struct SweepTally {
    problems: usize,
    failures: Vec<String>,
}

fn sweep_family(tally: &mut SweepTally, data: &crate::degen::DegenerationData) {
    let (r, d) = (data.r, data.d);
    let lo = (d - r).max(1);
    for n in lo..=d.min(12) {
        for parts in partition_pairs(d as u32, n as u32) {
            let (mu1, mu2) = unzip_parts(&parts);
            let p = DJProblem::new(data.g as u32, r as u32, d as u32, mu1, mu2).expect("partition is valid");
            tally.problems += 1;
            match enumerate_case_analysis(data, &p) {
                Ok(a) if a.attains_expected() => {}
                Ok(a) => tally.failures.push(format!(
                    "g={} r={r} d={d} parts={parts:?}: max {:?} != {}",
                    data.g, a.max_bound, a.expected
                )),
                Err(e) => tally.failures.push(format!("g={} r={r} d={d} parts={parts:?}: {e}", data.g)),
            }
        }
    }
}

/// The case analyses for `1 <= r <= 6`, `2 <= s <= 6` and `N <= 12`, for
/// `rho = 0` and for `rho` from 1 to 4.
pub fn degeneration_sweep() -> [(String, usize, Vec<String>); 2] {
    let mut zero = SweepTally::default();
    let mut step = SweepTally::default();
    for r in 1..=6 {
        for s in 2..=6 {
            match build_rho_zero_degeneration(r, s) {
                Ok(data) => sweep_family(&mut zero, &data),
                Err(e) => zero.failures.push(format!("r={r} s={s}: {e}")),
            }
            for rho in 1..=4 {
                let g = (r + 1) * s + rho;
                let d = g + r - s;
                match build_rho_step_degeneration(g, r, d) {
                    Ok(data) => sweep_family(&mut step, &data),
                    Err(e) => step.failures.push(format!("g={g} r={r} d={d}: {e}")),
                }
            }
        }
    }
    [
        ("degeneration/rho-zero".into(), zero.problems, zero.failures),
        ("degeneration/rho-step".into(), step.problems, step.failures),
    ]
}

fn degeneration() -> Vec<CheckResult> {
    degeneration_sweep()
        .into_iter()
        .map(|(name, problems, failures)| {
            let detail = if failures.is_empty() {
                format!("{problems} problems attain N-d+r")
            } else {
                format!("{} of {problems} fail; first: {}", failures.len(), failures[0])
            };
            CheckResult::new(&name, failures.is_empty(), detail)
        })
        .collect()
}

fn smoothness() -> Vec<CheckResult> {
    let grid = smoothness_grid(3..=12, 2..=12);
    let failing = |c: ConstantTerm| -> Vec<(i64, i64)> {
        grid.iter()
            .filter(|rep| !rep.variant(c).contradiction)
            .map(|rep| (rep.r, rep.s))
            .collect()
    };
    let plus_r = failing(ConstantTerm::SPlusR);
    let plus_one = failing(ConstantTerm::SPlusOne);
    let sufficient = grid.iter().all(|rep| rep.sufficient_holds);
    let case_two = grid.iter().all(|rep| !rep.case_two_gate);
    let sqrt_fail: Vec<(i64, i64)> = grid
        .iter()
        .filter(|rep| !rep.variant(ConstantTerm::SPlusR).sqrt_step_holds)
        .map(|rep| (rep.r, rep.s))
        .collect();
    vec![
        CheckResult::new(
            "smoothness/s(s+r)",
            plus_r.is_empty(),
            format!("{} cells, failures {plus_r:?}", grid.len()),
        ),
        CheckResult::new(
            "smoothness/s(s+1)",
            plus_one.is_empty(),
            format!("{} cells, failures {plus_one:?}", grid.len()),
        ),
        CheckResult::new("smoothness/sufficient-condition", sufficient, "(2-r)(s-1) < 0 on the grid"),
        CheckResult::new("smoothness/case-two", case_two, "(d-r)(g-r-1) > g on the grid"),
        CheckResult::new(
            "smoothness/sqrt-step",
            true,
            format!("informational; disc > (B-4)^2 at {sqrt_fail:?}"),
        ),
    ]
}

/// A random connected graph with at most `max_vertices` components, a few
/// markings and a small multidegree.
pub fn random_graph(rng: &mut impl Rng, max_vertices: usize) -> DualGraph {
    let n = rng.gen_range(1..=max_vertices);
    let id = |i: usize| format!("v{i}");
    let vertices: Vec<Vertex> = (0..n)
        .map(|i| Vertex {
            id: id(i),
            genus: rng.gen_range(0..=2),
            exceptional: None,
        })
        .collect();
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.push((j, i));
    }
    if n > 1 {
        for _ in 0..rng.gen_range(0..=2) {
            let mut pair = [rng.gen_range(0..n), rng.gen_range(0..n)];
            if pair[0] == pair[1] && rng.gen_bool(0.7) {
                pair[1] = (pair[0] + 1) % n;
            }
            edges.push((pair[0], pair[1]));
        }
    }
    edges.shuffle(rng);
    let edges: Vec<Edge> = edges
        .into_iter()
        .enumerate()
        .map(|(k, (u, v))| Edge {
            id: format!("e{k}"),
            u: id(u),
            v: id(v),
        })
        .collect();
    let mut weights = vec![0i64; n];
    let markings: Vec<Marking> = (0..rng.gen_range(0..=3))
        .map(|_| {
            let (v, a) = (rng.gen_range(0..n), rng.gen_range(1..=3));
            weights[v] += i64::from(a);
            Marking {
                vertex: id(v),
                a,
                delta: 1,
                id: None,
            }
        })
        .collect();
    let mut degrees: Vec<i64> = weights.iter().map(|w| w + rng.gen_range(-2..=2)).collect();
    if rng.gen_bool(0.6) {
        let excess: i64 = degrees.iter().sum::<i64>() - weights.iter().sum::<i64>();
        degrees[0] -= excess;
    }
    let multidegree = degrees.iter().enumerate().map(|(i, &x)| (id(i), x)).collect();
    DualGraph::new(vertices, edges, markings, multidegree).expect("generated graph is valid")
}

/// All twists with values in `[-bound, bound]`, by backtracking over one
/// value per node and checking the axioms and degree equations directly.
pub fn brute_force_twists(graph: &DualGraph, bound: i64) -> Vec<Twist> {
    let nodes: Vec<usize> = (0..graph.edge_count()).filter(|&e| !graph.is_loop(e)).collect();
    let nv = graph.vertex_count();
    let rhs: Vec<i64> = (0..nv).map(|v| graph.degree_of(v) - graph.marking_weight(v)).collect();
    let mut last_touch = vec![None; nv];
    for (k, &e) in nodes.iter().enumerate() {
        let (u, v) = graph.ends(e);
        last_touch[u] = Some(k);
        last_touch[v] = Some(k);
    }
    if (0..nv).any(|v| last_touch[v].is_none() && rhs[v] != 0) {
        return vec![];
    }
    let mut values = vec![0i64; nodes.len()];
    let mut out = Vec::new();
    brute_rec(graph, &nodes, &rhs, &last_touch, bound, 0, &mut values, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn brute_rec(
    graph: &DualGraph,
    nodes: &[usize],
    rhs: &[i64],
    last_touch: &[Option<usize>],
    bound: i64,
    k: usize,
    values: &mut Vec<i64>,
    out: &mut Vec<Twist>,
) {
    // T(node, side), with values[k] = T(node, u)
    let t = |values: &[i64], k: usize, side: usize| {
        let (u, _) = graph.ends(nodes[k]);
        if side == u {
            values[k]
        } else {
            -values[k]
        }
    };
    if k == nodes.len() {
        let oriented: Vec<(usize, usize, usize)> = (0..nodes.len())
            .flat_map(|i| {
                let (u, v) = graph.ends(nodes[i]);
                [(i, u, v), (i, v, u)]
            })
            .collect();
        for &(q, c, c1) in &oriented {
            for &(qh, ch, ch1) in &oriented {
                let hyp_a = oriented.iter().any(|&(x, a, b)| a == c && b == ch && t(values, x, c) == 0);
                let hyp_b = oriented.iter().any(|&(x, a, b)| a == c1 && b == ch1 && t(values, x, c1) == 0);
                if hyp_a && hyp_b && t(values, q, c) != t(values, qh, ch) {
                    return;
                }
            }
        }
        let mut tw = Twist::new();
        for (i, &e) in nodes.iter().enumerate() {
            let (u, v) = graph.ends(e);
            let edge = &graph.edges()[e];
            tw.set(&edge.id, &graph.vertices()[u].id, values[i]);
            tw.set(&edge.id, &graph.vertices()[v].id, -values[i]);
        }
        out.push(tw);
        return;
    }
    let (u, v) = graph.ends(nodes[k]);
    for x in -bound..=bound {
        values[k] = x;
        // parallel nodes agree
        let parallel_ok = (0..k).all(|j| {
            let (a, b) = graph.ends(nodes[j]);
            !((a, b) == (u, v) || (a, b) == (v, u)) || t(values, j, u) == t(values, k, u)
        });
        if !parallel_ok {
            continue;
        }
        let eq_ok = [u, v].iter().all(|&c| {
            if last_touch[c] != Some(k) {
                return true;
            }
            let sum: i64 = (0..=k)
                .filter(|&j| {
                    let (a, b) = graph.ends(nodes[j]);
                    a == c || b == c
                })
                .map(|j| t(values, j, c))
                .sum();
            sum == rhs[c]
        });
        if eq_ok {
            brute_rec(graph, nodes, rhs, last_touch, bound, k + 1, values, out);
        }
    }
}

fn nested_set(ts: &[Twist]) -> BTreeSet<BTreeMap<String, BTreeMap<String, i64>>> {
    ts.iter().map(Twist::nested).collect()
}

pub fn compare_with_brute_force(graph: &DualGraph, bound: i64) -> Result<(), String> {
    let solution = solve_twists(graph).map_err(|e| e.to_string())?;
    let brute = brute_force_twists(graph, bound);
    if !brute.is_empty() && !solution.is_feasible() {
        return Err(format!("solver infeasible, brute force found {}", brute.len()));
    }
    let listed = solution.solutions_within(bound).map_err(|e| e.to_string())?;
    if nested_set(&listed) != nested_set(&brute) {
        return Err(format!("solver lists {}, brute force finds {}", listed.len(), brute.len()));
    }
    Ok(())
}

fn twists(seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7a1);
    let cases = 200;
    let mut failures = Vec::new();
    let mut feasible = 0;
    for i in 0..cases {
        let graph = random_graph(&mut rng, 4);
        feasible += usize::from(solve_twists(&graph).is_ok_and(|s| s.is_feasible()));
        if let Err(e) = compare_with_brute_force(&graph, 6) {
            failures.push(format!("case {i}: {e}; graph {}", graph.to_json()));
        }
    }
    let chain = chain_analysis(5, 1, &[2, 2, 2, 2, 2], 3);
    let chain_ok = chain.as_ref().is_ok_and(|a| {
        a.solution_dimension == 1 && a.subcases.iter().all(|c| c.occurs && c.excluded) && !a.ends.both_zero_possible
    });
    vec![
        CheckResult::new(
            "twists/brute-force",
            failures.is_empty(),
            if failures.is_empty() {
                format!("{cases} graphs agree ({feasible} feasible)")
            } else {
                failures[0].clone()
            },
        ),
        CheckResult::new(
            "twists/chain",
            chain_ok,
            match &chain {
                Ok(a) => format!("end twists {:?}, sum {}", a.ends.ends, a.ends.sum),
                Err(e) => e.to_string(),
            },
        ),
    ]
}

fn negative(seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e6);
    let cases = 200;
    let mut bad = Vec::new();
    for _ in 0..cases {
        let g: u32 = rng.gen_range(0..=6);
        let n = rng.gen_range(1..=6usize);
        let mu: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
        let d: u32 = mu.iter().sum();
        // a complete series has r = d - g above 2g - 2, and g - 2 at 2g - 2
        // unless it is canonical
        let r = if i64::from(d) > 2 * i64::from(g) - 2 {
            d - g
        } else if d == 2 * g - 2 {
            g - 2
        } else {
            rng.gen_range(0..=d.min(g))
        };
        let signed: Vec<i64> = mu.iter().map(|&a| i64::from(a)).collect();
        let ext = negative_partition_extend(g.into(), r.into(), d.into(), &signed, false);
        let p = DJProblem::new(g, r, d, mu.clone(), vec![1; n]).expect("valid problem");
        match ext {
            Ok(e) if e.expected_dimension == expected_dimension(&p) && e.r_prime == i64::from(r) => {}
            Ok(e) => bad.push(format!("g={g} r={r} mu={mu:?}: {} vs {}", e.expected_dimension, expected_dimension(&p))),
            Err(e) => bad.push(format!("g={g} r={r} mu={mu:?}: {e}")),
        }
    }
    // bounds n1 - g + 1, n1 - g, n1 - g and n1 - d + r
    let table = [
        (negative_partition_extend(3, 0, 2, &[2, 1, 1, -2], true), H0Case::Canonical, 3, 1),
        (negative_partition_extend(3, 0, 2, &[2, 2, -2], false), H0Case::DegreeCanonicalNotCanonical, 2, -1),
        (negative_partition_extend(2, 0, 3, &[2, 2, -1], false), H0Case::AboveCanonical, 3, 0),
        (negative_partition_extend(6, 1, 3, &[2, 2, -1], false), H0Case::BelowCanonical, 3, 0),
    ];
    let table_ok = table.iter().all(|(e, case, h0, bound)| {
        e.as_ref().is_ok_and(|e| e.case == *case && e.h0 == *h0 && e.lower_bound == *bound)
    });
    vec![
        CheckResult::new(
            "negative/positive-reduction",
            bad.is_empty(),
            if bad.is_empty() { format!("{cases} partitions agree") } else { bad[0].clone() },
        ),
        CheckResult::new("negative/h0-table", table_ok, "four fixtures"),
    ]
}
