//! Twists on dual graphs and the degree-level de Jonquières condition.
//!
//! A twist assigns an integer `T(q, C)` to every node `q` and each of the two
//! components `C` through it. The three axioms are antisymmetry across a
//! node, equality along parallel nodes, and a four-component consistency
//! rule. A line bundle of multidegree `deg` admits the divisor `sum a_i p_i`
//! when some twist satisfies, for every component `C`,
//!
//! ```text
//! deg_C = sum_{p_i in C} a_i + sum_{q in C} T(q, C)
//! ```
//!
//! Loops (self-nodes of a component) carry no twist.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DualGraph, GraphError};
use crate::lattice::{self, AffineLattice, IntMatrix, Obstruction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistError {
    #[error("twist has no value for node {edge} on component {vertex}")]
    Missing { edge: String, vertex: String },
    #[error("twist names node {edge} on component {vertex}, which is not a branch of that node")]
    Unexpected { edge: String, vertex: String },
    #[error("balanced multidegrees need genus at least 2, got {0}")]
    GenusTooSmall(i64),
    #[error("subcurve must be nonempty and connected")]
    BadSubcurve,
    #[error("graph is not quasi-stable")]
    NotQuasiStable,
    #[error("twist value does not fit in 64 bits")]
    Overflow,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Twist values keyed by `(node id, component id)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Twist {
    values: BTreeMap<(String, String), i64>,
}

impl Twist {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zero(graph: &DualGraph) -> Self {
        let mut t = Twist::new();
        for (e, edge) in graph.edges().iter().enumerate() {
            if !graph.is_loop(e) {
                t.set(&edge.id, &edge.u, 0);
                t.set(&edge.id, &edge.v, 0);
            }
        }
        t
    }

    pub fn set(&mut self, edge: &str, vertex: &str, value: i64) {
        self.values.insert((edge.to_string(), vertex.to_string()), value);
    }

    pub fn get(&self, edge: &str, vertex: &str) -> Option<i64> {
        self.values.get(&(edge.to_string(), vertex.to_string())).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, i64)> {
        self.values.iter().map(|((e, v), &x)| (e.as_str(), v.as_str(), x))
    }

    /// Nested `{node: {component: value}}` form used in JSON.
    pub fn nested(&self) -> BTreeMap<String, BTreeMap<String, i64>> {
        let mut out: BTreeMap<String, BTreeMap<String, i64>> = BTreeMap::new();
        for ((e, v), &x) in &self.values {
            out.entry(e.clone()).or_default().insert(v.clone(), x);
        }
        out
    }
}

impl Serialize for Twist {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.nested().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Twist {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let nested = BTreeMap::<String, BTreeMap<String, i64>>::deserialize(d)?;
        let mut t = Twist::new();
        for (e, inner) in nested {
            for (v, x) in inner {
                t.set(&e, &v, x);
            }
        }
        Ok(t)
    }
}

/// A violated axiom, with the nodes and components that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom")]
pub enum Violation {
    #[serde(rename = "1")]
    Antisymmetry {
        node: String,
        sides: [String; 2],
        values: [i64; 2],
    },
    #[serde(rename = "2")]
    ParallelNodes {
        components: [String; 2],
        nodes: [String; 2],
        values: [i64; 2],
    },
    #[serde(rename = "3")]
    Consistency {
        /// `C, C', C^, C^'`
        components: [String; 4],
        /// `q_C, q_C', q, q^`
        nodes: [String; 4],
        /// `T(q, C)` and `T(q^, C^)`
        values: [i64; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

fn twist_value(graph: &DualGraph, t: &Twist, e: usize, v: usize) -> i64 {
    t.get(&graph.edges()[e].id, &graph.vertices()[v].id)
        .expect("shape checked before use")
}

fn check_shape(graph: &DualGraph, t: &Twist) -> Result<(), TwistError> {
    for (e, edge) in graph.edges().iter().enumerate() {
        if graph.is_loop(e) {
            continue;
        }
        for side in [&edge.u, &edge.v] {
            if t.get(&edge.id, side).is_none() {
                return Err(TwistError::Missing {
                    edge: edge.id.clone(),
                    vertex: side.clone(),
                });
            }
        }
    }
    for (e_id, v_id, _) in t.entries() {
        let ok = graph
            .edges()
            .iter()
            .enumerate()
            .any(|(e, edge)| edge.id == e_id && !graph.is_loop(e) && (edge.u == v_id || edge.v == v_id));
        if !ok {
            return Err(TwistError::Unexpected {
                edge: e_id.into(),
                vertex: v_id.into(),
            });
        }
    }
    Ok(())
}

/// Oriented branches `(edge, from, to)` of every non-loop node.
fn oriented_nodes(graph: &DualGraph) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for e in 0..graph.edge_count() {
        let (u, v) = graph.ends(e);
        if u != v {
            out.push((e, u, v));
            out.push((e, v, u));
        }
    }
    out
}

/// Checks the three twist axioms. Axiom (3) is tested verbatim: for all
/// components `C, C', C^, C^'` and nodes `q_C in C.C^`, `q_C' in C'.C^'`,
/// `q in C.C'`, `q^ in C^.C^'` with `T(q_C, C) = T(q_C', C') = 0`, it
/// requires `T(q, C) = T(q^, C^)`.
pub fn validate_twist(graph: &DualGraph, t: &Twist) -> Result<TwistReport, TwistError> {
    check_shape(graph, t)?;
    let vid = |v: usize| graph.vertices()[v].id.clone();
    let eid = |e: usize| graph.edges()[e].id.clone();
    let val = |e: usize, v: usize| twist_value(graph, t, e, v);
    let mut violations = Vec::new();

    for e in 0..graph.edge_count() {
        let (u, v) = graph.ends(e);
        if u != v && val(e, u) != -val(e, v) {
            violations.push(Violation::Antisymmetry {
                node: eid(e),
                sides: [vid(u), vid(v)],
                values: [val(e, u), val(e, v)],
            });
        }
    }

    for e1 in 0..graph.edge_count() {
        for e2 in e1 + 1..graph.edge_count() {
            let (u1, v1) = graph.ends(e1);
            let (u2, v2) = graph.ends(e2);
            if u1 == v1 || (u1, v1) != (u2, v2) && (u1, v1) != (v2, u2) {
                continue;
            }
            let c = u1.min(v1);
            if val(e1, c) != val(e2, c) {
                violations.push(Violation::ParallelNodes {
                    components: [vid(c), vid(u1.max(v1))],
                    nodes: [eid(e1), eid(e2)],
                    values: [val(e1, c), val(e2, c)],
                });
            }
        }
    }

    let nodes = oriented_nodes(graph);
    for &(q, c, c1) in &nodes {
        for &(qh, ch, ch1) in &nodes {
            for &(qc, from, to) in &nodes {
                if from != c || to != ch || val(qc, c) != 0 {
                    continue;
                }
                for &(qc1, from1, to1) in &nodes {
                    if from1 != c1 || to1 != ch1 || val(qc1, c1) != 0 {
                        continue;
                    }
                    if val(q, c) != val(qh, ch) {
                        violations.push(Violation::Consistency {
                            components: [vid(c), vid(c1), vid(ch), vid(ch1)],
                            nodes: [eid(qc), eid(qc1), eid(q), eid(qh)],
                            values: [val(q, c), val(qh, ch)],
                        });
                    }
                }
            }
        }
    }
    Ok(TwistReport {
        valid: violations.is_empty(),
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuasiStability {
    pub quasi_stable: bool,
    pub destabilising_not_exceptional: Vec<String>,
    pub tails_with_exceptional: Vec<Vec<String>>,
    pub bridges_with_several_exceptional: Vec<Vec<String>>,
}

pub fn quasi_stability(graph: &DualGraph) -> QuasiStability {
    let destab: Vec<String> = (0..graph.vertex_count())
        .filter(|&v| graph.is_destabilising(v) && !graph.is_exceptional(v))
        .map(|v| graph.vertices()[v].id.clone())
        .collect();
    let exc = graph.exceptional_mask();
    let tails: Vec<Vec<String>> = graph
        .rational_tails()
        .into_iter()
        .filter(|&m| m & exc != 0)
        .map(|m| graph.ids_of(m))
        .collect();
    let bridges: Vec<Vec<String>> = graph
        .rational_bridges()
        .into_iter()
        .filter(|&m| (m & exc).count_ones() > 1)
        .map(|m| graph.ids_of(m))
        .collect();
    QuasiStability {
        quasi_stable: destab.is_empty() && tails.is_empty() && bridges.is_empty(),
        destabilising_not_exceptional: destab,
        tails_with_exceptional: tails,
        bridges_with_several_exceptional: bridges,
    }
}

pub fn is_quasi_stable(graph: &DualGraph) -> bool {
    quasi_stability(graph).quasi_stable
}

/// Which degree to use for `w_Y` in the balancing inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BalanceConvention {
    /// `w_Y = 2(g_Y - 2)`
    #[default]
    Literal,
    /// `w_Y = 2 g_Y - 2 + k_Y`, the degree of the dualizing sheaf on `Y`.
    Dualizing,
}

impl BalanceConvention {
    fn w(self, genus: i64, k: i64) -> i64 {
        match self {
            BalanceConvention::Literal => 2 * (genus - 2),
            BalanceConvention::Dualizing => 2 * genus - 2 + k,
        }
    }
}

/// The balancing inequality for a subcurve, scaled by `2(2g-2)` so that it
/// reads `|lhs| <= rhs` in integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalanceInequality {
    pub degree: i64,
    pub w: i64,
    pub t: i64,
    pub k: i64,
    pub b: i64,
    pub lhs: i64,
    pub rhs: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BalanceRule {
    Exceptional,
    RationalBridge,
    RationalTail,
    Inequality(BalanceInequality),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalanceCheck {
    pub subcurve: Vec<String>,
    pub degree: i64,
    /// Conditions that apply to this subcurve; empty means unconstrained.
    pub rules: Vec<BalanceRule>,
    pub holds: bool,
}

/// Balance conditions on one connected subcurve `mask`, for a bundle of
/// total degree `d` on a curve of genus `g`.
pub fn is_balanced(
    graph: &DualGraph,
    mask: u64,
    d: i64,
    g: i64,
    convention: BalanceConvention,
) -> Result<BalanceCheck, TwistError> {
    if g <= 1 {
        return Err(TwistError::GenusTooSmall(g));
    }
    if mask & !graph.full_mask() != 0 || !graph.is_connected_mask(mask) {
        return Err(TwistError::BadSubcurve);
    }
    let tails = graph.rational_tails();
    let bridges = graph.rational_bridges();
    let degree = graph.degree_of_mask(mask);
    let mut rules = Vec::new();
    let mut holds = true;

    if mask.count_ones() == 1 && graph.is_exceptional(mask.trailing_zeros() as usize) {
        rules.push(BalanceRule::Exceptional);
        holds &= degree == 1;
    }
    if bridges.contains(&mask) {
        rules.push(BalanceRule::RationalBridge);
        holds &= degree == 0 || degree == 1;
    }
    if tails.contains(&mask) {
        rules.push(BalanceRule::RationalTail);
        holds &= degree == -1;
    }
    let covered = tails.iter().chain(&bridges).fold(0u64, |m, s| m | s);
    if mask != graph.full_mask() && mask & covered == 0 {
        let adjacent = |s: u64| {
            graph.edges().iter().enumerate().filter(move |&(e, _)| {
                let (a, b) = graph.ends(e);
                (mask >> a & 1 == 1 && s >> b & 1 == 1) || (mask >> b & 1 == 1 && s >> a & 1 == 1)
            })
        };
        let t = tails
            .iter()
            .filter(|&&s| s & mask == 0 && adjacent(s).next().is_some())
            .count() as i64;
        let b = bridges
            .iter()
            .filter(|&&s| s & mask == 0 && graph.degree_of_mask(s) == 0 && adjacent(s).count() == 2)
            .count() as i64;
        let k = graph.boundary_count(mask) as i64;
        let w = convention.w(graph.arithmetic_genus(mask), k);
        let scale = 2 * (2 * g - 2);
        let lhs = scale * degree - 2 * d * (w - t) - scale * t;
        let rhs = (2 * g - 2) * (k - t - 2 * b);
        holds &= lhs.abs() <= rhs;
        rules.push(BalanceRule::Inequality(BalanceInequality {
            degree,
            w,
            t,
            k,
            b,
            lhs,
            rhs,
        }));
    }
    Ok(BalanceCheck {
        subcurve: graph.ids_of(mask),
        degree,
        rules,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalanceReport {
    pub convention: BalanceConvention,
    pub balanced: bool,
    pub failures: Vec<BalanceCheck>,
}

/// Balance over every connected proper subcurve, with `d` the total degree
/// of the multidegree and `g` the genus of the graph.
pub fn balance_report(graph: &DualGraph, convention: BalanceConvention) -> Result<BalanceReport, TwistError> {
    let g = crate::graph::tree_genus(graph)?;
    let d = graph.total_degree();
    let mut failures = Vec::new();
    for mask in graph.connected_subsets(graph.full_mask()) {
        if mask == graph.full_mask() {
            continue;
        }
        let check = is_balanced(graph, mask, d, g, convention)?;
        if !check.holds {
            failures.push(check);
        }
    }
    Ok(BalanceReport {
        convention,
        balanced: failures.is_empty(),
        failures,
    })
}

/// All nodes joining one unordered pair of components `u < v`. Axiom (2)
/// gives them a common value `x = T(q, u) = -T(q, v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Link {
    u: usize,
    v: usize,
    edges: Vec<usize>,
}

fn links(graph: &DualGraph) -> Vec<Link> {
    let mut map: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for e in 0..graph.edge_count() {
        let (a, b) = graph.ends(e);
        if a != b {
            map.entry((a.min(b), a.max(b))).or_default().push(e);
        }
    }
    map.into_iter().map(|((u, v), edges)| Link { u, v, edges }).collect()
}

fn link_index(links: &[Link], a: usize, b: usize) -> Option<(usize, i64)> {
    links.iter().position(|l| (l.u, l.v) == (a.min(b), a.max(b))).map(|i| (i, if a < b { 1 } else { -1 }))
}

/// Four-component configuration through links, as component indices
/// `(C, C', C^, C^')`.
type Quad = (usize, usize, usize, usize);

fn link_quads(links: &[Link]) -> Vec<Quad> {
    let mut out = Vec::new();
    let oriented: Vec<(usize, usize)> = links.iter().flat_map(|l| [(l.u, l.v), (l.v, l.u)]).collect();
    for &(c, c1) in &oriented {
        for &(ch, ch1) in &oriented {
            if link_index(links, c, ch).is_some() && link_index(links, c1, ch1).is_some() {
                out.push((c, c1, ch, ch1));
            }
        }
    }
    out
}

/// Why a twist system has no solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// The components in `vertices` need total twist `excess`, but every
    /// twist across their boundary is a multiple of `modulus` (0 when there
    /// is no boundary).
    DegreeCut {
        vertices: Vec<String>,
        excess: i64,
        modulus: i64,
    },
    /// Equation `row` forces a fractional twist.
    Integrality { row: String, residual: String, pivot: String },
    /// Equation `row` contradicts the others.
    Inconsistent { row: String },
    /// Solvable before, but not after imposing the forced axiom (3)
    /// equalities listed in the solution.
    Consistency { row: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Feasible,
    Infeasible,
}

/// An axiom (3) instance whose hypotheses hold on every solution, so its
/// conclusion was added as a linear equation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForcedEquality {
    pub components: [String; 4],
}

/// Solution set of a twist system: `particular + span_Z(basis)`, minus any
/// point that violates axiom (3). Those points lie on finitely many proper
/// sublattices, so a nonempty lattice always contains genuine solutions.
#[derive(Debug, Clone, Serialize)]
pub struct TwistSolution {
    pub status: Status,
    pub particular: Option<Twist>,
    pub basis: Vec<Twist>,
    pub certificate: Option<Certificate>,
    pub forced_equalities: Vec<ForcedEquality>,
    #[serde(skip)]
    links: Vec<Link>,
    #[serde(skip)]
    lattice: Option<AffineLattice>,
    #[serde(skip)]
    graph: Option<DualGraph>,
}

fn twist_from_links(graph: &DualGraph, links: &[Link], x: &[BigInt]) -> Result<Twist, TwistError> {
    let mut t = Twist::new();
    for (l, xv) in links.iter().zip(x) {
        let val = xv.to_i64().ok_or(TwistError::Overflow)?;
        for &e in &l.edges {
            let edge = &graph.edges()[e];
            t.set(&edge.id, &graph.vertices()[l.u].id, val);
            t.set(&edge.id, &graph.vertices()[l.v].id, -val);
        }
    }
    Ok(t)
}

fn links_from_twist(graph: &DualGraph, links: &[Link], t: &Twist) -> Option<Vec<BigInt>> {
    let mut x = Vec::with_capacity(links.len());
    for l in links {
        let edge = &graph.edges()[l.edges[0]];
        x.push(BigInt::from(t.get(&edge.id, &graph.vertices()[l.u].id)?));
    }
    Some(x)
}

fn find_cut(graph: &DualGraph, links: &[Link], rhs: &[i64]) -> Option<Certificate> {
    let n = graph.vertex_count();
    let full = graph.full_mask();
    let check = |mask: u64| -> Option<Certificate> {
        let excess: i64 = (0..n).filter(|&v| mask >> v & 1 == 1).map(|v| rhs[v]).sum();
        let modulus = links
            .iter()
            .filter(|l| (mask >> l.u & 1) != (mask >> l.v & 1))
            .fold(0i64, |g, l| g.gcd(&(l.edges.len() as i64)));
        let bad = if modulus == 0 { excess != 0 } else { excess % modulus != 0 };
        bad.then(|| Certificate::DegreeCut {
            vertices: graph.ids_of(mask),
            excess,
            modulus,
        })
    };
    if let Some(c) = check(full) {
        return Some(c);
    }
    if n > 16 {
        return None;
    }
    (1..full).find_map(check)
}

fn row_name(graph: &DualGraph, row: usize) -> String {
    if row < graph.vertex_count() {
        graph.vertices()[row].id.clone()
    } else {
        format!("consistency#{}", row - graph.vertex_count())
    }
}

fn identically_zero(lat: &AffineLattice, coef: &[(usize, i64)]) -> bool {
    let eval = |x: &[BigInt]| -> BigInt { coef.iter().map(|&(i, s)| &x[i] * s).sum() };
    eval(&lat.particular).is_zero() && lat.kernel.iter().all(|k| eval(k).is_zero())
}

/// Solves the degree equations for a twist, given the multidegree and
/// markings stored on the graph.
pub fn solve_twists(graph: &DualGraph) -> Result<TwistSolution, TwistError> {
    let links = links(graph);
    let n = graph.vertex_count();
    let rhs: Vec<i64> = (0..n).map(|v| graph.degree_of(v) - graph.marking_weight(v)).collect();
    let mut a = IntMatrix::zeros(n, links.len());
    for (j, l) in links.iter().enumerate() {
        let m = BigInt::from(l.edges.len());
        a.set(l.u, j, m.clone());
        a.set(l.v, j, -m);
    }
    let mut b: Vec<BigInt> = rhs.iter().map(|&v| BigInt::from(v)).collect();
    let vid = |v: usize| graph.vertices()[v].id.clone();

    let infeasible = |certificate: Certificate, forced: Vec<ForcedEquality>| TwistSolution {
        status: Status::Infeasible,
        particular: None,
        basis: vec![],
        certificate: Some(certificate),
        forced_equalities: forced,
        links: links.clone(),
        lattice: None,
        graph: Some(graph.clone()),
    };
    let obstruction_certificate = |o: Obstruction, after_forcing: bool| match o {
        _ if after_forcing => Certificate::Consistency {
            row: match o {
                Obstruction::Inconsistent { row } | Obstruction::NonIntegral { row, .. } => row_name(graph, row),
            },
        },
        Obstruction::Inconsistent { row } => Certificate::Inconsistent { row: row_name(graph, row) },
        Obstruction::NonIntegral { row, residual, pivot } => Certificate::Integrality {
            row: row_name(graph, row),
            residual: residual.to_string(),
            pivot: pivot.to_string(),
        },
    };

    let mut lat = match lattice::solve(&a, &b) {
        Ok(l) => l,
        Err(o) => {
            let cert = find_cut(graph, &links, &rhs).unwrap_or_else(|| obstruction_certificate(o, false));
            return Ok(infeasible(cert, vec![]));
        }
    };

    let quads = link_quads(&links);
    let mut forced = Vec::new();
    let mut forced_set = std::collections::BTreeSet::new();
    loop {
        let mut added = false;
        for &(c, c1, ch, ch1) in &quads {
            let h1 = link_index(&links, c, ch).expect("quad links exist");
            let h2 = link_index(&links, c1, ch1).expect("quad links exist");
            if !identically_zero(&lat, &[h1]) || !identically_zero(&lat, &[h2]) {
                continue;
            }
            let (lq, sq) = link_index(&links, c, c1).expect("quad links exist");
            let (lh, sh) = link_index(&links, ch, ch1).expect("quad links exist");
            let concl = [(lq, sq), (lh, -sh)];
            if identically_zero(&lat, &concl) {
                continue;
            }
            let mut row = vec![BigInt::zero(); links.len()];
            row[lq] += sq;
            row[lh] -= sh;
            a.push_row(row);
            b.push(BigInt::zero());
            if forced_set.insert((c, c1, ch, ch1)) {
                forced.push(ForcedEquality {
                    components: [vid(c), vid(c1), vid(ch), vid(ch1)],
                });
            }
            added = true;
            break;
        }
        if !added {
            break;
        }
        lat = match lattice::solve(&a, &b) {
            Ok(l) => l,
            Err(o) => return Ok(infeasible(obstruction_certificate(o, true), forced)),
        };
    }

    let particular_x = consistent_point(graph, &links, &lat)?;
    let particular = twist_from_links(graph, &links, &particular_x)?;
    let basis = lat
        .kernel
        .iter()
        .map(|k| twist_from_links(graph, &links, k))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TwistSolution {
        status: Status::Feasible,
        particular: Some(particular),
        basis,
        certificate: None,
        forced_equalities: forced,
        links,
        lattice: Some(lat),
        graph: Some(graph.clone()),
    })
}

/// A lattice point satisfying axiom (3), found by widening shells of
/// kernel coordinates around the reduced particular solution.
fn consistent_point(graph: &DualGraph, links: &[Link], lat: &AffineLattice) -> Result<Vec<BigInt>, TwistError> {
    let ok = |x: &[BigInt]| -> Result<bool, TwistError> {
        let t = twist_from_links(graph, links, x)?;
        Ok(validate_twist(graph, &t)?.valid)
    };
    if ok(&lat.particular)? {
        return Ok(lat.particular.clone());
    }
    let m = lat.dimension();
    for radius in 1i64.. {
        let side = (2 * radius + 1) as usize;
        let total = side.checked_pow(m as u32).unwrap_or(usize::MAX);
        for flat in 0..total {
            let mut rest = flat;
            let coords: Vec<i64> = (0..m)
                .map(|_| {
                    let c = (rest % side) as i64 - radius;
                    rest /= side;
                    c
                })
                .collect();
            if coords.iter().all(|c| c.abs() < radius) {
                continue;
            }
            let big: Vec<BigInt> = coords.iter().map(|&c| BigInt::from(c)).collect();
            let x = lat.point(&big);
            if ok(&x)? {
                return Ok(x);
            }
        }
    }
    unreachable!("a nonempty lattice is not covered by proper sublattices")
}

impl TwistSolution {
    pub fn is_feasible(&self) -> bool {
        self.status == Status::Feasible
    }

    /// Dimension of the solution lattice.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Whether `t` solves the system and satisfies all three axioms.
    pub fn contains(&self, t: &Twist) -> bool {
        let (Some(lat), Some(graph)) = (&self.lattice, &self.graph) else {
            return false;
        };
        if !validate_twist(graph, t).is_ok_and(|r| r.valid) {
            return false;
        }
        links_from_twist(graph, &self.links, t).is_some_and(|x| lat.contains(&x))
    }

    /// Every solution whose values all lie in `[-bound, bound]`.
    pub fn solutions_within(&self, bound: i64) -> Result<Vec<Twist>, TwistError> {
        let (Some(lat), Some(graph)) = (&self.lattice, &self.graph) else {
            return Ok(vec![]);
        };
        let mut out = Vec::new();
        for x in lat.points_in_box(bound) {
            let t = twist_from_links(graph, &self.links, &x)?;
            if validate_twist(graph, &t)?.valid {
                out.push(t);
            }
        }
        Ok(out)
    }

    /// The twist at parameter `coords` in the basis.
    pub fn twist_at(&self, coords: &[i64]) -> Option<Twist> {
        let (lat, graph) = (self.lattice.as_ref()?, self.graph.as_ref()?);
        let big: Vec<BigInt> = coords.iter().map(|&c| BigInt::from(c)).collect();
        let x = lat.point(&big);
        twist_from_links(graph, &self.links, &x).ok()
    }
}

/// Degree-level admissibility of the divisor given by the markings.
/// Requires a quasi-stable graph; balancing is left to the caller, see
/// [`balance_report`].
pub fn admits_dej_divisor(graph: &DualGraph) -> Result<bool, TwistError> {
    if !is_quasi_stable(graph) {
        return Err(TwistError::NotQuasiStable);
    }
    Ok(solve_twists(graph)?.is_feasible())
}

/// An affine function `constant + slope * t` of the family parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Affine {
    pub constant: i64,
    pub slope: i64,
}

impl Affine {
    pub fn at(&self, t: i64) -> i64 {
        self.constant + self.slope * t
    }

    /// The integer parameter where the function vanishes, if any.
    pub fn integer_zero(&self) -> Option<i64> {
        if self.slope == 0 {
            return None;
        }
        (self.constant % self.slope == 0).then(|| -self.constant / self.slope)
    }
}

/// Structure of a one-parameter family of twists at the two nodes where a
/// component meets the rest of a closed chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndTwists {
    pub component: String,
    pub nodes: [String; 2],
    pub ends: [Affine; 2],
    /// `T(q_a, C) + T(q_b, C)`, constant along the family.
    pub sum: i64,
    /// Parameter where both ends are nonzero (a length-2 divisor on `C`).
    pub both_nonzero_at: Option<i64>,
    /// Parameters where exactly one end vanishes (a length-1 divisor on `C`).
    pub exactly_one_nonzero_at: Vec<i64>,
    pub both_zero_possible: bool,
}

/// Classifies a one-parameter solution family by which of `T(node_a, C)`,
/// `T(node_b, C)` vanish.
pub fn classify_end_twists(
    solution: &TwistSolution,
    component: &str,
    node_a: &str,
    node_b: &str,
) -> Option<EndTwists> {
    if !solution.is_feasible() || solution.dimension() != 1 {
        return None;
    }
    let p = solution.particular.as_ref()?;
    let k = &solution.basis[0];
    let end = |node: &str| -> Option<Affine> {
        Some(Affine {
            constant: p.get(node, component)?,
            slope: k.get(node, component)?,
        })
    };
    let ends = [end(node_a)?, end(node_b)?];
    let sum = ends[0].constant + ends[1].constant;
    let zeros: Vec<i64> = ends.iter().filter_map(Affine::integer_zero).collect();
    let both_zero_possible = zeros.len() == 2 && zeros[0] == zeros[1];
    let mut exactly_one: Vec<i64> = zeros
        .iter()
        .copied()
        .filter(|&t| ends.iter().filter(|e| e.at(t) == 0).count() == 1)
        .collect();
    exactly_one.sort_unstable();
    exactly_one.dedup();
    let both_nonzero_at = (0i64..).flat_map(|i| [i, -i]).take(8).find(|&t| ends.iter().all(|e| e.at(t) != 0));
    Some(EndTwists {
        component: component.into(),
        nodes: [node_a.into(), node_b.into()],
        ends,
        sum,
        both_nonzero_at,
        exactly_one_nonzero_at: exactly_one,
        both_zero_possible,
    })
}
