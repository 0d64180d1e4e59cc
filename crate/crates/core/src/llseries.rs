//! Vanishing data of limit linear series and aspect divisors on trees.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::counts::DJProblem;
use crate::graph::{DualGraph, GraphError};

pub use crate::graph::tree_genus;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("vanishing orders must be strictly increasing in [0, {d}], got {orders:?}")]
    BadVanishing { orders: Vec<i64>, d: i64 },
    #[error("ramification must be non-decreasing and non-negative, got {0:?}")]
    BadRamification(Vec<i64>),
    #[error("sequences have lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("a sequence needs at least one entry")]
    Empty,
}

/// Orders of vanishing `a_0 < ... < a_r` of a `g^r_d` at a point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingSequence {
    orders: Vec<i64>,
    d: i64,
}

impl VanishingSequence {
    pub fn new(orders: Vec<i64>, d: i64) -> Result<Self, SequenceError> {
        let increasing = orders.windows(2).all(|w| w[0] < w[1]);
        if orders.is_empty() {
            return Err(SequenceError::Empty);
        }
        if !increasing || orders[0] < 0 || *orders.last().unwrap() > d {
            return Err(SequenceError::BadVanishing { orders, d });
        }
        Ok(Self { orders, d })
    }

    /// `(start, start+1, ..., start+r)`.
    pub fn consecutive(start: i64, r: u32, d: i64) -> Result<Self, SequenceError> {
        Self::new((0..=i64::from(r)).map(|i| start + i).collect(), d)
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    pub fn degree(&self) -> i64 {
        self.d
    }

    pub fn r(&self) -> usize {
        self.orders.len() - 1
    }
}

/// `alpha_i = a_i - i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationSequence {
    alphas: Vec<i64>,
}

impl RamificationSequence {
    pub fn new(alphas: Vec<i64>) -> Result<Self, SequenceError> {
        if alphas.is_empty() {
            return Err(SequenceError::Empty);
        }
        if alphas[0] < 0 || alphas.windows(2).any(|w| w[0] > w[1]) {
            return Err(SequenceError::BadRamification(alphas));
        }
        Ok(Self { alphas })
    }

    pub fn alphas(&self) -> &[i64] {
        &self.alphas
    }

    /// Total ramification `sum alpha_i`.
    pub fn weight(&self) -> i64 {
        self.alphas.iter().sum()
    }
}

pub fn ramification_from_vanishing(v: &VanishingSequence) -> RamificationSequence {
    RamificationSequence {
        alphas: v.orders.iter().zip(0..).map(|(a, i)| a - i).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Compatibility {
    Refined,
    Crude,
    Incompatible,
}

/// Compares `a_i(Y) + a_{r-i}(Z)` with `d` at a node joining `Y` and `Z`.
pub fn refined_compatible(
    v_y: &VanishingSequence,
    v_z: &VanishingSequence,
    d: i64,
) -> Result<Compatibility, SequenceError> {
    let (a, b) = (&v_y.orders, &v_z.orders);
    if a.len() != b.len() {
        return Err(SequenceError::LengthMismatch(a.len(), b.len()));
    }
    let sums: Vec<i64> = a.iter().zip(b.iter().rev()).map(|(x, y)| x + y).collect();
    Ok(if sums.iter().any(|&s| s < d) {
        Compatibility::Incompatible
    } else if sums.iter().all(|&s| s == d) {
        Compatibility::Refined
    } else {
        Compatibility::Crude
    })
}

/// `sum_i max(alpha_i + g_j - d + r, 0)`.
pub fn eh_sum(g_component: i64, d: i64, r: i64, alpha: &RamificationSequence) -> i64 {
    alpha.alphas.iter().map(|&a| (a + g_component - d + r).max(0)).sum()
}

/// Whether a general curve of genus `g_component` carries a `g^r_d` with at
/// least ramification `alpha` at a general point.
pub fn eh_existence(g_component: i64, d: i64, r: i64, alpha: &RamificationSequence) -> bool {
    eh_sum(g_component, d, r, alpha) <= g_component
}

/// `sum r_v = r + 1 + |E| - |V|` for sections glued along a tree.
pub fn tree_section_budget(r: i64, edges: i64, vertices: i64) -> i64 {
    assert!(vertices > 0, "need at least one component");
    r + 1 + edges - vertices
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AspectError {
    #[error("aspect divisors need a tree")]
    NotATree,
    #[error("placement names part {0}, but there are only {1} parts")]
    UnknownPart(usize, usize),
    #[error("degrees placed for part {part} sum to {placed}, expected {expected}")]
    DegreeMismatch { part: usize, placed: u32, expected: u32 },
    #[error("node {node} on {component} gets coefficient {coefficient}")]
    Negative {
        node: String,
        component: String,
        coefficient: i64,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Degree `delta` of the divisor `D_part` specialising to `vertex`. A part
/// may be split across several components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub part: usize,
    pub vertex: String,
    pub delta: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AspectDivisor {
    pub component: String,
    /// `(a_i, d_{i,Y})` for every part meeting `Y`.
    pub interior: Vec<(u32, u32)>,
    /// `(node, coefficient)` for each node on `Y`.
    pub nodes: Vec<(String, i64)>,
}

impl AspectDivisor {
    pub fn interior_weight(&self) -> i64 {
        self.interior.iter().map(|&(a, d)| i64::from(a) * i64::from(d)).sum()
    }

    pub fn degree(&self) -> i64 {
        self.interior_weight() + self.nodes.iter().map(|(_, c)| c).sum::<i64>()
    }

    pub fn node_coefficient(&self, node: &str) -> Option<i64> {
        self.nodes.iter().find(|(n, _)| n == node).map(|&(_, c)| c)
    }

    /// Node coefficient after removing `base` base points at the node.
    pub fn reduced_node_coefficient(&self, node: &str, base: i64) -> Option<i64> {
        self.node_coefficient(node).map(|c| c - base)
    }
}

/// Aspect divisors on a tree. At a node `q` of `Y`, the coefficient is the
/// weight `sum a_i d_{i,Z}` over the components `Z` on the far side of
/// `q`, which makes every aspect have total degree `d`.
pub fn aspect_divisors(
    tree: &DualGraph,
    placements: &[Placement],
    p: &DJProblem,
) -> Result<Vec<AspectDivisor>, AspectError> {
    if !tree.is_tree() {
        return Err(AspectError::NotATree);
    }
    let k = p.mu1.len();
    let mut placed = vec![0u32; k];
    let mut weight = vec![0i64; tree.vertex_count()];
    let mut interior: Vec<Vec<(u32, u32)>> = vec![Vec::new(); tree.vertex_count()];
    for pl in placements {
        if pl.part >= k {
            return Err(AspectError::UnknownPart(pl.part, k));
        }
        let v = tree
            .vertex_index(&pl.vertex)
            .ok_or_else(|| GraphError::UnknownVertex(pl.vertex.clone()))?;
        placed[pl.part] += pl.delta;
        if pl.delta > 0 {
            weight[v] += i64::from(p.mu1[pl.part]) * i64::from(pl.delta);
            interior[v].push((p.mu1[pl.part], pl.delta));
        }
    }
    for (part, (&got, &want)) in placed.iter().zip(&p.mu2).enumerate() {
        if got != want {
            return Err(AspectError::DegreeMismatch {
                part,
                placed: got,
                expected: want,
            });
        }
    }

    // far-side weight of each oriented node, by removing the edge
    let mut far: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for e in 0..tree.edge_count() {
        let (u, v) = tree.ends(e);
        let side_of = |start: usize| -> u64 {
            let mut mask = 1u64 << start;
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for f in 0..tree.edge_count() {
                    if f == e {
                        continue;
                    }
                    let (a, b) = tree.ends(f);
                    let y = if a == x { b } else if b == x { a } else { continue };
                    if mask >> y & 1 == 0 {
                        mask |= 1 << y;
                        stack.push(y);
                    }
                }
            }
            mask
        };
        let sum = |mask: u64| -> i64 { (0..tree.vertex_count()).filter(|&i| mask >> i & 1 == 1).map(|i| weight[i]).sum() };
        far.insert((e, u), sum(side_of(v)));
        far.insert((e, v), sum(side_of(u)));
    }

    let mut out = Vec::new();
    for (v, vertex) in tree.vertices().iter().enumerate() {
        let mut nodes = Vec::new();
        for e in 0..tree.edge_count() {
            let (a, b) = tree.ends(e);
            if a == v || b == v {
                let c = far[&(e, v)];
                if c < 0 {
                    return Err(AspectError::Negative {
                        node: tree.edges()[e].id.clone(),
                        component: vertex.id.clone(),
                        coefficient: c,
                    });
                }
                nodes.push((tree.edges()[e].id.clone(), c));
            }
        }
        let mut parts = std::mem::take(&mut interior[v]);
        parts.sort_unstable_by(|x, y| y.cmp(x));
        out.push(AspectDivisor {
            component: vertex.id.clone(),
            interior: parts,
            nodes,
        });
    }
    Ok(out)
}
