//! Dual graphs of nodal curves.
//!
//! Vertices are irreducible components (with geometric genus), edges are
//! nodes, and markings are the points `p_i` carrying coefficients `a_i`. A
//! marking may stand for a whole divisor `D_i` of degree `delta` specialised
//! onto the component, in which case it contributes `a * delta` to degrees.
//!
//! Subcurves are handled as bit masks over vertex indices, so graphs are
//! limited to 64 components.

use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(String),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("graph has {0} vertices; at most 64 are supported")]
    TooLarge(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has a cycle")]
    NotATree,
    #[error("vertex {0} is flagged exceptional but carries markings")]
    MarkedExceptional(String),
    #[error("marking coefficient and degree must be positive (vertex {0})")]
    BadMarking(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    pub genus: u32,
    /// Unset means "exceptional exactly when destabilising and unmarked".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exceptional: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub u: String,
    pub v: String,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Marking {
    pub vertex: String,
    pub a: u32,
    #[serde(default = "one")]
    pub delta: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct GraphDoc {
    vertices: Vec<Vertex>,
    #[serde(default)]
    edges: Vec<Edge>,
    #[serde(default)]
    markings: Vec<Marking>,
    #[serde(default)]
    multidegree: BTreeMap<String, i64>,
}

/// A validated dual graph. Missing multidegree entries read as 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphDoc", into = "GraphDoc")]
pub struct DualGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    markings: Vec<Marking>,
    multidegree: BTreeMap<String, i64>,
    index: BTreeMap<String, usize>,
    ends: Vec<(usize, usize)>,
}

impl TryFrom<GraphDoc> for DualGraph {
    type Error = GraphError;
    fn try_from(doc: GraphDoc) -> Result<Self, GraphError> {
        DualGraph::new(doc.vertices, doc.edges, doc.markings, doc.multidegree)
    }
}

impl From<DualGraph> for GraphDoc {
    fn from(g: DualGraph) -> Self {
        GraphDoc {
            vertices: g.vertices,
            edges: g.edges,
            markings: g.markings,
            multidegree: g.multidegree,
        }
    }
}

impl DualGraph {
    pub fn new(
        vertices: Vec<Vertex>,
        edges: Vec<Edge>,
        markings: Vec<Marking>,
        multidegree: BTreeMap<String, i64>,
    ) -> Result<Self, GraphError> {
        if vertices.len() > 64 {
            return Err(GraphError::TooLarge(vertices.len()));
        }
        let mut index = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.id.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.id.clone()));
            }
        }
        let lookup = |id: &str| index.get(id).copied().ok_or_else(|| GraphError::UnknownVertex(id.into()));
        let mut seen = HashSet::new();
        let mut ends = Vec::with_capacity(edges.len());
        for e in &edges {
            if !seen.insert(e.id.clone()) {
                return Err(GraphError::DuplicateEdge(e.id.clone()));
            }
            ends.push((lookup(&e.u)?, lookup(&e.v)?));
        }
        for m in &markings {
            lookup(&m.vertex)?;
            if m.a == 0 || m.delta == 0 {
                return Err(GraphError::BadMarking(m.vertex.clone()));
            }
        }
        for key in multidegree.keys() {
            lookup(key)?;
        }
        let g = DualGraph {
            vertices,
            edges,
            markings,
            multidegree,
            index,
            ends,
        };
        for (i, v) in g.vertices.iter().enumerate() {
            if v.exceptional == Some(true) && g.marking_count(i) > 0 {
                return Err(GraphError::MarkedExceptional(v.id.clone()));
            }
        }
        Ok(g)
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graphs always serialise")
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn markings(&self) -> &[Marking] {
        &self.markings
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Endpoint indices of edge `e`.
    pub fn ends(&self, e: usize) -> (usize, usize) {
        self.ends[e]
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (u, v) = self.ends[e];
        u == v
    }

    pub fn genus_of(&self, v: usize) -> u32 {
        self.vertices[v].genus
    }

    pub fn degree_of(&self, v: usize) -> i64 {
        self.multidegree.get(&self.vertices[v].id).copied().unwrap_or(0)
    }

    pub fn multidegree(&self) -> Vec<i64> {
        (0..self.vertex_count()).map(|v| self.degree_of(v)).collect()
    }

    pub fn total_degree(&self) -> i64 {
        self.multidegree().iter().sum()
    }

    pub fn set_multidegree(&mut self, degrees: BTreeMap<String, i64>) -> Result<(), GraphError> {
        for key in degrees.keys() {
            if !self.index.contains_key(key) {
                return Err(GraphError::UnknownVertex(key.clone()));
            }
        }
        self.multidegree = degrees;
        Ok(())
    }

    fn marking_count(&self, v: usize) -> u32 {
        let id = &self.vertices[v].id;
        self.markings.iter().filter(|m| &m.vertex == id).map(|m| m.delta).sum()
    }

    /// `sum a * delta` over the markings on `v`.
    pub fn marking_weight(&self, v: usize) -> i64 {
        let id = &self.vertices[v].id;
        self.markings
            .iter()
            .filter(|m| &m.vertex == id)
            .map(|m| i64::from(m.a) * i64::from(m.delta))
            .sum()
    }

    /// Node branches plus marked points on `v`; a loop contributes two branches.
    pub fn special_points(&self, v: usize) -> u32 {
        let branches: u32 = self
            .ends
            .iter()
            .map(|&(a, b)| u32::from(a == v) + u32::from(b == v))
            .sum();
        branches + self.marking_count(v)
    }

    /// Rational with fewer than three special points.
    pub fn is_destabilising(&self, v: usize) -> bool {
        self.vertices[v].genus == 0 && self.special_points(v) < 3
    }

    pub fn is_exceptional(&self, v: usize) -> bool {
        self.vertices[v]
            .exceptional
            .unwrap_or_else(|| self.is_destabilising(v) && self.marking_count(v) == 0)
    }

    pub fn full_mask(&self) -> u64 {
        if self.vertex_count() == 64 {
            u64::MAX
        } else {
            (1u64 << self.vertex_count()) - 1
        }
    }

    pub fn mask_of(&self, ids: &[&str]) -> Result<u64, GraphError> {
        ids.iter().try_fold(0u64, |m, id| {
            self.vertex_index(id)
                .map(|i| m | (1 << i))
                .ok_or_else(|| GraphError::UnknownVertex((*id).into()))
        })
    }

    pub fn ids_of(&self, mask: u64) -> Vec<String> {
        (0..self.vertex_count())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| self.vertices[i].id.clone())
            .collect()
    }

    fn neighbours_mask(&self, v: usize) -> u64 {
        self.ends.iter().fold(0, |m, &(a, b)| {
            if a == v {
                m | 1 << b
            } else if b == v {
                m | 1 << a
            } else {
                m
            }
        })
    }

    pub fn is_connected_mask(&self, mask: u64) -> bool {
        if mask == 0 {
            return false;
        }
        let start = mask.trailing_zeros() as usize;
        let mut seen = 1u64 << start;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let next = self.neighbours_mask(v) & mask & !seen;
            seen |= next;
            for w in 0..self.vertex_count() {
                if next >> w & 1 == 1 {
                    queue.push_back(w);
                }
            }
        }
        seen == mask
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_mask(self.full_mask())
    }

    /// Edges with both ends in the subcurve (loops included).
    pub fn internal_edges(&self, mask: u64) -> usize {
        self.ends
            .iter()
            .filter(|&&(a, b)| mask >> a & 1 == 1 && mask >> b & 1 == 1)
            .count()
    }

    /// `k_Y`: nodes joining the subcurve to its complement.
    pub fn boundary_count(&self, mask: u64) -> usize {
        self.ends
            .iter()
            .filter(|&&(a, b)| (mask >> a & 1) != (mask >> b & 1))
            .count()
    }

    /// Arithmetic genus `sum (g_v - 1) + |E(Y)| + 1` of a connected subcurve.
    pub fn arithmetic_genus(&self, mask: u64) -> i64 {
        let vs: i64 = (0..self.vertex_count())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| i64::from(self.vertices[i].genus) - 1)
            .sum();
        vs + self.internal_edges(mask) as i64 + 1
    }

    pub fn degree_of_mask(&self, mask: u64) -> i64 {
        (0..self.vertex_count())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| self.degree_of(i))
            .sum()
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edge_count() + 1 == self.vertex_count()
    }

    /// All connected vertex subsets contained in `allowed`, in increasing
    /// numeric order of their masks.
    pub fn connected_subsets(&self, allowed: u64) -> Vec<u64> {
        let mut found = HashSet::new();
        for v in 0..self.vertex_count() {
            if allowed >> v & 1 == 0 {
                continue;
            }
            // grow sets whose least vertex is v
            let region = allowed & !((1u64 << v) - 1);
            let mut stack = vec![1u64 << v];
            while let Some(s) = stack.pop() {
                if !found.insert(s) {
                    continue;
                }
                let mut frontier = 0u64;
                for w in 0..self.vertex_count() {
                    if s >> w & 1 == 1 {
                        frontier |= self.neighbours_mask(w);
                    }
                }
                frontier &= region & !s;
                for w in 0..self.vertex_count() {
                    if frontier >> w & 1 == 1 {
                        stack.push(s | 1 << w);
                    }
                }
            }
        }
        let mut out: Vec<u64> = found.into_iter().collect();
        out.sort_unstable();
        out
    }

    fn rational_subcurves_with_boundary(&self, k: usize) -> Vec<u64> {
        let rational_vertices = (0..self.vertex_count())
            .filter(|&i| self.vertices[i].genus == 0)
            .fold(0u64, |m, i| m | 1 << i);
        let full = self.full_mask();
        self.connected_subsets(rational_vertices)
            .into_iter()
            .filter(|&s| s != full && self.arithmetic_genus(s) == 0 && self.boundary_count(s) == k)
            .collect()
    }

    /// Proper connected rational subcurves meeting the rest in one point.
    pub fn rational_tails(&self) -> Vec<u64> {
        self.rational_subcurves_with_boundary(1)
    }

    /// Proper connected rational subcurves meeting the rest in two points.
    pub fn rational_bridges(&self) -> Vec<u64> {
        self.rational_subcurves_with_boundary(2)
    }

    pub fn exceptional_mask(&self) -> u64 {
        (0..self.vertex_count())
            .filter(|&i| self.is_exceptional(i))
            .fold(0, |m, i| m | 1 << i)
    }
}

/// Genus `sum (g_v - 1) + |E| + 1` of a connected graph.
pub fn tree_genus(graph: &DualGraph) -> Result<i64, GraphError> {
    if !graph.is_connected() {
        return Err(GraphError::Disconnected);
    }
    Ok(graph.arithmetic_genus(graph.full_mask()))
}

/// The chain curve: a component `C` of genus `g - 1` closed up by a rational
/// bridge `gamma_1 .. gamma_(n+1)`. Every chain component except
/// `gamma_(exceptional)` carries one marking, in the order of `mu`. The
/// multidegree is `d - 1` on `C`, `1` on the exceptional component and `0`
/// elsewhere, where `d = sum mu`.
///
/// Nodes are `q1 = C.gamma_1`, `q(j+1) = gamma_j.gamma_(j+1)` and
/// `q(n+2) = gamma_(n+1).C`.
pub fn chain_curve(g: u32, mu: &[u32], exceptional: usize) -> Result<DualGraph, GraphError> {
    let n = mu.len();
    if g == 0 {
        return Err(GraphError::Invalid("the chain curve needs g >= 1".into()));
    }
    if exceptional == 0 || exceptional > n + 1 {
        return Err(GraphError::Invalid(format!(
            "exceptional position must be in 1..={}",
            n + 1
        )));
    }
    if mu.contains(&0) {
        return Err(GraphError::Invalid("coefficients must be positive".into()));
    }
    let d: i64 = mu.iter().map(|&a| i64::from(a)).sum();
    let gamma = |j: usize| format!("gamma{j}");
    let mut vertices = vec![Vertex {
        id: "C".into(),
        genus: g - 1,
        exceptional: Some(false),
    }];
    for j in 1..=n + 1 {
        vertices.push(Vertex {
            id: gamma(j),
            genus: 0,
            exceptional: None,
        });
    }
    let mut edges = vec![Edge {
        id: "q1".into(),
        u: "C".into(),
        v: gamma(1),
    }];
    for j in 1..=n {
        edges.push(Edge {
            id: format!("q{}", j + 1),
            u: gamma(j),
            v: gamma(j + 1),
        });
    }
    edges.push(Edge {
        id: format!("q{}", n + 2),
        u: gamma(n + 1),
        v: "C".into(),
    });
    let mut markings = Vec::new();
    let mut parts = mu.iter().enumerate();
    for j in 1..=n + 1 {
        if j == exceptional {
            continue;
        }
        let (i, &a) = parts.next().expect("n markings for n marked components");
        markings.push(Marking {
            vertex: gamma(j),
            a,
            delta: 1,
            id: Some(format!("p{}", i + 1)),
        });
    }
    let mut multidegree = BTreeMap::new();
    multidegree.insert("C".to_string(), d - 1);
    multidegree.insert(gamma(exceptional), 1);
    DualGraph::new(vertices, edges, markings, multidegree)
}
