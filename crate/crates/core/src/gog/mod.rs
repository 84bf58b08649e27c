//! Graphs of infinite cyclic groups.
//!
//! A [`GbsGraph`] is a finite connected graph whose edges carry signed labels
//! `(λ₀, λ₁)`: the edge group generator maps to `a_src^{λ₀}` and `a_dst^{λ₁}`.
//! The unsigned inclusion indices are `|λ₀|` and `|λ₁|`.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Result};

mod epsilon;
mod parse;
mod presentation;
mod transform;
mod tree;

pub use epsilon::{
    augmentation_factorization, augmentation_products, balance_potential, epsilon_table,
    BalanceReport, EpsilonTable,
};
pub use parse::{parse_graph, render_graph};
pub use presentation::{canonical_presentation, Generator, Group, Presentation, Relator};
pub use transform::{reduce, subdivide_loops};
pub use tree::{bridges, cycle_basis, SpanningTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(transparent))]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(transparent))]
pub struct EdgeId(pub usize);

/// Traversal direction of an edge: `Forward` runs from `src` to `dst`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Edge {
    pub name: String,
    pub src: VertexId,
    pub dst: VertexId,
    pub lambda0: i64,
    pub lambda1: i64,
}

impl Edge {
    pub fn index0(&self) -> u64 {
        self.lambda0.unsigned_abs()
    }

    pub fn index1(&self) -> u64 {
        self.lambda1.unsigned_abs()
    }

    pub fn is_loop(&self) -> bool {
        self.src == self.dst
    }

    /// `(tail, head, label at tail, label at head)` when traversed in `dir`.
    pub fn oriented(&self, dir: Direction) -> (VertexId, VertexId, i64, i64) {
        match dir {
            Direction::Forward => (self.src, self.dst, self.lambda0, self.lambda1),
            Direction::Backward => (self.dst, self.src, self.lambda1, self.lambda0),
        }
    }
}

/// A closed walk without repeated vertices, as a sequence of directed edges.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrientedCycle {
    pub steps: Vec<(EdgeId, Direction)>,
}

impl OrientedCycle {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn reversed(&self) -> Self {
        Self { steps: self.steps.iter().rev().map(|&(e, d)| (e, d.reversed())).collect() }
    }

    /// Vertices visited, starting at the tail of the first step.
    pub fn vertices(&self, g: &GbsGraph) -> Vec<VertexId> {
        self.steps.iter().map(|&(e, d)| g.edge(e).oriented(d).0).collect()
    }

    pub fn validate(&self, g: &GbsGraph) -> Result<()> {
        let bad = |msg: &str| Err(Error::GraphShape(format!("invalid cycle: {msg}")));
        if self.steps.is_empty() {
            return bad("empty");
        }
        if self.steps.iter().any(|&(e, _)| e.0 >= g.edge_count()) {
            return bad("unknown edge");
        }
        let n = self.steps.len();
        for i in 0..n {
            let (_, head, _, _) = g.edge(self.steps[i].0).oriented(self.steps[i].1);
            let (tail, _, _, _) = g.edge(self.steps[(i + 1) % n].0).oriented(self.steps[(i + 1) % n].1);
            if head != tail {
                return bad("consecutive edges do not meet");
            }
        }
        let vs = self.vertices(g);
        if vs.iter().collect::<BTreeSet<_>>().len() != vs.len() {
            return bad("repeated vertex");
        }
        Ok(())
    }

    pub fn display(&self, g: &GbsGraph) -> String {
        let mut s = String::new();
        for (i, &(e, d)) in self.steps.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            if d == Direction::Backward {
                s.push('-');
            }
            s.push_str(&g.edge(e).name);
        }
        s
    }
}

/// A validated, connected graph of infinite cyclic groups.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(try_from = "RawGraph")
)]
pub struct GbsGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

#[cfg(feature = "serde")]
#[derive(serde::Deserialize)]
struct RawGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

#[cfg(feature = "serde")]
impl TryFrom<RawGraph> for GbsGraph {
    type Error = Error;

    fn try_from(r: RawGraph) -> Result<Self> {
        GbsGraph::new(r.vertices, r.edges)
    }
}

impl GbsGraph {
    /// Builds and validates a graph. Vertex and edge names share one
    /// namespace, since both become generator names of the presentation.
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let g = Self { vertices, edges };
        g.validate()?;
        Ok(g)
    }

    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    /// `BS(n, m) = ⟨a, t | t a^m t⁻¹ = a^n⟩` as one vertex `a` and one loop
    /// `t` with `λ₀ = m`, `λ₁ = n`.
    pub fn bs(n: i64, m: i64) -> Result<Self> {
        Self::builder().vertex("a").edge("t", "a", "a", m, n).build()
    }

    fn validate(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut names = BTreeSet::new();
        for n in self.vertices.iter().chain(self.edges.iter().map(|e| &e.name)) {
            if !names.insert(n.as_str()) {
                return Err(Error::DuplicateName(n.clone()));
            }
        }
        for e in &self.edges {
            if e.lambda0 == 0 || e.lambda1 == 0 {
                return Err(Error::ZeroLabel(e.name.clone()));
            }
            if e.src.0 >= self.vertices.len() || e.dst.0 >= self.vertices.len() {
                return Err(Error::UnknownVertex(format!("#{}", e.src.0.max(e.dst.0))));
            }
        }
        if self.components() != 1 {
            return Err(Error::Disconnected);
        }
        Ok(())
    }

    fn components(&self) -> usize {
        let mut seen = alloc::vec![false; self.vertices.len()];
        let adj = self.adjacency();
        let mut count = 0;
        for start in 0..self.vertices.len() {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &(_, w) in &adj[v] {
                    if !seen[w.0] {
                        seen[w.0] = true;
                        queue.push_back(w.0);
                    }
                }
            }
        }
        count
    }

    /// For each vertex, its incident `(edge, other endpoint)` pairs in edge
    /// order. A loop appears twice.
    pub fn adjacency(&self) -> Vec<Vec<(EdgeId, VertexId)>> {
        let mut adj = alloc::vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.src.0].push((EdgeId(i), e.dst));
            adj[e.dst.0].push((EdgeId(i), e.src));
        }
        adj
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Rank of the first homology of the underlying graph.
    pub fn betti_number(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .map(VertexId)
            .ok_or_else(|| Error::UnknownVertex(name.to_owned()))
    }

    pub fn edge_id(&self, name: &str) -> Result<EdgeId> {
        self.edges
            .iter()
            .position(|e| e.name == name)
            .map(EdgeId)
            .ok_or_else(|| Error::UnknownEdge(name.to_owned()))
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.iter().map(|e| usize::from(e.src == v) + usize::from(e.dst == v)).sum()
    }

    /// True when the underlying graph is a single cycle (a lone loop counts).
    pub fn is_cycle(&self) -> bool {
        !self.edges.is_empty() && self.vertex_ids().all(|v| self.degree(v) == 2)
    }

    /// The cycle traversed starting at vertex 0 along its lowest edge, with
    /// the first edge traversed forward if it starts at vertex 0.
    pub fn cycle_traversal(&self) -> Result<OrientedCycle> {
        if !self.is_cycle() {
            return Err(Error::GraphShape("graph is not a cycle".into()));
        }
        let adj = self.adjacency();
        let mut steps = Vec::with_capacity(self.edges.len());
        let mut at = VertexId(0);
        let mut prev: Option<EdgeId> = None;
        for _ in 0..self.edges.len() {
            let &(e, _) = adj[at.0]
                .iter()
                .find(|&&(e, _)| Some(e) != prev)
                .expect("cycle vertices have degree two");
            let edge = self.edge(e);
            let dir = if edge.src == at { Direction::Forward } else { Direction::Backward };
            steps.push((e, dir));
            at = edge.oriented(dir).1;
            prev = Some(e);
        }
        Ok(OrientedCycle { steps })
    }

    /// Map from generator name to generator, for parsing external documents.
    pub fn generator_by_name(&self, name: &str) -> Option<Generator> {
        self.vertex_id(name)
            .map(Generator::Vertex)
            .or_else(|_| self.edge_id(name).map(Generator::Stable))
            .ok()
    }

    pub fn generator_name(&self, g: Generator) -> &str {
        match g {
            Generator::Vertex(v) => self.vertex_name(v),
            Generator::Stable(e) => &self.edge(e).name,
        }
    }

    pub(crate) fn fresh_name(&self, base: &str, taken: &BTreeSet<String>) -> String {
        let mut name = String::from(base);
        while taken.contains(&name) || self.vertex_id(&name).is_ok() || self.edge_id(&name).is_ok() {
            name.push('\'');
        }
        name
    }
}

/// Incremental construction by vertex and edge names.
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    vertices: Vec<String>,
    index: BTreeMap<String, usize>,
    edges: Vec<(String, String, String, i64, i64)>,
}

impl GraphBuilder {
    pub fn vertex(mut self, name: &str) -> Self {
        self.add_vertex(name);
        self
    }

    pub fn add_vertex(&mut self, name: &str) {
        if !self.index.contains_key(name) {
            self.index.insert(name.to_owned(), self.vertices.len());
            self.vertices.push(name.to_owned());
        }
    }

    pub fn edge(mut self, name: &str, src: &str, dst: &str, lambda0: i64, lambda1: i64) -> Self {
        self.add_edge(name, src, dst, lambda0, lambda1);
        self
    }

    pub fn add_edge(&mut self, name: &str, src: &str, dst: &str, lambda0: i64, lambda1: i64) {
        self.edges.push((name.to_owned(), src.to_owned(), dst.to_owned(), lambda0, lambda1));
    }

    pub fn build(self) -> Result<GbsGraph> {
        let lookup = |n: &str| {
            self.index.get(n).copied().map(VertexId).ok_or_else(|| Error::UnknownVertex(n.to_owned()))
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        for (name, s, d, l0, l1) in &self.edges {
            edges.push(Edge {
                name: name.clone(),
                src: lookup(s)?,
                dst: lookup(d)?,
                lambda0: *l0,
                lambda1: *l1,
            });
        }
        GbsGraph::new(self.vertices, edges)
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn validation_errors() {
        let two = GbsGraph::builder().vertex("v1").vertex("v2").build();
        assert_eq!(two, Err(Error::Disconnected));
        let zero = GbsGraph::builder().vertex("v").edge("e", "v", "v", 0, 2).build();
        assert_eq!(zero, Err(Error::ZeroLabel("e".into())));
        let unknown = GbsGraph::builder().vertex("v").edge("e", "v", "w", 1, 2).build();
        assert_eq!(unknown, Err(Error::UnknownVertex("w".into())));
        let dup = GbsGraph::builder().vertex("v").edge("v", "v", "v", 1, 2).build();
        assert_eq!(dup, Err(Error::DuplicateName("v".into())));
        assert_eq!(GbsGraph::builder().build(), Err(Error::EmptyGraph));
    }

    #[test]
    fn bs_convention() {
        let g = GbsGraph::bs(2, 3).unwrap();
        let e = g.edge(EdgeId(0));
        assert_eq!((e.lambda0, e.lambda1), (3, 2));
        assert!(g.is_cycle());
        assert_eq!(g.betti_number(), 1);
    }

    #[test]
    fn cycle_detection() {
        assert!(cycle(&[(2, 3), (3, 2)]).is_cycle());
        assert!(!theta([(2, 2); 3]).is_cycle());
        assert!(!path3().is_cycle());
        let c = cycle(&[(2, 3), (3, 5), (7, 1)]).cycle_traversal().unwrap();
        assert!(c.steps.iter().all(|&(_, d)| d == Direction::Forward));
        let g = cycle(&[(2, 3), (3, 5), (7, 1)]);
        c.validate(&g).unwrap();
        c.reversed().validate(&g).unwrap();
    }
}
