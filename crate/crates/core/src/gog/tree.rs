use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec::Vec;

use super::{Direction, EdgeId, GbsGraph, OrientedCycle, VertexId};
use crate::{Error, Result};

/// A spanning tree, stored as its edge set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(transparent))]
pub struct SpanningTree {
    edges: BTreeSet<EdgeId>,
}

/// One vertex of a tree rooted at some base vertex, in BFS order.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TreeStep {
    pub vertex: VertexId,
    /// Edge to the parent and the parent itself; `None` at the root.
    pub parent: Option<(EdgeId, VertexId)>,
}

impl SpanningTree {
    /// Validates that `edges` spans `g` without cycles.
    pub fn new(g: &GbsGraph, edges: impl IntoIterator<Item = EdgeId>) -> Result<Self> {
        let edges: BTreeSet<EdgeId> = edges.into_iter().collect();
        if edges.len() + 1 != g.vertex_count() || edges.iter().any(|e| e.0 >= g.edge_count()) {
            return Err(Error::NotSpanningTree);
        }
        let mut uf = UnionFind::new(g.vertex_count());
        for &e in &edges {
            let edge = g.edge(e);
            if !uf.union(edge.src.0, edge.dst.0) {
                return Err(Error::NotSpanningTree);
            }
        }
        Ok(Self { edges })
    }

    /// BFS tree from vertex 0, scanning incident edges in id order.
    pub fn bfs(g: &GbsGraph) -> Self {
        let adj = g.adjacency();
        let mut seen = alloc::vec![false; g.vertex_count()];
        let mut edges = BTreeSet::new();
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &(e, w) in &adj[v] {
                if !seen[w.0] {
                    seen[w.0] = true;
                    edges.insert(e);
                    queue.push_back(w.0);
                }
            }
        }
        Self { edges }
    }

    /// Every spanning tree of `g`, by subset enumeration. Only for small graphs.
    pub fn enumerate(g: &GbsGraph) -> Vec<Self> {
        let k = g.vertex_count() - 1;
        let ids: Vec<EdgeId> = g.edge_ids().filter(|&e| !g.edge(e).is_loop()).collect();
        let mut out = Vec::new();
        let mut pick = Vec::with_capacity(k);
        fn rec(
            g: &GbsGraph,
            ids: &[EdgeId],
            k: usize,
            from: usize,
            pick: &mut Vec<EdgeId>,
            out: &mut Vec<SpanningTree>,
        ) {
            if pick.len() == k {
                if let Ok(t) = SpanningTree::new(g, pick.iter().copied()) {
                    out.push(t);
                }
                return;
            }
            for i in from..ids.len() {
                pick.push(ids[i]);
                rec(g, ids, k, i + 1, pick, out);
                pick.pop();
            }
        }
        rec(g, &ids, k, 0, &mut pick, &mut out);
        out
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().copied()
    }

    pub fn non_tree_edges<'a>(&'a self, g: &'a GbsGraph) -> impl Iterator<Item = EdgeId> + 'a {
        g.edge_ids().filter(move |e| !self.contains(*e))
    }

    /// BFS order from `root` over tree edges.
    pub(crate) fn rooted(&self, g: &GbsGraph, root: VertexId) -> Vec<TreeStep> {
        let adj = g.adjacency();
        let mut seen = alloc::vec![false; g.vertex_count()];
        let mut order = alloc::vec![TreeStep { vertex: root, parent: None }];
        seen[root.0] = true;
        let mut i = 0;
        while i < order.len() {
            let v = order[i].vertex;
            for &(e, w) in &adj[v.0] {
                if self.contains(e) && !seen[w.0] {
                    seen[w.0] = true;
                    order.push(TreeStep { vertex: w, parent: Some((e, v)) });
                }
            }
            i += 1;
        }
        order
    }

    /// The tree geodesic from `from` to `to` as directed steps.
    pub fn path(&self, g: &GbsGraph, from: VertexId, to: VertexId) -> Vec<(EdgeId, Direction)> {
        let order = self.rooted(g, from);
        let mut parent = alloc::vec![None; g.vertex_count()];
        for step in &order {
            parent[step.vertex.0] = step.parent;
        }
        let mut rev = Vec::new();
        let mut at = to;
        while let Some((e, p)) = parent[at.0] {
            let dir = if g.edge(e).src == p { Direction::Forward } else { Direction::Backward };
            rev.push((e, dir));
            at = p;
        }
        rev.reverse();
        rev
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

/// The cut edges of `g`: exactly the edges lying in every spanning tree.
pub fn bridges(g: &GbsGraph) -> BTreeSet<EdgeId> {
    // Lowlink DFS keyed on edge ids, so parallel edges are never bridges.
    let adj = g.adjacency();
    let n = g.vertex_count();
    let mut disc = alloc::vec![usize::MAX; n];
    let mut low = alloc::vec![0; n];
    let mut out = BTreeSet::new();
    let mut time = 0;
    // (vertex, edge used to enter, next adjacency index)
    let mut stack: Vec<(usize, Option<EdgeId>, usize)> = alloc::vec![(0, None, 0)];
    disc[0] = 0;
    low[0] = 0;
    while let Some(top) = stack.len().checked_sub(1) {
        let (v, via, next) = stack[top];
        if next < adj[v].len() {
            let (e, w) = adj[v][next];
            stack[top].2 += 1;
            if Some(e) == via {
                continue;
            }
            if disc[w.0] == usize::MAX {
                time += 1;
                disc[w.0] = time;
                low[w.0] = time;
                stack.push((w.0, Some(e), 0));
            } else {
                low[v] = low[v].min(disc[w.0]);
            }
        } else {
            stack.pop();
            if let (Some(e), Some(&(parent, _, _))) = (via, stack.last()) {
                low[parent] = low[parent].min(low[v]);
                if low[v] > disc[parent] {
                    out.insert(e);
                }
            }
        }
    }
    out
}

/// One fundamental cycle per non-tree edge `e`: `e` traversed forward, then
/// the tree geodesic from `dst(e)` back to `src(e)`.
pub fn cycle_basis(g: &GbsGraph, tree: &SpanningTree) -> Vec<OrientedCycle> {
    tree.non_tree_edges(g)
        .map(|e| {
            let edge = g.edge(e);
            let mut steps = alloc::vec![(e, Direction::Forward)];
            steps.extend(tree.path(g, edge.dst, edge.src));
            OrientedCycle { steps }
        })
        .collect()
}
