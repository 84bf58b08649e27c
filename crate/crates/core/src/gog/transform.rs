use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{bridges, Edge, EdgeId, GbsGraph, VertexId};

/// Collapses bridges with an inclusion index equal to one until none remain.
///
/// For `e = (src → dst)` with `|λ₀(e)| = 1` we have `a_src = a_dst^{λ₁·λ₀}`,
/// so `src` is merged into `dst` and every other label `μ` sitting at `src`
/// becomes `μ·λ₁·sign(λ₀)`. The case `|λ₁(e)| = 1` is symmetric. Only bridges
/// are collapsed; the fundamental group is unchanged.
pub fn reduce(g: &GbsGraph) -> GbsGraph {
    let mut g = g.clone();
    loop {
        let candidate = bridges(&g)
            .into_iter()
            .find(|&e| g.edge(e).index0() == 1 || g.edge(e).index1() == 1);
        match candidate {
            Some(e) => g = collapse(&g, e),
            None => return g,
        }
    }
}

fn collapse(g: &GbsGraph, e: EdgeId) -> GbsGraph {
    let edge = g.edge(e);
    let (gone, kept, factor) = if edge.index0() == 1 {
        (edge.src, edge.dst, edge.lambda1 * edge.lambda0.signum())
    } else {
        (edge.dst, edge.src, edge.lambda0 * edge.lambda1.signum())
    };
    let renumber = |v: VertexId| {
        let v = if v == gone { kept } else { v };
        VertexId(if v.0 > gone.0 { v.0 - 1 } else { v.0 })
    };
    let vertices: Vec<String> = g
        .vertex_names()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != gone.0)
        .map(|(_, n)| n.clone())
        .collect();
    let edges = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != e.0)
        .map(|(_, f)| Edge {
            name: f.name.clone(),
            src: renumber(f.src),
            dst: renumber(f.dst),
            lambda0: if f.src == gone { f.lambda0 * factor } else { f.lambda0 },
            lambda1: if f.dst == gone { f.lambda1 * factor } else { f.lambda1 },
        })
        .collect();
    GbsGraph::new(vertices, edges).expect("collapsing a bridge keeps the graph valid")
}

/// Replaces every loop `(λ₀, λ₁)` at `v` by a fresh vertex `v'` and edges
/// `v → v'` labelled `(λ₀, 1)` and `v' → v` labelled `(1, λ₁)`.
pub fn subdivide_loops(g: &GbsGraph) -> GbsGraph {
    let mut vertices: Vec<String> = g.vertex_names().to_vec();
    let mut edges = Vec::with_capacity(g.edge_count());
    let mut taken: BTreeSet<String> = BTreeSet::new();
    for e in g.edges() {
        if !e.is_loop() {
            edges.push(e.clone());
            continue;
        }
        let mid = g.fresh_name(&format!("{}.mid", e.name), &taken);
        taken.insert(mid.clone());
        let out_name = g.fresh_name(&format!("{}.out", e.name), &taken);
        taken.insert(out_name.clone());
        let mid_id = VertexId(vertices.len());
        vertices.push(mid);
        edges.push(Edge { name: out_name, src: e.src, dst: mid_id, lambda0: e.lambda0, lambda1: 1 });
        // The returning half keeps the loop's name, so its stable letter is
        // still called the same in the canonical presentation.
        edges.push(Edge { name: e.name.clone(), src: mid_id, dst: e.dst, lambda0: 1, lambda1: e.lambda1 });
    }
    GbsGraph::new(vertices, edges).expect("subdivision keeps the graph valid")
}
