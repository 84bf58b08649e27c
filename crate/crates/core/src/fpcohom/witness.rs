use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::{FpMatrix, FpModule};
use crate::arith::{inv_mod, is_prime, isocratic_factored, residue, val};
use crate::gog::{augmentation_factorization, GbsGraph, Generator, SpanningTree};
use crate::{Error, Result};

/// Largest module dimension the constructors will build.
const MAX_DIM: u64 = 256;

/// `F_p^d` with every generator acting trivially.
pub fn trivial_module(g: &GbsGraph, p: u64, d: usize) -> Result<FpModule> {
    FpModule::new(g, p, d, BTreeMap::new())
}

/// The matrix of `e_i ↦ e_{i+c mod q}`.
fn shift(p: u64, q: usize, c: usize) -> FpMatrix {
    let sigma: Vec<usize> = (0..q).map(|i| (i + c) % q).collect();
    FpMatrix::permutation(p, &sigma)
}

/// Witness module for a cycle with isocratic, non-coprime augmentation
/// products: `M = F_p^q` with `α` the cyclic shift of the basis.
///
/// Along the cycle, let `W` be the set of vertices minimising `ε_q`. A vertex
/// `v ∈ W` acts by `α^{c_v}` and every other generator trivially. Each edge
/// relator then reads `c_{d₀}·λ₀·[d₀ ∈ W] ≡ c_{d₁}·λ₁·[d₁ ∈ W] (mod q)`. It
/// is vacuous unless both ends lie in `W` with both labels prime to `q`; in
/// that case `c` is propagated by `c_{d₁} = c_{d₀}·λ₀·λ₁⁻¹`. Since `q`
/// divides the products, at least one edge is vacuous and the propagation is
/// along a path. For `q = 2` every `c_v` is one.
pub fn build_isocratic_witness(g: &GbsGraph, p: u64, q: u64) -> Result<FpModule> {
    if !g.is_cycle() {
        return Err(Error::GraphShape("isocratic witness needs a single cycle".into()));
    }
    for r in [p, q] {
        if !is_prime(r) {
            return Err(Error::NotPrime(r));
        }
    }
    let c = g.cycle_traversal()?;
    let (n, m) = augmentation_factorization(g, &c);
    if !isocratic_factored(&n, &m) {
        return Err(Error::Precondition("augmentation products are not isocratic".into()));
    }
    if n.exponent(p) == 0 && m.exponent(p) == 0 {
        return Err(Error::Precondition(format!("{p} divides neither augmentation product")));
    }
    if n.exponent(q) == 0 || m.exponent(q) == 0 {
        return Err(Error::Precondition(format!("{q} does not divide the gcd of the augmentation products")));
    }
    if q > MAX_DIM {
        return Err(Error::Precondition(format!("module dimension {q} exceeds {MAX_DIM}")));
    }

    let s = c.len();
    let verts = c.vertices(g);
    let labels: Vec<(i64, i64)> = c
        .steps
        .iter()
        .map(|&(e, d)| {
            let (_, _, x, y) = g.edge(e).oriented(d);
            (x, y)
        })
        .collect();
    let mut eps = alloc::vec![0i64; s];
    for i in 0..s - 1 {
        let (x, y) = labels[i];
        eps[i + 1] = eps[i] + i64::from(val(x, q)) - i64::from(val(y, q));
    }
    let min = *eps.iter().min().expect("cycle is nonempty");
    let in_w: Vec<bool> = eps.iter().map(|&x| x == min).collect();
    let constrained = |i: usize| {
        let (x, y) = labels[i];
        in_w[i] && in_w[(i + 1) % s] && x % q as i64 != 0 && y % q as i64 != 0
    };
    let free = (0..s).find(|&i| !constrained(i)).expect("q divides the products");

    let mut exps = alloc::vec![1u64; s];
    for k in 1..s {
        let i = (free + k) % s;
        let next = (i + 1) % s;
        if constrained(i) {
            let (x, y) = labels[i];
            let y_inv = inv_mod(residue(y, q), q).expect("label prime to q");
            exps[next] = exps[i] * residue(x, q) % q * y_inv % q;
        }
    }

    let mut actions = BTreeMap::new();
    for i in (0..s).filter(|&i| in_w[i]) {
        actions.insert(Generator::Vertex(verts[i]), shift(p, q as usize, exps[i] as usize));
    }
    let module = FpModule::new(g, p, q as usize, actions)?;
    module.check(g, &SpanningTree::bfs(g))?;
    Ok(module)
}

/// Witness module for a graph with exactly one cycle and a leaf `ℓ`: with
/// `j` the inclusion index at the leaf end of its edge, `M = F_q^j`, the
/// leaf generator cycles the basis and everything else acts trivially.
pub fn build_leaf_witness(g: &GbsGraph, q: u64) -> Result<FpModule> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if g.betti_number() != 1 {
        return Err(Error::GraphShape(format!(
            "leaf witness needs exactly one cycle, found {}",
            g.betti_number()
        )));
    }
    let leaf = g
        .vertex_ids()
        .find(|&v| g.degree(v) == 1)
        .ok_or_else(|| Error::GraphShape("graph has no leaf".into()))?;
    let e = g.edge_ids().find(|&e| g.edge(e).src == leaf || g.edge(e).dst == leaf).expect("leaf has an edge");
    let edge = g.edge(e);
    let j = if edge.dst == leaf { edge.index1() } else { edge.index0() };
    if j == 1 {
        return Err(Error::Precondition(format!(
            "index at the leaf end of `{}` is 1; reduce the graph first",
            edge.name
        )));
    }
    if j > MAX_DIM {
        return Err(Error::Precondition(format!("module dimension {j} exceeds {MAX_DIM}")));
    }
    let j = j as usize;
    let actions = BTreeMap::from([(Generator::Vertex(leaf), shift(q, j, 1))]);
    let module = FpModule::new(g, q, j, actions)?;
    module.check(g, &SpanningTree::bfs(g))?;
    Ok(module)
}
