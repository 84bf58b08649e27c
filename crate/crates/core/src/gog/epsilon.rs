use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{cycle_basis, GbsGraph, OrientedCycle, SpanningTree, VertexId};
use crate::arith::{val, Factorization};
use crate::{Error, Result};

/// Augmentation products `(n, m)` of an oriented cycle: the products of the
/// inclusion indices at the tail resp. head of each traversed edge. An edge
/// traversed backwards contributes its indices swapped.
pub fn augmentation_products(g: &GbsGraph, c: &OrientedCycle) -> (BigInt, BigInt) {
    let mut n = BigInt::one();
    let mut m = BigInt::one();
    for &(e, d) in &c.steps {
        let (_, _, tail, head) = g.edge(e).oriented(d);
        n *= tail.unsigned_abs();
        m *= head.unsigned_abs();
    }
    (n, m)
}

/// [`augmentation_products`] in factored form, computed label by label.
pub fn augmentation_factorization(g: &GbsGraph, c: &OrientedCycle) -> (Factorization, Factorization) {
    let mut n = Factorization::default();
    let mut m = Factorization::default();
    for &(e, d) in &c.steps {
        let (_, _, tail, head) = g.edge(e).oriented(d);
        n = n.mul(&Factorization::of_i64(tail).expect("labels are nonzero"));
        m = m.mul(&Factorization::of_i64(head).expect("labels are nonzero"));
    }
    (n, m)
}

/// The power-counting function `ε_{p,w}` on the vertices of a spanning tree.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EpsilonTable {
    pub prime: u64,
    pub base: VertexId,
    pub tree: SpanningTree,
    /// Indexed by vertex id.
    pub values: Vec<i64>,
}

impl EpsilonTable {
    pub fn value(&self, v: VertexId) -> i64 {
        self.values[v.0]
    }

    /// The first vertex attaining the minimum.
    pub fn argmin(&self) -> VertexId {
        let min = self.min();
        VertexId(self.values.iter().position(|&x| x == min).expect("nonempty"))
    }

    pub fn min(&self) -> i64 {
        *self.values.iter().min().expect("nonempty")
    }

    /// The same table rebased so that its minimum is zero.
    pub fn normalized(&self) -> Self {
        let min = self.min();
        Self {
            prime: self.prime,
            base: self.argmin(),
            tree: self.tree.clone(),
            values: self.values.iter().map(|x| x - min).collect(),
        }
    }
}

/// `ε_{p,w}(v)`: the sum over the tree geodesic from `w` to `v`, each edge
/// oriented away from `w`, of `ν_p(index at the near end) − ν_p(index at the
/// far end)`.
pub fn epsilon_table(g: &GbsGraph, tree: &SpanningTree, p: u64, w: VertexId) -> Result<EpsilonTable> {
    if w.0 >= g.vertex_count() {
        return Err(Error::UnknownVertex(alloc::format!("#{}", w.0)));
    }
    if !crate::arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut values = alloc::vec![0i64; g.vertex_count()];
    for step in tree.rooted(g, w) {
        if let Some((e, parent)) = step.parent {
            let edge = g.edge(e);
            let (near, far) = if edge.src == parent {
                (edge.lambda0, edge.lambda1)
            } else {
                (edge.lambda1, edge.lambda0)
            };
            values[step.vertex.0] = values[parent.0] + i64::from(val(near, p)) - i64::from(val(far, p));
        }
    }
    Ok(EpsilonTable { prime: p, base: w, tree: tree.clone(), values })
}

/// Result of [`balance_potential`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceReport {
    /// Indexed by vertex id; positive rationals with `potential[w] = 1`.
    pub potential: Vec<BigRational>,
    pub balanced: bool,
    /// A fundamental cycle with `|n| ≠ |m|`, when unbalanced.
    pub witness: Option<OrientedCycle>,
}

/// Multiplicative potential along the tree: crossing an edge from its `src`
/// to its `dst` multiplies by `|λ₁|/|λ₀|`. The graph is balanced iff every
/// non-tree edge closes up, which is `|n(Υ)| = |m(Υ)|` on every fundamental
/// cycle and hence on the whole cycle space.
pub fn balance_potential(g: &GbsGraph, tree: &SpanningTree, w: VertexId) -> BalanceReport {
    let ratio = |num: u64, den: u64| BigRational::new(BigInt::from(num), BigInt::from(den));
    let mut potential = alloc::vec![BigRational::one(); g.vertex_count()];
    for step in tree.rooted(g, w) {
        if let Some((e, parent)) = step.parent {
            let edge = g.edge(e);
            let r = if edge.src == parent {
                ratio(edge.index1(), edge.index0())
            } else {
                ratio(edge.index0(), edge.index1())
            };
            potential[step.vertex.0] = &potential[parent.0] * r;
        }
    }
    let offending = tree.non_tree_edges(g).find(|&e| {
        let edge = g.edge(e);
        &potential[edge.src.0] * ratio(edge.index1(), edge.index0()) != potential[edge.dst.0]
    });
    let witness = offending.map(|e| {
        cycle_basis(g, tree)
            .into_iter()
            .find(|c| c.steps[0].0 == e)
            .expect("every non-tree edge has a fundamental cycle")
    });
    BalanceReport { potential, balanced: witness.is_none(), witness }
}
