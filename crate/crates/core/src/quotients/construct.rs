use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{claimed_orders, CertKind, Holomorph, HolomorphElement, QuotientCert, Target};
use crate::arith::{inv_mod, is_prime, isocratic_factored, locus_factored, mul_mod, p_free_part, residue, val};
use crate::gog::{
    augmentation_factorization, balance_potential, epsilon_table, GbsGraph, SpanningTree, VertexId,
};
use crate::{Error, Result};

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Quotient of a cycle with isocratic augmentation products, for `p` in their
/// isocracy locus, in which the target fibre has image of order `p^k`.
pub fn construct_cycle_quotient(
    g: &GbsGraph,
    tree: &SpanningTree,
    p: u64,
    target: &Target,
    k: u32,
) -> Result<QuotientCert> {
    check_prime(p)?;
    let c = g.cycle_traversal()?;
    let (n, m) = augmentation_factorization(g, &c);
    if !isocratic_factored(&n, &m) {
        return Err(Error::Precondition("augmentation products are not isocratic".into()));
    }
    let locus = locus_factored(&n, &m);
    if !locus.contains(p) {
        return Err(Error::Precondition(format!("{p} is not in the isocracy locus {locus}")));
    }
    fibre_quotient(g, tree, p, target, k, CertKind::Cycle)
}

/// Quotient of a balanced graph in which vertex `v` has image of order `p^k`.
pub fn construct_balanced_quotient(
    g: &GbsGraph,
    tree: &SpanningTree,
    v: VertexId,
    p: u64,
    k: u32,
) -> Result<QuotientCert> {
    check_prime(p)?;
    if v.0 >= g.vertex_count() {
        return Err(Error::UnknownVertex(format!("#{}", v.0)));
    }
    if !balance_potential(g, tree, VertexId(0)).balanced {
        return Err(Error::Precondition("graph is not balanced".into()));
    }
    let target = Target::Vertex(g.vertex_name(v).into());
    fibre_quotient(g, tree, p, &target, k, CertKind::Balanced)
}

/// Shared construction for graphs on which `ε_p` closes up around every
/// cycle. With `w` an `ε`-minimal base and `ε(w) = 0`, a vertex `y` maps to
/// `(p^{ε(y)}·c_y, 1)` in `C_N ⋊ Aut(C_N)`, `N = p^l`, where `c_w = 1` and
/// `c_y = α_y⁻¹·α_z·c_z` along the tree edge from its parent `z`. Here `α` is
/// the signed part of the label prime to `p` at either end. A stable letter
/// maps to `(0, u)` with `u·λ₀·x_{d₀} ≡ λ₁·x_{d₁}`.
fn fibre_quotient(
    g: &GbsGraph,
    tree: &SpanningTree,
    p: u64,
    target: &Target,
    k: u32,
    kind: CertKind,
) -> Result<QuotientCert> {
    let eps0 = epsilon_table(g, tree, p, VertexId(0))?;
    let w = eps0.argmin();
    let eps = epsilon_table(g, tree, p, w)?;
    debug_assert!(eps.min() == 0);

    let (anchor, extra) = match target {
        Target::Vertex(name) => (g.vertex_id(name)?, 0),
        Target::Edge(name) => {
            let e = g.edge(g.edge_id(name)?);
            (e.src, val(e.lambda0, p))
        }
    };
    let l = k + eps.value(anchor) as u32 + extra;
    let modulus = p.checked_pow(l).filter(|&n| n < 1 << 62).ok_or(Error::ModulusOverflow)?;
    let h = Holomorph::new(modulus);

    // Units c_y, along the tree from w.
    let mut unit = alloc::vec![1u64; g.vertex_count()];
    for step in tree.rooted(g, w) {
        let Some((e, z)) = step.parent else { continue };
        let edge = g.edge(e);
        let (lz, ly) = if edge.src == z { (edge.lambda0, edge.lambda1) } else { (edge.lambda1, edge.lambda0) };
        let ay = inv_mod(residue(p_free_part(ly, p), modulus), modulus).expect("prime to p");
        let az = residue(p_free_part(lz, p), modulus);
        unit[step.vertex.0] = mul_mod(mul_mod(ay, az, modulus), unit[z.0], modulus);
    }
    let x: Vec<u64> = g
        .vertex_ids()
        .map(|y| {
            let e = eps.value(y) as u32;
            match p.checked_pow(e) {
                Some(pe) if e < l => mul_mod(pe % modulus, unit[y.0], modulus),
                _ => 0,
            }
        })
        .collect();

    let mut images = BTreeMap::new();
    for y in g.vertex_ids() {
        images.insert(String::from(g.vertex_name(y)), HolomorphElement { c: x[y.0], u: 1 % modulus });
    }
    for e in tree.non_tree_edges(g) {
        let edge = g.edge(e);
        let e0 = i64::from(val(edge.lambda0, p)) + eps.value(edge.src);
        let e1 = i64::from(val(edge.lambda1, p)) + eps.value(edge.dst);
        if e0 != e1 {
            return Err(Error::Precondition(format!(
                "p-adic valuations do not close up around the cycle through `{}`",
                edge.name
            )));
        }
        let u = if e0 >= i64::from(l) {
            1 % modulus
        } else {
            let a0 = mul_mod(residue(p_free_part(edge.lambda0, p), modulus), unit[edge.src.0], modulus);
            let a1 = mul_mod(residue(p_free_part(edge.lambda1, p), modulus), unit[edge.dst.0], modulus);
            mul_mod(a1, inv_mod(a0, modulus).expect("prime to p"), modulus)
        };
        images.insert(edge.name.clone(), HolomorphElement { c: 0, u });
    }
    let claimed = claimed_orders(g, &h, &images);
    Ok(QuotientCert {
        kind,
        modulus,
        prime: p,
        k: Some(k),
        target: Some(target.clone()),
        images,
        claimed_orders: claimed,
    })
}

/// Quotient onto `C_p` of a cycle whose augmentation products are both
/// divisible by `p` with different valuations.
///
/// Cutting the cycle at the edges where `p` divides an inclusion index leaves
/// paths. On a path `P` entered and left through edges whose index at the
/// `P` end is divisible by `p`, the relators inside `P` propagate a nonzero
/// residue and the two boundary relators are killed; everything outside `P`,
/// stable letters included, maps to zero.
pub fn construct_nonisocratic_p_quotient(g: &GbsGraph, tree: &SpanningTree, p: u64) -> Result<QuotientCert> {
    check_prime(p)?;
    let c = g.cycle_traversal()?;
    let (n, m) = augmentation_factorization(g, &c);
    let (vn, vm) = (n.exponent(p), m.exponent(p));
    if vn == 0 || vm == 0 || vn == vm {
        return Err(Error::Precondition(format!(
            "augmentation products have valuations ({vn}, {vm}) at {p}; need both nonzero and unequal"
        )));
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
    let pi = p as i64;
    let cut = |i: usize| labels[i].0 % pi == 0 || labels[i].1 % pi == 0;
    // A cut step i entering the next path at its head with p | head label,
    // such that the next cut step leaves with p | tail label.
    let start = (0..s)
        .find(|&i| {
            if !cut(i) || labels[i].1 % pi != 0 {
                return false;
            }
            let j = (1..=s).map(|d| (i + d) % s).find(|&j| cut(j)).expect("i itself is cut");
            labels[j].0 % pi == 0
        })
        .ok_or_else(|| Error::Precondition("no admissible path found".into()))?;

    let mut x = alloc::vec![0u64; g.vertex_count()];
    let mut i = (start + 1) % s;
    x[verts[i].0] = 1;
    while !cut(i) {
        let (a, b) = labels[i];
        let next = verts[(i + 1) % s];
        let bi = inv_mod(residue(b, p), p).expect("prime to p");
        x[next.0] = mul_mod(mul_mod(residue(a, p), x[verts[i].0], p), bi, p);
        i = (i + 1) % s;
    }

    let h = Holomorph::new(p);
    let mut images = BTreeMap::new();
    for y in g.vertex_ids() {
        images.insert(String::from(g.vertex_name(y)), HolomorphElement { c: x[y.0], u: 1 });
    }
    for e in tree.non_tree_edges(g) {
        images.insert(g.edge(e).name.clone(), HolomorphElement { c: 0, u: 1 });
    }
    let claimed = claimed_orders(g, &h, &images);
    Ok(QuotientCert { kind: CertKind::Torsion, modulus: p, prime: p, k: None, target: None, images, claimed_orders: claimed })
}
