//! Finite quotients of GBS groups in holomorphs `C_N ⋊ Aut(C_N)`.
//!
//! Vertex generators are sent into the normal cyclic factor and stable
//! letters to pure automorphisms; [`verify_cert`] checks a certificate by
//! evaluating every relator and recomputing element orders.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::arith::{geometric_sum, inv_mod, is_prime, mul_mod, multiplicative_order, val};
use crate::gog::{canonical_presentation, epsilon_table, GbsGraph, Generator, Group, SpanningTree, VertexId};

mod construct;

pub use construct::{construct_balanced_quotient, construct_cycle_quotient, construct_nonisocratic_p_quotient};

/// `C_N ⋊ (Z/N)^×`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Holomorph {
    pub modulus: u64,
}

/// `(c, u)` with `(c₁, u₁)(c₂, u₂) = (c₁ + u₁c₂, u₁u₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(from = "[u64; 2]", into = "[u64; 2]")
)]
pub struct HolomorphElement {
    pub c: u64,
    pub u: u64,
}

impl From<[u64; 2]> for HolomorphElement {
    fn from([c, u]: [u64; 2]) -> Self {
        Self { c, u }
    }
}

impl From<HolomorphElement> for [u64; 2] {
    fn from(x: HolomorphElement) -> Self {
        [x.c, x.u]
    }
}

impl Holomorph {
    pub fn new(modulus: u64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        Self { modulus }
    }

    pub fn element(&self, c: i64, u: i64) -> HolomorphElement {
        let n = self.modulus;
        HolomorphElement { c: crate::arith::residue(c, n), u: crate::arith::residue(u, n) }
    }

    pub fn contains(&self, x: &HolomorphElement) -> bool {
        x.c < self.modulus && x.u < self.modulus && inv_mod(x.u, self.modulus).is_some()
    }

    /// `|(c, u)| = r · N / gcd(N, c(1 + u + … + u^{r−1}))` with `r = |u|`.
    pub fn order(&self, x: &HolomorphElement) -> u64 {
        let n = self.modulus;
        let r = multiplicative_order(x.u, n).expect("unit part is invertible");
        let s = mul_mod(x.c, geometric_sum(x.u, r, n), n);
        r * (n / num_integer::gcd(n, s))
    }
}

impl Group for Holomorph {
    type Elem = HolomorphElement;

    fn identity(&self) -> HolomorphElement {
        HolomorphElement { c: 0, u: 1 % self.modulus }
    }

    fn mul(&self, a: &HolomorphElement, b: &HolomorphElement) -> HolomorphElement {
        let n = self.modulus;
        HolomorphElement { c: (a.c + mul_mod(a.u, b.c, n)) % n, u: mul_mod(a.u, b.u, n) }
    }

    fn inv(&self, a: &HolomorphElement) -> HolomorphElement {
        let n = self.modulus;
        let ui = inv_mod(a.u, n).expect("unit part is invertible");
        HolomorphElement { c: (n - mul_mod(ui, a.c, n)) % n, u: ui }
    }
}

/// Which construction produced a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "snake_case"))]
pub enum CertKind {
    /// Cycle with isocratic products, `p` in the locus.
    Cycle,
    /// Balanced graph.
    Balanced,
    /// Onto `C_p`, for a non-isocratic cycle.
    Torsion,
}

/// The fibre whose image order a certificate is built to realize.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(rename_all = "snake_case")
)]
pub enum Target {
    Vertex(String),
    Edge(String),
}

/// A homomorphism from the canonical presentation into a holomorph.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuotientCert {
    pub kind: CertKind,
    pub modulus: u64,
    pub prime: u64,
    /// Exponent with `|image of target| = p^k`; `None` for torsion certificates.
    pub k: Option<u32>,
    pub target: Option<Target>,
    /// Generator name to image.
    pub images: BTreeMap<String, HolomorphElement>,
    /// Vertex name to image order.
    pub claimed_orders: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CertReport {
    pub valid: bool,
    /// First problem found, if any.
    pub failure: Option<String>,
    /// Computed orders of the vertex generator images.
    pub orders: BTreeMap<String, u64>,
    /// Computed order of the target fibre's image.
    pub target_order: Option<u64>,
    pub order_formula_checked: bool,
    pub order_formula_ok: bool,
}

/// Checks a certificate against the canonical presentation of `(g, tree)`.
///
/// For [`CertKind::Cycle`] and [`CertKind::Balanced`] it also checks the
/// order formula `ν_p|φ(a_y)| = max(0, l − ε(y))`, with `N = p^l` and `ε`
/// normalised to minimum zero, and that the target image has order `p^k`.
pub fn verify_cert(g: &GbsGraph, tree: &SpanningTree, cert: &QuotientCert) -> CertReport {
    let mut report = CertReport {
        valid: false,
        failure: None,
        orders: BTreeMap::new(),
        target_order: None,
        order_formula_checked: false,
        order_formula_ok: false,
    };
    let fail = |mut r: CertReport, msg: String| {
        r.failure = Some(msg);
        r
    };
    if cert.modulus == 0 {
        return fail(report, "modulus is zero".into());
    }
    let h = Holomorph::new(cert.modulus);
    let pres = canonical_presentation(g, tree);
    if pres.names.len() != cert.images.len() || pres.names.iter().any(|n| !cert.images.contains_key(n)) {
        return fail(report, "generator set does not match the presentation".into());
    }
    if let Some((name, _)) = cert.images.iter().find(|(_, x)| !h.contains(x)) {
        return fail(report, alloc::format!("image of `{name}` is not an element of the holomorph"));
    }
    let image = |x: Generator| cert.images[g.generator_name(x)];
    if let Some(r) = pres.first_failure(&h, image) {
        let msg = alloc::format!("relator `{}` is not killed", r.display(g));
        return fail(report, msg);
    }
    for v in g.vertex_ids() {
        report.orders.insert(g.vertex_name(v).into(), h.order(&image(Generator::Vertex(v))));
    }
    if report.orders != cert.claimed_orders {
        return fail(report, "claimed orders differ from the computed ones".into());
    }
    if let Some(t) = &cert.target {
        let elem = match t {
            Target::Vertex(name) => g.vertex_id(name).map(|v| image(Generator::Vertex(v))),
            Target::Edge(name) => g.edge_id(name).map(|e| {
                let edge = g.edge(e);
                h.pow(&image(Generator::Vertex(edge.dst)), edge.lambda1)
            }),
        };
        match elem {
            Ok(x) => report.target_order = Some(h.order(&x)),
            Err(e) => return fail(report, alloc::format!("{e}")),
        }
    }
    report.valid = true;
    if cert.kind != CertKind::Torsion {
        report.order_formula_checked = true;
        report.order_formula_ok = order_formula_holds(g, tree, cert, &report);
    }
    report
}

fn order_formula_holds(g: &GbsGraph, tree: &SpanningTree, cert: &QuotientCert, report: &CertReport) -> bool {
    let p = cert.prime;
    if !is_prime(p) {
        return false;
    }
    let l = val(cert.modulus as i64, p);
    if p.checked_pow(l) != Some(cert.modulus) {
        return false;
    }
    let Ok(eps) = epsilon_table(g, tree, p, VertexId(0)) else { return false };
    let eps = eps.normalized();
    let vertex_ok = g.vertex_ids().all(|v| {
        let order = report.orders[g.vertex_name(v)];
        let expected = (i64::from(l) - eps.value(v)).max(0) as u32;
        p.checked_pow(expected) == Some(order)
    });
    let target_ok = match (cert.k, report.target_order) {
        (Some(k), Some(order)) => p.checked_pow(k) == Some(order),
        _ => false,
    };
    vertex_ok && target_ok
}

/// Vertex names paired with their image orders, in vertex order.
pub fn claimed_orders(g: &GbsGraph, h: &Holomorph, images: &BTreeMap<String, HolomorphElement>) -> BTreeMap<String, u64> {
    g.vertex_ids().map(|v| (String::from(g.vertex_name(v)), h.order(&images[g.vertex_name(v)]))).collect()
}

/// The images of the vertex generators' residues, in vertex order; used by
/// the oracle agreement checks.
pub fn vertex_residues(g: &GbsGraph, cert: &QuotientCert) -> Vec<u64> {
    g.vertex_ids().map(|v| cert.images[g.vertex_name(v)].c).collect()
}
