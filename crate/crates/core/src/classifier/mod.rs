//! Decides cohomological separability of a GBS group and the cohomological
//! dimension of its profinite completion, attaching certificates.
//!
//! The graph is first reduced. A single cycle falls into one of three cases
//! according to its augmentation products `n`, `m`:
//!
//! 1. `gcd(n, m) = 1` or `|n| = |m|`: separable, `cd Γ̂ = 2`;
//! 2. isocratic, otherwise: not separable, `cd Γ̂ = 2`;
//! 3. not isocratic: not separable, `Γ̂` has torsion.
//!
//! Any other graph is separable iff it is balanced.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::arith::{is_prime, locus_factored, non_isocratic_primes};
use crate::fpcohom::{
    build_isocratic_witness, build_leaf_witness, cohomology_abstract, cohomology_profinite, licensed_topology,
    trivial_module, CohomologyReport, FpModule, ModuleTable,
};
use crate::gog::{
    augmentation_factorization, augmentation_products, balance_potential, cycle_basis, reduce, GbsGraph,
    OrientedCycle, SpanningTree, VertexId,
};
use crate::quotients::{
    construct_balanced_quotient, construct_cycle_quotient, construct_nonisocratic_p_quotient, verify_cert,
    QuotientCert, Target,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Case {
    /// A cycle with coprime products, or products of equal absolute value.
    CycleCoprime,
    /// Not a cycle; every cycle has `|n| = |m|`.
    Balanced,
    /// A cycle with isocratic products that are neither coprime nor equal.
    IsocraticNotCoprime,
    /// A cycle with non-isocratic products.
    NonIsocratic,
    /// Not a cycle, and some cycle has `|n| ≠ |m|`.
    Unbalanced,
    /// Reduces to a single vertex; the group is `Z`.
    TreeDegenerate,
}

impl Case {
    pub fn is_separable(self) -> bool {
        matches!(self, Case::CycleCoprime | Case::Balanced | Case::TreeDegenerate)
    }
}

/// A cohomological dimension; serialized as a number or as `"infinite"` /
/// `"unknown"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(into = "DimensionRepr", try_from = "DimensionRepr")
)]
pub enum Dimension {
    Finite(u32),
    Infinite,
    Unknown,
}

#[cfg(feature = "serde")]
#[derive(serde::Serialize, serde::Deserialize)]
#[serde(untagged)]
enum DimensionRepr {
    Finite(u32),
    Word(String),
}

#[cfg(feature = "serde")]
impl From<Dimension> for DimensionRepr {
    fn from(d: Dimension) -> Self {
        match d {
            Dimension::Finite(n) => DimensionRepr::Finite(n),
            other => DimensionRepr::Word(other.to_string()),
        }
    }
}

#[cfg(feature = "serde")]
impl TryFrom<DimensionRepr> for Dimension {
    type Error = String;

    fn try_from(r: DimensionRepr) -> core::result::Result<Self, String> {
        match r {
            DimensionRepr::Finite(n) => Ok(Dimension::Finite(n)),
            DimensionRepr::Word(w) if w == "infinite" => Ok(Dimension::Infinite),
            DimensionRepr::Word(w) if w == "unknown" => Ok(Dimension::Unknown),
            DimensionRepr::Word(w) => Err(format!("unknown dimension `{w}`")),
        }
    }
}

impl core::fmt::Display for Dimension {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Dimension::Finite(n) => write!(f, "{n}"),
            Dimension::Infinite => f.write_str("infinite"),
            Dimension::Unknown => f.write_str("unknown"),
        }
    }
}

/// What a witness module is attached to show.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "snake_case"))]
pub enum WitnessClaim {
    /// `h2 ≥ 1` for the group and `h2 = 0` for its completion.
    NotSeparable,
    /// `h2 ≥ 1` for the completion.
    ProfiniteDimensionTwo,
    /// `h2 ≥ 1` for the group; the completion side is not computed.
    AbstractNonvanishing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModuleWitness {
    pub claim: WitnessClaim,
    pub module: ModuleTable,
    pub abstract_report: CohomologyReport,
    pub profinite_report: Option<CohomologyReport>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "snake_case"))]
pub enum Certificate {
    Quotient(QuotientCert),
    Module(Box<ModuleWitness>),
    /// A cycle with `|n| ≠ |m|`; products as decimal strings.
    Unbalanced { cycle: OrientedCycle, n: String, m: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Verdict {
    pub separable: bool,
    pub case: Case,
    /// 1, 2 or 3 when the reduced graph is a cycle.
    pub cycle_case: Option<u8>,
    pub cd_abstract: u32,
    pub cd_profinite: Dimension,
    /// The reduced graph; certificates refer to it and to `tree`.
    pub graph: GbsGraph,
    pub tree: SpanningTree,
    /// Augmentation products of the cycle, for cycles.
    pub products: Option<(String, String)>,
    pub certificates: Vec<Certificate>,
    pub notes: Vec<String>,
}

/// Classifies `BS(n, m) = ⟨a, t | t a^m t⁻¹ = a^n⟩`.
pub fn classify_bs(n: i64, m: i64) -> Result<Verdict> {
    if n == 0 || m == 0 {
        return Err(Error::ZeroArgument);
    }
    classify_gbs(&GbsGraph::bs(n, m)?)
}

/// Classifies the GBS group of `g`.
pub fn classify_gbs(g: &GbsGraph) -> Result<Verdict> {
    let r = reduce(g);
    let tree = SpanningTree::bfs(&r);
    let mut v = Verdict {
        separable: false,
        case: Case::TreeDegenerate,
        cycle_case: None,
        cd_abstract: 2,
        cd_profinite: Dimension::Unknown,
        graph: r,
        tree,
        products: None,
        certificates: Vec::new(),
        notes: Vec::new(),
    };
    if v.graph.edge_count() == 0 {
        v.separable = true;
        v.cd_abstract = 1;
        v.cd_profinite = Dimension::Finite(1);
        v.notes.push("reduces to a single vertex, so the group is infinite cyclic".into());
        return Ok(v);
    }
    if v.graph.is_cycle() {
        classify_cycle(&mut v)?;
    } else {
        classify_other(&mut v)?;
    }
    v.separable = v.case.is_separable();
    Ok(v)
}

fn small_primes() -> impl Iterator<Item = u64> {
    (2..).filter(|&p| is_prime(p))
}

fn classify_cycle(v: &mut Verdict) -> Result<()> {
    let (g, tree) = (&v.graph, &v.tree);
    let c = g.cycle_traversal()?;
    let (nb, mb) = augmentation_products(g, &c);
    let (n, m) = augmentation_factorization(g, &c);
    v.products = Some((nb.to_string(), mb.to_string()));
    let coprime = n.primes().all(|p| m.exponent(p) == 0);
    let bad = non_isocratic_primes(&n, &m);
    let anchor = Target::Vertex(g.vertex_name(VertexId(0)).into());

    if coprime || n == m {
        v.case = Case::CycleCoprime;
        v.cycle_case = Some(1);
        v.cd_profinite = Dimension::Finite(2);
        v.notes.push(if coprime {
            format!("augmentation products ({nb}, {mb}) are coprime")
        } else {
            format!("augmentation products ({nb}, {mb}) have equal absolute value")
        });
        let locus = locus_factored(&n, &m);
        if let Some(p) = small_primes().find(|&p| locus.contains(p)) {
            push_quotient(v, construct_cycle_quotient(&v.graph, &v.tree, p, &anchor, 2));
        }
    } else if bad.is_empty() {
        v.case = Case::IsocraticNotCoprime;
        v.cycle_case = Some(2);
        v.cd_profinite = Dimension::Finite(2);
        let p = small_primes().find(|&p| (n.exponent(p) == 0) != (m.exponent(p) == 0)).expect("|n| ≠ |m|");
        let q = small_primes().find(|&q| n.exponent(q) > 0 && m.exponent(q) > 0).expect("not coprime");
        v.notes.push(format!(
            "augmentation products ({nb}, {mb}) are isocratic but not coprime; {p} divides exactly one of them and {q} divides both"
        ));
        let topology = licensed_topology(g)?;
        v.notes.push(format!("the induced topology on the fibres is pro-({topology})"));
        let w = build_isocratic_witness(g, p, q)?;
        let wit = module_witness(g, tree, &w, WitnessClaim::NotSeparable, Some(&topology))?;
        v.certificates.push(Certificate::Module(Box::new(wit)));
        let w = build_isocratic_witness(g, q, q)?;
        let wit = module_witness(g, tree, &w, WitnessClaim::ProfiniteDimensionTwo, Some(&topology))?;
        if wit.profinite_report.as_ref().is_some_and(|r| r.h2 >= 1) {
            v.certificates.push(Certificate::Module(Box::new(wit)));
        }
        let locus = locus_factored(&n, &m);
        if let Some(p) = small_primes().find(|&p| locus.contains(p)) {
            push_quotient(v, construct_cycle_quotient(&v.graph, &v.tree, p, &anchor, 2));
        }
    } else {
        v.case = Case::NonIsocratic;
        v.cycle_case = Some(3);
        v.cd_profinite = Dimension::Infinite;
        let p = bad[0];
        v.notes.push(format!(
            "augmentation products ({nb}, {mb}) are not isocratic: {p} divides them to the powers {} and {}",
            n.exponent(p),
            m.exponent(p)
        ));
        v.notes.push(format!("the completion contains {p}-torsion, so its cohomological dimension is infinite"));
        push_quotient(v, construct_nonisocratic_p_quotient(&v.graph, &v.tree, p));
    }
    Ok(())
}

fn classify_other(v: &mut Verdict) -> Result<()> {
    let balance = balance_potential(&v.graph, &v.tree, VertexId(0));
    if balance.balanced {
        v.case = Case::Balanced;
        v.cd_profinite = Dimension::Finite(2);
        v.notes.push("every cycle has augmentation products of equal absolute value".into());
        v.notes.push("the group induces the full profinite topology on its vertex groups".into());
        for y in v.graph.vertex_ids().collect::<Vec<_>>() {
            push_quotient(v, construct_balanced_quotient(&v.graph, &v.tree, y, 2, 1));
        }
        return Ok(());
    }
    v.case = Case::Unbalanced;
    let (g, tree) = (&v.graph, &v.tree);
    let cycle = balance.witness.expect("unbalanced graphs carry a witness cycle");
    let (n, m) = augmentation_products(g, &cycle);
    v.notes.push(format!("the cycle {} has augmentation products ({n}, {m})", cycle.display(g)));
    v.certificates.push(Certificate::Unbalanced { cycle, n: n.to_string(), m: m.to_string() });
    for c in cycle_basis(g, tree) {
        let (nf, mf) = augmentation_factorization(g, &c);
        let bad = non_isocratic_primes(&nf, &mf);
        if let Some(&p) = bad.first() {
            v.notes.push(format!(
                "the cycle {} is not isocratic at {p}, a source of torsion in finite quotients",
                c.display(g)
            ));
        }
    }
    v.notes.push("the topology induced on the vertex groups is not the full profinite one".into());

    let module = if g.betti_number() == 1 {
        small_primes().take(16).find_map(|q| {
            let w = build_leaf_witness(g, q).ok()?;
            (cohomology_abstract(g, tree, &w).ok()?.h2 >= 1).then_some(w)
        })
    } else {
        let labels: Vec<i64> = g.edges().iter().flat_map(|e| [e.lambda0, e.lambda1]).collect();
        let q = small_primes().find(|&q| labels.iter().all(|&l| l % q as i64 != 0)).expect("finitely many labels");
        Some(trivial_module(g, q, 1)?)
    };
    match module {
        Some(w) => {
            let wit = module_witness(g, tree, &w, WitnessClaim::AbstractNonvanishing, None)?;
            v.certificates.push(Certificate::Module(Box::new(wit)));
        }
        None => v.notes.push("no witness module found among the small primes tried".into()),
    }
    v.notes.push("the cohomological dimension of the completion is not determined here".into());
    Ok(())
}

fn push_quotient(v: &mut Verdict, cert: Result<QuotientCert>) {
    match cert {
        Ok(c) => v.certificates.push(Certificate::Quotient(c)),
        Err(e) => v.notes.push(format!("sample quotient unavailable: {e}")),
    }
}

fn module_witness(
    g: &GbsGraph,
    tree: &SpanningTree,
    m: &FpModule,
    claim: WitnessClaim,
    topology: Option<&crate::arith::PrimeSet>,
) -> Result<ModuleWitness> {
    let abstract_report = cohomology_abstract(g, tree, m)?;
    let profinite_report = topology.map(|s| cohomology_profinite(g, tree, m, s)).transpose()?;
    Ok(ModuleWitness { claim, module: ModuleTable::from_module(g, m), abstract_report, profinite_report })
}

/// Re-checks every certificate in a verdict and its internal consistency.
/// Returns the list of problems found, empty when the verdict is sound.
pub fn audit(v: &Verdict) -> Vec<String> {
    let mut problems = Vec::new();
    let (g, tree) = (&v.graph, &v.tree);
    if v.separable != v.case.is_separable() {
        problems.push("separability disagrees with the case".into());
    }
    if (v.cd_profinite == Dimension::Infinite) != (v.case == Case::NonIsocratic) {
        problems.push("profinite dimension is infinite exactly for non-isocratic cycles".into());
    }
    for (i, c) in v.certificates.iter().enumerate() {
        match c {
            Certificate::Quotient(q) => {
                let r = verify_cert(g, tree, q);
                if !r.valid {
                    problems.push(format!("certificate {i}: {}", r.failure.unwrap_or_default()));
                } else if r.order_formula_checked && !r.order_formula_ok {
                    problems.push(format!("certificate {i}: order formula fails"));
                }
            }
            Certificate::Module(w) => {
                if let Err(e) = audit_module(g, tree, w) {
                    problems.push(format!("certificate {i}: {e}"));
                }
            }
            Certificate::Unbalanced { cycle, n, m } => {
                let ok = cycle.validate(g).is_ok() && {
                    let (a, b) = augmentation_products(g, cycle);
                    a.to_string() == *n && b.to_string() == *m && a.magnitude() != b.magnitude()
                };
                if !ok {
                    problems.push(format!("certificate {i}: cycle is not an unbalance witness"));
                }
            }
        }
    }
    problems
}

fn audit_module(g: &GbsGraph, tree: &SpanningTree, w: &ModuleWitness) -> Result<()> {
    let m = w.module.to_module(g)?;
    let abs = cohomology_abstract(g, tree, &m)?;
    if abs != w.abstract_report {
        return Err(Error::Precondition("abstract report does not match recomputation".into()));
    }
    let prof = match &w.profinite_report {
        Some(r) => {
            let again = cohomology_profinite(g, tree, &m, &r.support)?;
            if &again != r {
                return Err(Error::Precondition("profinite report does not match recomputation".into()));
            }
            Some(again)
        }
        None => None,
    };
    let ok = match w.claim {
        WitnessClaim::NotSeparable => abs.h2 >= 1 && prof.is_some_and(|r| r.h2 == 0),
        WitnessClaim::ProfiniteDimensionTwo => prof.is_some_and(|r| r.h2 >= 1),
        WitnessClaim::AbstractNonvanishing => abs.h2 >= 1,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!("claim {:?} does not hold", w.claim)))
    }
}

#[cfg(test)]
mod tests;
