//! Cohomology of GBS groups with coefficients in finite `F_p`-modules.
//!
//! Every vertex and edge group is infinite cyclic, so for a generator `ω`
//! we have `H⁰ = ker(ω − 1)` and `H¹ = M/(ω − 1)M`, and `H² = 0`. The
//! Mayer–Vietoris sequence of the graph of groups
//!
//! ```text
//! 0 → H⁰(Γ) → ⊕ᵥ H⁰(Gᵥ) → ⊕ₑ H⁰(Gₑ) → H¹(Γ) → ⊕ᵥ H¹(Gᵥ) → ⊕ₑ H¹(Gₑ) → H²(Γ) → 0
//! ```
//!
//! then reduces everything to ranks of two explicit matrices `ℏ⁰`, `ℏ¹`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::arith::{is_prime, locus_factored, PrimeSet};
use crate::gog::{
    augmentation_factorization, balance_potential, canonical_presentation, Generator, GbsGraph, Group,
    SpanningTree, VertexId,
};
use crate::{Error, Result};

mod matrix;
mod table;
mod witness;

pub use matrix::{FpMatrix, Rref};
pub use table::ModuleTable;
pub use witness::{build_isocratic_witness, build_leaf_witness, trivial_module};

/// A finite `F_p[Γ]`-module `F_p^d`, given by the action of each generator of
/// the canonical presentation. Generators without an entry act trivially.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpModule {
    prime: u64,
    dim: usize,
    actions: BTreeMap<Generator, FpMatrix>,
}

impl FpModule {
    /// Checks the prime, dimensions and invertibility. Well-definedness with
    /// respect to a presentation is checked by [`FpModule::check`].
    pub fn new(g: &GbsGraph, prime: u64, dim: usize, actions: BTreeMap<Generator, FpMatrix>) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        for (&x, a) in &actions {
            let known = match x {
                Generator::Vertex(v) => v.0 < g.vertex_count(),
                Generator::Stable(e) => e.0 < g.edge_count(),
            };
            if !known {
                return Err(Error::Precondition(format!("generator {x:?} is not in the graph")));
            }
            let name = g.generator_name(x);
            if a.rows() != dim || a.cols() != dim || a.prime() != prime {
                return Err(Error::Dimension(format!("action of `{name}` is not a {dim}x{dim} matrix over F_{prime}")));
            }
            if a.det() == 0 {
                return Err(Error::NotInvertible(name.into()));
            }
        }
        let actions = actions.into_iter().filter(|(_, a)| !a.is_identity()).collect();
        Ok(Self { prime, dim, actions })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, x: Generator) -> FpMatrix {
        self.actions.get(&x).cloned().unwrap_or_else(|| FpMatrix::identity(self.prime, self.dim))
    }

    /// The generators acting nontrivially.
    pub fn actions(&self) -> &BTreeMap<Generator, FpMatrix> {
        &self.actions
    }

    /// Verifies that every relator of the canonical presentation acts as the
    /// identity, and that stable letters of tree edges act trivially.
    pub fn check(&self, g: &GbsGraph, tree: &SpanningTree) -> Result<()> {
        for x in self.actions.keys() {
            if let Generator::Stable(e) = *x {
                if tree.contains(e) {
                    return Err(Error::IllDefinedModule(format!(
                        "{} (tree edge with a nontrivial stable letter)",
                        g.edge(e).name
                    )));
                }
            }
        }
        let pres = canonical_presentation(g, tree);
        let gl = Gl { p: self.prime, d: self.dim };
        match pres.first_failure(&gl, |x| self.action(x)) {
            Some(r) => Err(Error::IllDefinedModule(r.display(g))),
            None => Ok(()),
        }
    }
}

/// `GL_d(F_p)` as a [`Group`].
#[derive(Debug, Clone, Copy)]
pub struct Gl {
    pub p: u64,
    pub d: usize,
}

impl Group for Gl {
    type Elem = FpMatrix;

    fn identity(&self) -> FpMatrix {
        FpMatrix::identity(self.p, self.d)
    }

    fn mul(&self, a: &FpMatrix, b: &FpMatrix) -> FpMatrix {
        a * b
    }

    fn inv(&self, a: &FpMatrix) -> FpMatrix {
        a.inverse().expect("module actions are invertible")
    }
}

/// A quotient `M/W` with an explicit complement: `projection ∘ section = 1`
/// and `ker(projection) = W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    pub dim: usize,
    /// `dim × d`.
    pub projection: FpMatrix,
    /// `d × dim`.
    pub section: FpMatrix,
}

/// `M/AM`. The complement is spanned by the standard vectors at the non-pivot
/// coordinates of the reduced row echelon basis of `AM`.
pub fn quotient_by_image(a: &FpMatrix) -> Quotient {
    let p = a.prime();
    let d = a.rows();
    let Rref { matrix: basis, pivots } = a.transpose().rref();
    let free: Vec<usize> = (0..d).filter(|i| !pivots.contains(i)).collect();
    let mut projection = FpMatrix::zeros(p, free.len(), d);
    let mut section = FpMatrix::zeros(p, d, free.len());
    for (k, &f) in free.iter().enumerate() {
        projection.set(k, f, 1);
        section.set(f, k, 1);
        for (r, &j) in pivots.iter().enumerate() {
            projection.set(k, j, (p - basis.get(r, f)) % p);
        }
    }
    Quotient { dim: free.len(), projection, section }
}

/// `H¹(⟨ω⟩, M) = M/(ω − 1)M`.
pub fn coinvariants(omega: &FpMatrix) -> Quotient {
    quotient_by_image(&(omega - &FpMatrix::identity(omega.prime(), omega.rows())))
}

/// `H⁰(⟨ω⟩, M) = ker(ω − 1)`, as the columns of a matrix.
pub fn fixed_space(omega: &FpMatrix) -> FpMatrix {
    (omega - &FpMatrix::identity(omega.prime(), omega.rows())).kernel()
}

/// `Σ_{0≤i<λ} a^i` for `λ > 0` and `−Σ_{λ≤i<0} a^i` for `λ < 0`, so that
/// `norm · (a − 1) = a^λ − 1`. Uses `O(log |λ|)` products.
pub fn norm_element(a: &FpMatrix, lambda: i64) -> Result<FpMatrix> {
    if lambda == 0 {
        return Err(Error::ZeroArgument);
    }
    let p = a.prime();
    let n = a.rows();
    let k = lambda.unsigned_abs();
    // (Σ_{i<j} a^i, a^j), doubling j bit by bit.
    let mut sum = FpMatrix::zeros(p, n, n);
    let mut power = FpMatrix::identity(p, n);
    for bit in (0..64 - k.leading_zeros()).rev() {
        sum = &sum + &(&power * &sum);
        power = &power * &power;
        if (k >> bit) & 1 == 1 {
            sum = &sum + &power;
            power = &power * a;
        }
    }
    if lambda > 0 {
        Ok(sum)
    } else {
        let inv_power = power.inverse().ok_or_else(|| Error::NotInvertible("norm base".into()))?;
        Ok(-&(&inv_power * &sum))
    }
}

/// Whether the profinite side is being computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "lowercase"))]
pub enum Side {
    Abstract,
    Profinite,
}

/// `(dim H⁰, dim H¹)` of one vertex or edge group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FibreDims {
    pub h0: usize,
    pub h1: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CohomologyReport {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
    pub side: Side,
    /// Primes of the topology induced on the fibres; all primes on the
    /// abstract side.
    pub support: PrimeSet,
    pub prime: u64,
    pub vertices: Vec<FibreDims>,
    pub edges: Vec<FibreDims>,
    pub rank_hbar0: usize,
    pub rank_hbar1: usize,
}

impl CohomologyReport {
    pub fn euler_characteristic(&self) -> i64 {
        self.h0 as i64 - self.h1 as i64 + self.h2 as i64
    }

    /// `Σᵥ (h⁰ᵥ − h¹ᵥ) − Σₑ (h⁰ₑ − h¹ₑ)`.
    pub fn fibre_euler_characteristic(&self) -> i64 {
        let chi = |f: &FibreDims| f.h0 as i64 - f.h1 as i64;
        self.vertices.iter().map(chi).sum::<i64>() - self.edges.iter().map(chi).sum::<i64>()
    }

    pub fn euler_ok(&self) -> bool {
        self.euler_characteristic() == self.fibre_euler_characteristic()
    }
}

/// The pieces of the Mayer–Vietoris computation.
struct Fibres {
    vertex_h1: Vec<Quotient>,
    edge_h1: Vec<Quotient>,
    vertex_h0: Vec<FpMatrix>,
    edge_h0: Vec<FpMatrix>,
}

fn fibres(g: &GbsGraph, m: &FpModule) -> Result<Fibres> {
    let a: Vec<FpMatrix> = g.vertex_ids().map(|v| m.action(Generator::Vertex(v))).collect();
    let mut edge_h1 = Vec::with_capacity(g.edge_count());
    let mut edge_h0 = Vec::with_capacity(g.edge_count());
    for e in g.edges() {
        let b = a[e.dst.0].pow(e.lambda1).expect("actions are invertible");
        edge_h1.push(coinvariants(&b));
        edge_h0.push(fixed_space(&b));
    }
    Ok(Fibres {
        vertex_h1: a.iter().map(coinvariants).collect(),
        vertex_h0: a.iter().map(fixed_space).collect(),
        edge_h1,
        edge_h0,
    })
}

fn offsets(sizes: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut out = alloc::vec![0];
    for s in sizes {
        out.push(out.last().unwrap() + s);
    }
    out
}

fn stable_action(m: &FpModule, tree: &SpanningTree, e: crate::gog::EdgeId) -> FpMatrix {
    if tree.contains(e) {
        FpMatrix::identity(m.prime, m.dim)
    } else {
        m.action(Generator::Stable(e))
    }
}

fn hbar1(g: &GbsGraph, tree: &SpanningTree, m: &FpModule, f: &Fibres) -> Result<FpMatrix> {
    let rows = offsets(f.edge_h1.iter().map(|q| q.dim));
    let cols = offsets(f.vertex_h1.iter().map(|q| q.dim));
    let mut h = FpMatrix::zeros(m.prime, *rows.last().unwrap(), *cols.last().unwrap());
    for e in g.edge_ids() {
        let edge = g.edge(e);
        let qe = &f.edge_h1[e.0];
        let t = stable_action(m, tree, e);
        let n1 = norm_element(&m.action(Generator::Vertex(edge.dst)), edge.lambda1)?;
        let n0 = norm_element(&m.action(Generator::Vertex(edge.src)), edge.lambda0)?;
        let to_dst = &(&qe.projection * &n1) * &f.vertex_h1[edge.dst.0].section;
        let to_src = &(&(&qe.projection * &t) * &n0) * &f.vertex_h1[edge.src.0].section;
        let mut add = |v: VertexId, block: &FpMatrix| {
            for i in 0..block.rows() {
                for j in 0..block.cols() {
                    let (r, c) = (rows[e.0] + i, cols[v.0] + j);
                    let x = (h.get(r, c) + block.get(i, j)) % m.prime;
                    h.set(r, c, x);
                }
            }
        };
        add(edge.dst, &to_dst);
        add(edge.src, &-&to_src);
    }
    Ok(h)
}

/// `ℏ⁰(m) = (m_{d₁(e)} − t_e·m_{d₀(e)})ₑ`, landing in `⊕ₑ M`; `H⁰(Gₑ)` sits
/// inside `M`, so the rank is the same as into `⊕ₑ H⁰(Gₑ)`.
fn hbar0(g: &GbsGraph, tree: &SpanningTree, m: &FpModule, f: &Fibres) -> FpMatrix {
    let d = m.dim;
    let cols = offsets(f.vertex_h0.iter().map(FpMatrix::cols));
    let mut h = FpMatrix::zeros(m.prime, d * g.edge_count(), *cols.last().unwrap());
    for e in g.edge_ids() {
        let edge = g.edge(e);
        let t = stable_action(m, tree, e);
        let to_dst = f.vertex_h0[edge.dst.0].clone();
        let to_src = -&(&t * &f.vertex_h0[edge.src.0]);
        for (v, block) in [(edge.dst, to_dst), (edge.src, to_src)] {
            for i in 0..block.rows() {
                for j in 0..block.cols() {
                    let (r, c) = (e.0 * d + i, cols[v.0] + j);
                    let x = (h.get(r, c) + block.get(i, j)) % m.prime;
                    h.set(r, c, x);
                }
            }
        }
    }
    h
}

/// The degree-one Mayer–Vietoris map `ℏ: ⊕ᵥ M/(aᵥ−1)M → ⊕ₑ M/(bₑ−1)M`. Its
/// `(e, v)` block is `N(a_{d₁}, λ₁)` if `v = d₁(e)`, minus
/// `t_e·N(a_{d₀}, λ₀)` if `v = d₀(e)`, in the complement bases of
/// [`coinvariants`].
pub fn assemble_hbar(g: &GbsGraph, tree: &SpanningTree, m: &FpModule) -> Result<FpMatrix> {
    m.check(g, tree)?;
    let f = fibres(g, m)?;
    hbar1(g, tree, m, &f)
}

pub fn cohomology_abstract(g: &GbsGraph, tree: &SpanningTree, m: &FpModule) -> Result<CohomologyReport> {
    m.check(g, tree)?;
    let f = fibres(g, m)?;
    compute(g, tree, m, f, Side::Abstract, PrimeSet::all())
}

fn compute(
    g: &GbsGraph,
    tree: &SpanningTree,
    m: &FpModule,
    f: Fibres,
    side: Side,
    support: PrimeSet,
) -> Result<CohomologyReport> {
    let rank1 = hbar1(g, tree, m, &f)?.rank();
    let rank0 = hbar0(g, tree, m, &f).rank();
    let dims = |h0: &[FpMatrix], h1: &[Quotient]| -> Vec<FibreDims> {
        h0.iter().zip(h1).map(|(k, q)| FibreDims { h0: k.cols(), h1: q.dim }).collect()
    };
    let vertices = dims(&f.vertex_h0, &f.vertex_h1);
    let edges = dims(&f.edge_h0, &f.edge_h1);
    let sum = |fs: &[FibreDims], pick: fn(&FibreDims) -> usize| fs.iter().map(pick).sum::<usize>();
    let h0 = sum(&vertices, |x| x.h0) - rank0;
    let h1 = (sum(&edges, |x| x.h0) - rank0) + (sum(&vertices, |x| x.h1) - rank1);
    let h2 = sum(&edges, |x| x.h1) - rank1;
    Ok(CohomologyReport {
        h0,
        h1,
        h2,
        side,
        support,
        prime: m.prime,
        vertices,
        edges,
        rank_hbar0: rank0,
        rank_hbar1: rank1,
    })
}

/// Dimension of the vectors fixed by every generator, computed directly.
pub fn invariants_dim(g: &GbsGraph, tree: &SpanningTree, m: &FpModule) -> usize {
    let gens = canonical_presentation(g, tree).generators;
    let d = m.dim;
    let mut stacked = FpMatrix::zeros(m.prime, d * gens.len(), d);
    let id = FpMatrix::identity(m.prime, d);
    for (i, &x) in gens.iter().enumerate() {
        stacked.put(i * d, 0, &(&m.action(x) - &id));
    }
    stacked.kernel().cols()
}

/// The topology that the group induces on every vertex and edge group, in
/// the two situations where it is known: all primes for a balanced graph, and
/// the isocracy locus of the augmentation products for a cycle whose products
/// are isocratic.
pub fn licensed_topology(g: &GbsGraph) -> Result<PrimeSet> {
    let tree = SpanningTree::bfs(g);
    if balance_potential(g, &tree, VertexId(0)).balanced {
        return Ok(PrimeSet::all());
    }
    if g.is_cycle() {
        let c = g.cycle_traversal()?;
        let (n, m) = augmentation_factorization(g, &c);
        if crate::arith::isocratic_factored(&n, &m) {
            return Ok(locus_factored(&n, &m));
        }
        return Err(Error::RegimeNotCovered("profinite side has torsion; cd infinite".into()));
    }
    Err(Error::RegimeNotCovered(
        "the topology induced on the fibres of an unbalanced graph that is not a cycle is not determined".into(),
    ))
}

/// Cohomology of the profinite completion, assembled from the closures of the
/// fibres. `topology` must be the one returned by [`licensed_topology`].
///
/// The closure of a fibre is a procyclic pro-`S` group. When the module prime
/// lies outside `S` its `H¹` vanishes; `H⁰` is still the fixed space, since
/// the fibre is dense in its closure. Otherwise the closure has the same
/// cohomology as the fibre.
pub fn cohomology_profinite(
    g: &GbsGraph,
    tree: &SpanningTree,
    m: &FpModule,
    topology: &PrimeSet,
) -> Result<CohomologyReport> {
    let licensed = licensed_topology(g)?;
    if &licensed != topology {
        return Err(Error::RegimeNotCovered(format!(
            "requested topology `{topology}` differs from the induced one `{licensed}`"
        )));
    }
    m.check(g, tree)?;
    let mut f = fibres(g, m)?;
    if !licensed.contains(m.prime) {
        let empty = |d: usize| Quotient {
            dim: 0,
            projection: FpMatrix::zeros(m.prime, 0, d),
            section: FpMatrix::zeros(m.prime, d, 0),
        };
        f.vertex_h1.iter_mut().for_each(|q| *q = empty(m.dim));
        f.edge_h1.iter_mut().for_each(|q| *q = empty(m.dim));
    }
    compute(g, tree, m, f, Side::Profinite, licensed)
}

/// Renders a module action table with generator names, for reports.
pub fn describe_module(g: &GbsGraph, m: &FpModule) -> String {
    let mut s = format!("F_{}^{}", m.prime, m.dim);
    for (&x, a) in &m.actions {
        s.push_str(&format!("; {} -> {:?}", g.generator_name(x), a.to_rows()));
    }
    s
}
