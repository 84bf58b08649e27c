//! Brute-force homomorphism searches into small finite groups, reporting which
//! orders the vertex generators can take.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::arith::{inv_mod, is_prime, mul_mod, multiplicative_order, residue, val, Factorization, PrimeSet};
use crate::gog::{augmentation_factorization, GbsGraph};
use crate::{Error, Result};

mod perm;

pub use perm::{all_perms, class_representatives, enumerate_perm_quotients, perm_order, Perm, Symmetric, MAX_DEGREE};

/// How far a search went.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "snake_case"))]
pub enum SearchBound {
    /// Symmetric groups of degree at most this.
    Degree(u64),
    /// Holomorphs `C_N ⋊ (Z/N)^×` with `N` at most this.
    ModulusCap(u64),
}

/// Achieved image orders per generator name.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrderSpectrum {
    pub orders: BTreeMap<String, BTreeSet<u64>>,
    pub bound: SearchBound,
    pub exhaustive: bool,
    /// Number of homomorphisms found.
    pub homomorphisms: u64,
}

impl OrderSpectrum {
    pub fn orders_of(&self, name: &str) -> Option<&BTreeSet<u64>> {
        self.orders.get(name)
    }

    /// Largest group order that the search bound allows.
    pub fn group_order_bound(&self) -> u64 {
        match self.bound {
            SearchBound::Degree(d) => (1..=d).product(),
            SearchBound::ModulusCap(n) => n,
        }
    }
}

/// A solution `a ↦ (x, 1)`, `t ↦ (0, u)` in `C_N ⋊ (Z/N)^×`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MetacyclicSolution {
    pub modulus: u64,
    pub x: u64,
    pub u: u64,
}

/// Whether `u·m·x ≡ n·x (mod N)` with `u` a unit.
pub fn is_metacyclic_solution(n: i64, m: i64, s: MetacyclicSolution) -> bool {
    let big = s.modulus;
    if big == 0 || s.x >= big || s.u >= big || inv_mod(s.u, big).is_none() {
        return false;
    }
    let lhs = mul_mod(mul_mod(s.u, residue(m, big), big), s.x, big);
    lhs == mul_mod(residue(n, big), s.x, big)
}

/// All solutions for a fixed modulus.
pub fn metacyclic_solutions(n: i64, m: i64, modulus: u64) -> Vec<MetacyclicSolution> {
    let big = modulus;
    let (nr, mr) = (residue(n, big), residue(m, big));
    let units: Vec<u64> = (0..big).filter(|&u| num_integer::gcd(u, big) == 1).collect();
    let mut out = Vec::new();
    for x in 0..big {
        let (mx, nx) = (mul_mod(mr, x, big), mul_mod(nr, x, big));
        for &u in &units {
            if mul_mod(u, mx, big) == nx {
                out.push(MetacyclicSolution { modulus, x, u });
            }
        }
    }
    out
}

/// Exhaustive search over `N ≤ cap` for the loop `t a^m t⁻¹ = a^n`; records
/// the additive order of `x` under `a` and the order of `u` under `t`.
pub fn enumerate_metacyclic_quotients(n: i64, m: i64, cap: u64) -> Result<OrderSpectrum> {
    if n == 0 || m == 0 {
        return Err(Error::ZeroArgument);
    }
    let mut a = BTreeSet::new();
    let mut t = BTreeSet::new();
    let mut count = 0u64;
    for big in 1..=cap {
        for s in metacyclic_solutions(n, m, big) {
            count += 1;
            a.insert(big / num_integer::gcd(big, s.x));
            t.insert(multiplicative_order(s.u, big).expect("unit"));
        }
    }
    let orders = [(String::from("a"), a), (String::from("t"), t)].into_iter().collect();
    Ok(OrderSpectrum { orders, bound: SearchBound::ModulusCap(cap), exhaustive: true, homomorphisms: count })
}

/// Outcome of comparing a spectrum with a predicted prime set.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PredictionReport {
    /// No achieved order has a prime factor outside the prediction, torsion
    /// primes within their bound aside.
    pub sound: bool,
    /// `(generator, order)` pairs that break soundness.
    pub violations: Vec<(String, u64)>,
    /// Prime powers `p^k ≤ bound`, `p` predicted, dividing some achieved order.
    pub realized: Vec<u64>,
    /// Primes at which the cycle is non-isocratic with both valuations positive.
    pub torsion_primes: Vec<u64>,
    /// Achieved orders divisible by a torsion prime.
    pub torsion_witnesses: Vec<(String, u64)>,
    /// Every achieved order has `ν_p < max(ν_p n, ν_p m)` at each torsion prime.
    pub torsion_bound_ok: bool,
}

/// Checks the vertex generator orders of an exhaustive spectrum against
/// `predicted`. On a cycle with non-isocratic products the primes dividing
/// both products to different powers are allowed, provided `ν_p` of the order
/// stays below the larger of the two valuations.
pub fn check_topology_prediction(
    g: &GbsGraph,
    spectrum: &OrderSpectrum,
    predicted: &PrimeSet,
    bound: u64,
) -> Result<PredictionReport> {
    if !spectrum.exhaustive {
        return Err(Error::Precondition("spectrum is not exhaustive".into()));
    }
    let mut torsion: BTreeMap<u64, u32> = BTreeMap::new();
    if g.is_cycle() {
        let (n, m) = augmentation_factorization(g, &g.cycle_traversal()?);
        for p in n.primes().filter(|&p| m.exponent(p) > 0) {
            let (a, b) = (n.exponent(p), m.exponent(p));
            if a != b {
                torsion.insert(p, a.max(b));
            }
        }
    }
    let mut vertex_orders: Vec<(String, u64)> = Vec::new();
    for name in g.vertex_names() {
        let set = spectrum
            .orders_of(name)
            .ok_or_else(|| Error::Precondition(alloc::format!("spectrum has no orders for `{name}`")))?;
        vertex_orders.extend(set.iter().map(|&o| (name.clone(), o)));
    }

    let mut report = PredictionReport {
        sound: true,
        violations: Vec::new(),
        realized: Vec::new(),
        torsion_primes: torsion.keys().copied().collect(),
        torsion_witnesses: Vec::new(),
        torsion_bound_ok: true,
    };
    for (name, o) in &vertex_orders {
        let f = Factorization::of_u64(*o)?;
        let mut ok = true;
        for p in f.primes() {
            match torsion.get(&p) {
                Some(&cap) => {
                    if !report.torsion_witnesses.contains(&(name.clone(), *o)) {
                        report.torsion_witnesses.push((name.clone(), *o));
                    }
                    if f.exponent(p) >= cap {
                        report.torsion_bound_ok = false;
                        ok = false;
                    }
                }
                None if !predicted.contains(p) => ok = false,
                None => {}
            }
        }
        if !ok {
            report.sound = false;
            report.violations.push((name.clone(), *o));
        }
    }
    for q in 2..=bound {
        if !is_prime(q) || !predicted.contains(q) {
            continue;
        }
        let mut pk = q;
        loop {
            let k = val(pk as i64, q);
            if vertex_orders.iter().any(|(_, o)| val(*o as i64, q) >= k) {
                report.realized.push(pk);
            }
            match pk.checked_mul(q) {
                Some(next) if next <= bound => pk = next,
                _ => break,
            }
        }
    }
    report.realized.sort_unstable();
    Ok(report)
}
