//! Cohomological separability for generalised Baumslag–Solitar (GBS) groups.
//!
//! A GBS group is the fundamental group of a finite graph of groups whose
//! vertex and edge groups are all infinite cyclic. It is described by a
//! connected graph whose edges carry a pair of nonzero integer labels, the
//! exponents by which the edge group generator embeds into the vertex groups
//! at either end.
//!
//! The crate decides whether such a group has separable cohomology (Serre's
//! goodness) and what the cohomological dimension of its profinite completion
//! is, and backs every verdict with certificates that can be re-checked
//! independently:
//!
//! * [`quotients`] builds explicit homomorphisms into holomorphs of cyclic
//!   groups `C_N ⋊ Aut(C_N)` and verifies them relator by relator;
//! * [`fpcohom`] computes `H⁰`, `H¹`, `H²` with coefficients in finite
//!   `F_p`-modules through the Mayer–Vietoris sequence of the graph of groups,
//!   and constructs witness modules;
//! * [`oracle`] enumerates homomorphisms into small symmetric and metacyclic
//!   groups as brute-force ground truth;
//! * [`classifier`] assembles all of the above into a [`classifier::Verdict`].
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![deny(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod arith;
pub mod classifier;
mod error;
pub mod fpcohom;
pub mod gog;
pub mod oracle;
pub mod quotients;

pub use error::{Error, Result};
