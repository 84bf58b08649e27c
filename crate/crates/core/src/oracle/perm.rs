use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::{OrderSpectrum, SearchBound};
use crate::gog::{Group, Presentation};
use crate::{Error, Result};

/// Largest supported degree.
pub const MAX_DEGREE: usize = 7;

/// `S_d` acting on `{0, …, d−1}`; `(σ·τ)(i) = σ(τ(i))`.
#[derive(Debug, Clone, Copy)]
pub struct Symmetric(pub usize);

pub type Perm = Vec<u8>;

impl Group for Symmetric {
    type Elem = Perm;

    fn identity(&self) -> Perm {
        (0..self.0 as u8).collect()
    }

    fn mul(&self, a: &Perm, b: &Perm) -> Perm {
        b.iter().map(|&i| a[i as usize]).collect()
    }

    fn inv(&self, a: &Perm) -> Perm {
        let mut out = alloc::vec![0u8; a.len()];
        for (i, &j) in a.iter().enumerate() {
            out[j as usize] = i as u8;
        }
        out
    }
}

/// Order of a permutation: the lcm of its cycle lengths.
pub fn perm_order(a: &[u8]) -> u64 {
    let mut seen = alloc::vec![false; a.len()];
    let mut order = 1u64;
    for start in 0..a.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = a[i] as usize;
            len += 1;
        }
        order = num_integer::lcm(order, len);
    }
    order
}

/// Every permutation of degree `d`, in lexicographic order.
pub fn all_perms(d: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur: Perm = (0..d as u8).collect();
    loop {
        out.push(cur.clone());
        // next permutation
        let Some(i) = (1..d).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..d).rev().find(|&j| cur[j] > cur[i - 1]).expect("exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// One permutation per cycle type, i.e. per conjugacy class of `S_d`.
pub fn class_representatives(d: usize) -> Vec<Perm> {
    fn partitions(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=max.min(n)).rev() {
            cur.push(k);
            partitions(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut parts = Vec::new();
    partitions(d, d, &mut Vec::new(), &mut parts);
    parts
        .into_iter()
        .map(|part| {
            let mut perm: Perm = (0..d as u8).collect();
            let mut at = 0;
            for len in part {
                for i in 0..len {
                    perm[at + i] = (at + (i + 1) % len) as u8;
                }
                at += len;
            }
            perm
        })
        .collect()
}

/// Exhaustive search for homomorphisms into `S_d`. The first generator runs
/// over conjugacy class representatives, the second over all of `S_d`; image
/// orders are conjugation invariant, so nothing is lost.
pub fn enumerate_perm_quotients(pres: &Presentation, d: usize) -> Result<OrderSpectrum> {
    if pres.generators.len() > 2 {
        return Err(Error::Precondition("use metacyclic oracle or reduce".into()));
    }
    if d == 0 || d > MAX_DEGREE {
        return Err(Error::Precondition(alloc::format!("degree must be between 1 and {MAX_DEGREE}")));
    }
    let sym = Symmetric(d);
    let reps = class_representatives(d);
    let all = all_perms(d);
    let mut orders: BTreeMap<alloc::string::String, BTreeSet<u64>> =
        pres.names.iter().map(|n| (n.clone(), BTreeSet::new())).collect();
    let mut count = 0u64;
    let second: Vec<Option<&Perm>> = if pres.generators.len() == 2 { all.iter().map(Some).collect() } else { alloc::vec![None] };
    for a in &reps {
        for b in &second {
            let image = |x| if x == pres.generators[0] { a.clone() } else { b.expect("two generators").clone() };
            if pres.first_failure(&sym, image).is_none() {
                count += 1;
                orders.get_mut(&pres.names[0]).expect("name").insert(perm_order(a));
                if let Some(b) = b {
                    orders.get_mut(&pres.names[1]).expect("name").insert(perm_order(b));
                }
            }
        }
    }
    Ok(OrderSpectrum { orders, bound: SearchBound::Degree(d as u64), exhaustive: true, homomorphisms: count })
}
