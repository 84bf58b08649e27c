use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::gog::fixtures::{cycle, theta};
use crate::gog::subdivide_loops;

// Valuation and isocracy straight from the definitions, by trial division.
fn nu(mut x: i64, p: i64) -> u32 {
    x = x.abs();
    let mut k = 0;
    while x % p == 0 {
        x /= p;
        k += 1;
    }
    k
}

fn small_primes_upto(n: i64) -> Vec<i64> {
    (2..=n).filter(|&p| (2..p).all(|d| p % d != 0)).collect()
}

fn expected_case(n: i64, m: i64) -> u8 {
    let bound = n.abs().max(m.abs()).max(2);
    let primes = small_primes_upto(bound);
    let coprime = primes.iter().all(|&p| n % p != 0 || m % p != 0);
    if coprime || n.abs() == m.abs() {
        return 1;
    }
    let iso = primes.iter().all(|&p| n % p != 0 || m % p != 0 || nu(n, p) == nu(m, p));
    if iso {
        2
    } else {
        3
    }
}

fn clean(v: &Verdict) {
    let problems = audit(v);
    assert!(problems.is_empty(), "{problems:?}");
}

#[test]
fn bs_spot_values() {
    for (n, m, case) in [(2, 3, 1), (-3, 3, 1), (6, 10, 2), (2, 4, 3), (12, 18, 3), (1, 1, 1), (1, 5, 1)] {
        let v = classify_bs(n, m).unwrap();
        assert_eq!(v.cycle_case, Some(case), "({n},{m})");
        assert_eq!(v.cycle_case, Some(expected_case(n, m)));
        clean(&v);
    }
    let v = classify_bs(2, 4).unwrap();
    assert!(!v.separable);
    assert_eq!(v.cd_profinite, Dimension::Infinite);
    assert!(matches!(&v.certificates[0], Certificate::Quotient(c) if c.kind == crate::quotients::CertKind::Torsion));
    let v = classify_bs(2, 3).unwrap();
    assert!(v.separable && v.cd_profinite == Dimension::Finite(2));
    assert_eq!(classify_bs(0, 3).unwrap_err(), Error::ZeroArgument);
}

#[test]
fn bs6_10_witnesses() {
    let v = classify_bs(6, 10).unwrap();
    assert_eq!(v.case, Case::IsocraticNotCoprime);
    assert_eq!(v.cd_profinite, Dimension::Finite(2));
    let modules: Vec<&ModuleWitness> = v
        .certificates
        .iter()
        .filter_map(|c| if let Certificate::Module(w) = c { Some(&**w) } else { None })
        .collect();
    let ns = modules.iter().find(|w| w.claim == WitnessClaim::NotSeparable).unwrap();
    assert_eq!((ns.module.prime, ns.module.dim), (3, 2));
    assert!(ns.abstract_report.h2 >= 1);
    assert_eq!(ns.profinite_report.as_ref().unwrap().h2, 0);
    let cd = modules.iter().find(|w| w.claim == WitnessClaim::ProfiniteDimensionTwo).unwrap();
    assert_eq!((cd.module.prime, cd.module.dim), (2, 2));
    assert!(cd.profinite_report.as_ref().unwrap().h2 >= 1);
    clean(&v);
}

#[test]
fn trichotomy_grid() {
    for n in -30i64..=30 {
        for m in -30i64..=30 {
            if n == 0 || m == 0 {
                continue;
            }
            let v = classify_bs(n, m).unwrap();
            let case = v.cycle_case.unwrap();
            assert_eq!(case, expected_case(n, m), "({n},{m})");
            assert_eq!(v.separable, case == 1);
        }
    }
}

#[test]
fn non_cycle_examples() {
    let v = classify_gbs(&theta([(2, 2); 3])).unwrap();
    assert_eq!(v.case, Case::Balanced);
    assert!(v.separable);
    assert_eq!(v.certificates.len(), 2);
    clean(&v);

    let v = classify_gbs(&theta([(2, 2), (2, 2), (2, 3)])).unwrap();
    assert_eq!(v.case, Case::Unbalanced);
    assert!(!v.separable);
    let w = v
        .certificates
        .iter()
        .find_map(|c| if let Certificate::Module(w) = c { Some(w) } else { None })
        .unwrap();
    assert_eq!((w.module.prime, w.module.dim), (5, 1));
    // ℏ¹ rows (−2, 2), (−2, 2), (−2, 3) over F_5 have rank 2
    assert_eq!(w.abstract_report.h2, 1);
    clean(&v);

    let v = classify_gbs(&cycle(&[(3, 3), (2, 3)])).unwrap();
    assert_eq!(v.cycle_case, Some(3));
    clean(&v);

    // a tree with labels ≥ 2
    let t = GbsGraph::builder()
        .vertex("x")
        .vertex("y")
        .vertex("z")
        .edge("e", "x", "y", 2, 3)
        .edge("f", "y", "z", 4, 6)
        .build()
        .unwrap();
    let v = classify_gbs(&t).unwrap();
    assert_eq!(v.case, Case::Balanced);
    assert_eq!(v.certificates.len(), 3);
    clean(&v);

    // collapses to Z
    let t = GbsGraph::builder().vertex("x").vertex("y").edge("e", "x", "y", 1, 7).build().unwrap();
    let v = classify_gbs(&t).unwrap();
    assert_eq!(v.case, Case::TreeDegenerate);
    assert_eq!((v.cd_abstract, v.cd_profinite), (1, Dimension::Finite(1)));
}

#[test]
fn cycle_with_leaf_gets_leaf_witness() {
    let g = GbsGraph::builder()
        .vertex("v1")
        .vertex("v2")
        .vertex("leaf")
        .edge("e1", "v1", "v2", 2, 3)
        .edge("e2", "v2", "v1", 3, 2)
        .edge("e3", "v1", "leaf", 5, 2)
        .build()
        .unwrap();
    let v = classify_gbs(&g).unwrap();
    // (2·3) vs (3·2) around the cycle: |n| = |m|
    assert_eq!(v.case, Case::Balanced);
    let g = GbsGraph::builder()
        .vertex("v1")
        .vertex("v2")
        .vertex("leaf")
        .edge("e1", "v1", "v2", 2, 3)
        .edge("e2", "v2", "v1", 2, 3)
        .edge("e3", "v1", "leaf", 5, 2)
        .build()
        .unwrap();
    let v = classify_gbs(&g).unwrap();
    assert_eq!(v.case, Case::Unbalanced);
    let w = v
        .certificates
        .iter()
        .find_map(|c| if let Certificate::Module(w) = c { Some(w) } else { None })
        .unwrap();
    assert_eq!(w.module.dim, 2);
    assert!(w.abstract_report.h2 >= 1);
    clean(&v);
}

#[test]
fn audit_catches_tampering() {
    let mut v = classify_bs(6, 10).unwrap();
    if let Certificate::Module(w) = &mut v.certificates[0] {
        w.abstract_report.h2 += 1;
    }
    assert!(!audit(&v).is_empty());
    let mut v = classify_bs(2, 3).unwrap();
    v.separable = false;
    assert!(!audit(&v).is_empty());
}

pub(crate) fn random_graph(rng: &mut ChaCha8Rng, max_vertices: usize, max_label: i64) -> GbsGraph {
    let nv = rng.gen_range(1..=max_vertices);
    let mut b = GbsGraph::builder();
    for i in 0..nv {
        b.add_vertex(&alloc::format!("v{i}"));
    }
    let label = |rng: &mut ChaCha8Rng| {
        let x = rng.gen_range(1..=max_label);
        if rng.gen_bool(0.2) {
            -x
        } else {
            x
        }
    };
    let mut k = 0;
    for i in 1..nv {
        let j = rng.gen_range(0..i);
        let (a, c) = (label(rng), label(rng));
        b.add_edge(&alloc::format!("e{k}"), &alloc::format!("v{j}"), &alloc::format!("v{i}"), a, c);
        k += 1;
    }
    for _ in 0..rng.gen_range(0..=2) {
        let (i, j) = (rng.gen_range(0..nv), rng.gen_range(0..nv));
        let (a, c) = (label(rng), label(rng));
        b.add_edge(&alloc::format!("e{k}"), &alloc::format!("v{i}"), &alloc::format!("v{j}"), a, c);
        k += 1;
    }
    b.build().unwrap()
}

#[test]
fn invariance_under_transformations() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..60 {
        let g = random_graph(&mut rng, 5, 9);
        let v = classify_gbs(&g).unwrap();
        clean(&v);
        for h in [subdivide_loops(&g), reduce(&g)] {
            let w = classify_gbs(&h).unwrap();
            assert_eq!((v.separable, v.case), (w.separable, w.case), "{g:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn loops_agree_with_bs(n in -20i64..=20, m in -20i64..=20) {
        prop_assume!(n != 0 && m != 0);
        let a = classify_bs(n, m).unwrap();
        let b = classify_gbs(&subdivide_loops(&GbsGraph::bs(n, m).unwrap())).unwrap();
        prop_assert_eq!(a.case, b.case);
        prop_assert_eq!(a.cycle_case, b.cycle_case);
        prop_assert!(audit(&b).is_empty());
    }
}
