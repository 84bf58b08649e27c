//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use gbs_core::arith::{isocracy_locus, PrimeSet};
use gbs_core::classifier::{audit, classify_bs, classify_gbs, Case, Certificate, Verdict};
use gbs_core::fpcohom::{
    assemble_hbar, build_isocratic_witness, cohomology_abstract, cohomology_profinite, licensed_topology,
    trivial_module, CohomologyReport,
};
use gbs_core::gog::{
    canonical_presentation, epsilon_table, reduce, subdivide_loops, EdgeId, GbsGraph, SpanningTree, VertexId,
};
use gbs_core::oracle::{enumerate_metacyclic_quotients, enumerate_perm_quotients};
use gbs_core::quotients::{construct_balanced_quotient, construct_cycle_quotient, verify_cert, Target};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;
type Criterion = (&'static str, fn(&mut Reports) -> Check, u64);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

/// Every cohomology report produced while the suite runs.
#[derive(Default)]
struct Reports(Vec<CohomologyReport>);

impl Reports {
    fn add(&mut self, r: CohomologyReport) -> CohomologyReport {
        self.0.push(r.clone());
        r
    }

    fn add_verdict(&mut self, v: &Verdict) {
        for c in &v.certificates {
            if let Certificate::Module(w) = c {
                self.0.push(w.abstract_report.clone());
                self.0.extend(w.profinite_report.clone());
            }
        }
    }
}

// Valuations and the isocracy condition by trial division.
fn nu(x: i64, p: i64) -> u32 {
    let (mut x, mut k) = (x.abs(), 0);
    while x % p == 0 {
        x /= p;
        k += 1;
    }
    k
}

fn primes_upto(n: i64) -> Vec<i64> {
    (2..=n).filter(|&p| (2..p).all(|d| p % d != 0)).collect()
}

fn brute_case(n: i64, m: i64) -> u8 {
    let primes = primes_upto(n.abs().max(m.abs()).max(2));
    let common: Vec<i64> = primes.iter().copied().filter(|&p| n % p == 0 && m % p == 0).collect();
    let first = common.is_empty() || n.abs() == m.abs();
    let iso = common.iter().all(|&p| nu(n, p) == nu(m, p));
    let fired = [first, iso && !first, !iso];
    assert_eq!(fired.iter().filter(|&&b| b).count(), 1, "({n},{m})");
    fired.iter().position(|&b| b).unwrap() as u8 + 1
}

fn locus(n: i64, m: i64) -> PrimeSet {
    isocracy_locus(&BigInt::from(n), &BigInt::from(m)).unwrap()
}

fn criterion_1(_: &mut Reports) -> Check {
    for n in -30i64..=30 {
        for m in -30i64..=30 {
            if n == 0 || m == 0 {
                continue;
            }
            let v = classify_bs(n, m).map_err(|e| e.to_string())?;
            let expected = brute_case(n, m);
            ensure!(v.cycle_case == Some(expected), "({n},{m}): got {:?}, expected {expected}", v.cycle_case);
            ensure!(v.separable == (expected == 1), "({n},{m}): separability");
        }
    }
    for (n, m, case) in [(2, 3, 1), (-3, 3, 1), (6, 10, 2), (2, 4, 3), (12, 18, 3)] {
        ensure!(brute_case(n, m) == case, "independent evaluation of ({n},{m})");
        ensure!(classify_bs(n, m).unwrap().cycle_case == Some(case), "spot value ({n},{m})");
    }
    Ok(())
}

fn bs6_10_witness(reports: &mut Reports, p: u64, q: u64) -> Result<(CohomologyReport, CohomologyReport), String> {
    let g = GbsGraph::bs(6, 10).unwrap();
    let t = SpanningTree::bfs(&g);
    let m = build_isocratic_witness(&g, p, q).map_err(|e| e.to_string())?;
    let s = licensed_topology(&g).map_err(|e| e.to_string())?;
    ensure!(s == PrimeSet::cofinite([3, 5]).unwrap(), "topology {s}");
    let a = reports.add(cohomology_abstract(&g, &t, &m).map_err(|e| e.to_string())?);
    let b = reports.add(cohomology_profinite(&g, &t, &m, &s).map_err(|e| e.to_string())?);
    Ok((a, b))
}

fn criterion_2(reports: &mut Reports) -> Check {
    let (a, b) = bs6_10_witness(reports, 3, 2)?;
    ensure!(a.h2 >= 1, "abstract h2 = {}", a.h2);
    ensure!(b.h2 == 0, "profinite h2 = {}", b.h2);
    Ok(())
}

fn criterion_3(reports: &mut Reports) -> Check {
    let (a, b) = bs6_10_witness(reports, 2, 2)?;
    ensure!(a.h2 >= 1, "abstract h2 = {}", a.h2);
    ensure!(b.h2 >= 1, "profinite h2 = {}", b.h2);
    Ok(())
}

fn criterion_4(_: &mut Reports) -> Check {
    let mut cases = 0;
    for n in -12i64..=12 {
        for m in -12i64..=12 {
            if n == 0 || m == 0 || brute_case(n, m) == 3 {
                continue;
            }
            let g = GbsGraph::bs(n, m).unwrap();
            let t = SpanningTree::bfs(&g);
            let set = locus(n, m);
            for p in [2u64, 3, 5, 7, 11] {
                // independent membership test
                let member = nu(n, p as i64) == nu(m, p as i64);
                ensure!(member == set.contains(p), "locus of ({n},{m}) at {p}");
                if !member {
                    continue;
                }
                for k in 0..=3u32 {
                    let cert = construct_cycle_quotient(&g, &t, p, &Target::Vertex("a".into()), k)
                        .map_err(|e| format!("({n},{m}) p={p} k={k}: {e}"))?;
                    let r = verify_cert(&g, &t, &cert);
                    ensure!(r.valid, "({n},{m}) p={p} k={k}: {:?}", r.failure);
                    ensure!(r.target_order == Some(p.pow(k)), "({n},{m}) p={p} k={k}: order {:?}", r.target_order);
                    ensure!(r.order_formula_ok, "({n},{m}) p={p} k={k}: order formula");
                    cases += 1;
                }
            }
        }
    }
    ensure!(cases > 0, "no cases");
    Ok(())
}

fn criterion_5(_: &mut Reports) -> Check {
    let (g, t) = {
        let g = GbsGraph::bs(2, 3).unwrap();
        let t = SpanningTree::bfs(&g);
        (g, t)
    };
    let pres = canonical_presentation(&g, &t);
    let mut orders = BTreeSet::new();
    for d in 1..=6 {
        let s = enumerate_perm_quotients(&pres, d).map_err(|e| e.to_string())?;
        ensure!(s.exhaustive, "degree {d} not exhaustive");
        orders.extend(s.orders["a"].iter().copied());
    }
    let s = enumerate_metacyclic_quotients(2, 3, 200).map_err(|e| e.to_string())?;
    ensure!(s.exhaustive, "metacyclic not exhaustive");
    orders.extend(s.orders["a"].iter().copied());
    ensure!(orders.iter().all(|o| o % 2 != 0 && o % 3 != 0), "order divisible by 2 or 3 in {orders:?}");
    for o in [5, 25, 7] {
        ensure!(orders.contains(&o), "order {o} not realized");
    }

    let start = Instant::now();
    let g = GbsGraph::bs(2, 4).unwrap();
    let pres = canonical_presentation(&g, &SpanningTree::bfs(&g));
    let s = enumerate_perm_quotients(&pres, 5).map_err(|e| e.to_string())?;
    ensure!(s.orders["a"].contains(&2), "BS(2,4): order 2 not realized");
    ensure!(start.elapsed() < Duration::from_secs(10), "BS(2,4) search took {:?}", start.elapsed());
    Ok(())
}

fn cycle_graph(labels: &[(i64, i64)]) -> GbsGraph {
    let s = labels.len();
    let mut b = GbsGraph::builder();
    for i in 0..s {
        b.add_vertex(&format!("v{i}"));
    }
    for (i, &(x, y)) in labels.iter().enumerate() {
        b.add_edge(&format!("e{i}"), &format!("v{i}"), &format!("v{}", (i + 1) % s), x, y);
    }
    b.build().unwrap()
}

fn criterion_6(reports: &mut Reports) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut done = 0;
    while done < 100 {
        let s = rng.gen_range(1..=5);
        let labels: Vec<(i64, i64)> = (0..s)
            .map(|_| {
                let mut l = || rng.gen_range(1..=12) * if rng.gen_bool(0.3) { -1 } else { 1 };
                (l(), l())
            })
            .collect();
        let p = [2i64, 3, 5, 7, 11][rng.gen_range(0..5)];
        let div0 = labels.iter().any(|l| l.0 % p == 0);
        let div1 = labels.iter().any(|l| l.1 % p == 0);
        if div0 == div1 {
            continue;
        }
        // the family p does not divide
        let opposite: i64 = labels.iter().map(|l| if div0 { l.1 } else { l.0 }).product();
        let g = cycle_graph(&labels);
        let t = SpanningTree::bfs(&g);
        let m = trivial_module(&g, p as u64, 1).map_err(|e| e.to_string())?;
        let h = assemble_hbar(&g, &t, &m).map_err(|e| e.to_string())?;
        let det = h.det() as i64;
        let r = opposite.rem_euclid(p);
        ensure!(det == r || det == (p - r) % p, "{labels:?} p={p}: det {det}, product {opposite}");
        ensure!(r != 0, "{labels:?} p={p}: opposite product vanishes");
        let c = reports.add(cohomology_abstract(&g, &t, &m).map_err(|e| e.to_string())?);
        ensure!(c.h2 == 0, "{labels:?} p={p}: h2 = {}", c.h2);
        done += 1;
    }
    Ok(())
}

fn theta(labels: [(i64, i64); 3]) -> GbsGraph {
    let mut b = GbsGraph::builder().vertex("v1").vertex("v2");
    for (i, (x, y)) in labels.into_iter().enumerate() {
        b.add_edge(&format!("e{}", i + 1), "v1", "v2", x, y);
    }
    b.build().unwrap()
}

fn criterion_7(reports: &mut Reports) -> Check {
    let v = classify_gbs(&theta([(2, 2); 3])).map_err(|e| e.to_string())?;
    reports.add_verdict(&v);
    ensure!(v.separable && v.case == Case::Balanced, "all-(2,2) theta: {:?}", v.case);
    ensure!(audit(&v).is_empty(), "audit: {:?}", audit(&v));

    let g = theta([(2, 2), (2, 2), (2, 3)]);
    let v = classify_gbs(&g).map_err(|e| e.to_string())?;
    reports.add_verdict(&v);
    ensure!(!v.separable, "theta with a (2,3) edge is separable");
    ensure!(audit(&v).is_empty(), "audit: {:?}", audit(&v));
    let w = v
        .certificates
        .iter()
        .find_map(|c| if let Certificate::Module(w) = c { Some(w) } else { None })
        .ok_or("no module witness")?;
    let (ne, nv) = (v.graph.edge_count(), v.graph.vertex_count());
    ensure!(w.abstract_report.h2 >= 1 && w.abstract_report.h2 >= ne - nv, "witness h2 = {}", w.abstract_report.h2);

    // All ℏ¹ rows equal (−2, 2): rank 1, so h2 = 3 − 1.
    let g = theta([(2, 2); 3]);
    let t = SpanningTree::bfs(&g);
    let r = reports.add(cohomology_abstract(&g, &t, &trivial_module(&g, 5, 1).unwrap()).unwrap());
    ensure!(r.h2 == 2, "all-(2,2) theta over F_5: h2 = {}", r.h2);

    let trees = [
        GbsGraph::builder().vertex("x").vertex("y").edge("e", "x", "y", 2, 3).build().unwrap(),
        GbsGraph::builder()
            .vertex("x")
            .vertex("y")
            .vertex("z")
            .vertex("w")
            .edge("e", "x", "y", 4, 6)
            .edge("f", "y", "z", -3, 9)
            .edge("g", "y", "w", 2, 2)
            .build()
            .unwrap(),
    ];
    for g in &trees {
        let v = classify_gbs(g).map_err(|e| e.to_string())?;
        ensure!(v.separable, "tree not separable");
        let t = SpanningTree::bfs(g);
        for y in g.vertex_ids() {
            for (p, k) in [(2u64, 1u32), (3, 2)] {
                let cert = construct_balanced_quotient(g, &t, y, p, k).map_err(|e| e.to_string())?;
                let r = verify_cert(g, &t, &cert);
                ensure!(r.valid && r.order_formula_ok, "tree cert at {} ({p},{k}): {:?}", g.vertex_name(y), r.failure);
                ensure!(r.target_order == Some(p.pow(k)), "tree cert order {:?}", r.target_order);
            }
        }
    }
    Ok(())
}

fn criterion_8(_: &mut Reports) -> Check {
    let g = GbsGraph::builder()
        .vertex("v1")
        .vertex("v2")
        .edge("e1", "v1", "v2", 3, 3)
        .edge("e2", "v2", "v1", 2, 3)
        .build()
        .unwrap();
    let t1 = SpanningTree::new(&g, [EdgeId(0)]).unwrap();
    let t2 = SpanningTree::new(&g, [EdgeId(1)]).unwrap();
    let a = epsilon_table(&g, &t1, 2, VertexId(0)).map_err(|e| e.to_string())?;
    let b = epsilon_table(&g, &t2, 2, VertexId(0)).map_err(|e| e.to_string())?;
    ensure!(a.values == [0, 0], "tree {{e1}}: {:?}", a.values);
    ensure!(b.values == [0, -1], "tree {{e2}}: {:?}", b.values);
    Ok(())
}

fn random_graph(rng: &mut ChaCha8Rng) -> GbsGraph {
    let nv = rng.gen_range(1..=6);
    let mut b = GbsGraph::builder();
    for i in 0..nv {
        b.add_vertex(&format!("v{i}"));
    }
    let label = |rng: &mut ChaCha8Rng| rng.gen_range(1..=9) * if rng.gen_bool(0.2) { -1 } else { 1 };
    let mut k = 0;
    for i in 1..nv {
        let j = rng.gen_range(0..i);
        let (x, y) = (label(rng), label(rng));
        b.add_edge(&format!("e{k}"), &format!("v{j}"), &format!("v{i}"), x, y);
        k += 1;
    }
    for _ in 0..rng.gen_range(0..=2) {
        let (i, j) = (rng.gen_range(0..nv), rng.gen_range(0..nv));
        let (x, y) = (label(rng), label(rng));
        b.add_edge(&format!("e{k}"), &format!("v{i}"), &format!("v{j}"), x, y);
        k += 1;
    }
    b.build().unwrap()
}

fn criterion_9(reports: &mut Reports) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for i in 0..200 {
        let g = random_graph(&mut rng);
        let v = classify_gbs(&g).map_err(|e| e.to_string())?;
        reports.add_verdict(&v);
        ensure!(audit(&v).is_empty(), "graph {i}: audit {:?}", audit(&v));
        for (what, h) in [("reduce", reduce(&g)), ("subdivide_loops", subdivide_loops(&g))] {
            let w = classify_gbs(&h).map_err(|e| e.to_string())?;
            ensure!(
                (w.separable, w.case) == (v.separable, v.case),
                "graph {i}: {what} changes {:?} to {:?}",
                v.case,
                w.case
            );
        }
        let t = SpanningTree::bfs(&g);
        let p = [2u64, 3, 5][i % 3];
        let m = trivial_module(&g, p, 1).unwrap();
        reports.add(cohomology_abstract(&g, &t, &m).map_err(|e| e.to_string())?);
        if let Ok(s) = licensed_topology(&g) {
            reports.add(cohomology_profinite(&g, &t, &m, &s).map_err(|e| e.to_string())?);
        }
    }
    let bad = reports.0.iter().filter(|r| !r.euler_ok()).count();
    ensure!(bad == 0, "{bad} of {} reports break the Euler characteristic identity", reports.0.len());
    ensure!(!reports.0.is_empty(), "no reports collected");
    Ok(())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("trichotomy table", criterion_1, 1),
        ("case-2 non-separability witness", criterion_2, 1),
        ("case-2 profinite dimension witness", criterion_3, 1),
        ("quotient realization", criterion_4, 10),
        ("oracle soundness", criterion_5, 60),
        ("determinant property", criterion_6, 5),
        ("non-cycle graphs", criterion_7, 5),
        ("epsilon tree sensitivity", criterion_8, 1),
        ("invariance suite", criterion_9, 30),
    ];
    let mut reports = Reports::default();
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut result = check(&mut reports);
        let elapsed = start.elapsed();
        if result.is_ok() && elapsed > Duration::from_secs(*limit) {
            result = Err(format!("exceeded the {limit} s budget"));
        }
        match result {
            Ok(()) => println!("criterion {}: PASS  {name} ({:.3} s, budget {limit} s)", i + 1, elapsed.as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({:.3} s): {e}", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
