use std::fs;
use std::path::Path;

use gbs_core::classifier::Verdict;
use gbs_core::oracle::OrderSpectrum;
use gbs_core::quotients::QuotientCert;
use gbsep::cli::{CohomologyOutput, OracleOutput};
use gbsep::io::{from_json, to_json};
use gbsep::{run, Outcome};

fn gbsep(args: &[&str]) -> Outcome {
    let mut argv = vec!["gbsep"];
    argv.extend_from_slice(args);
    run(argv, &mut std::io::empty())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn classify_bs23_json() {
    let out = gbsep(&["classify", "--bs", "2", "3", "--json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["separable"], true);
    assert_eq!(v["case"], "CycleCoprime");
    assert_eq!(v["cd_profinite"], 2);
    let verdict: Verdict = from_json(&out.stdout).unwrap();
    assert_eq!(to_json(&verdict), out.stdout);
}

#[test]
fn classify_bs24_text() {
    let out = gbsep(&["classify", "--bs", "2", "4"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("cycle case: 3"));
    assert!(out.stdout.contains("quotient (Torsion) into C_2"));
    assert!(out.stdout.contains("audit: ok"));
}

#[test]
fn text_and_json_agree() {
    for bs in [["6", "10"], ["2", "4"], ["-3", "3"]] {
        let text = gbsep(&["classify", "--bs", bs[0], bs[1]]).stdout;
        let json = gbsep(&["classify", "--bs", bs[0], bs[1], "--json"]).stdout;
        let v: Verdict = from_json(&json).unwrap();
        assert!(text.contains(&format!("cd: {}", v.cd_abstract)));
        assert!(text.contains(&format!("cd of completion: {}", v.cd_profinite)));
        assert!(text.contains(&format!("separable: {}", v.separable)));
        let (n, m) = v.products.unwrap();
        assert!(text.contains(&format!("({n}, {m})")));
    }
}

#[test]
fn deterministic_json() {
    let a = gbsep(&["classify", "--bs", "6", "10", "--json", "--seed", "7"]);
    let b = gbsep(&["classify", "--bs", "6", "10", "--json", "--seed", "7"]);
    assert_eq!(a, b);
}

#[test]
fn oracle_bs23_degree5() {
    let out = gbsep(&["oracle", "--bs", "2", "3", "--degree", "5", "--json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let o: OracleOutput = from_json(&out.stdout).unwrap();
    assert!(o.spectrum.exhaustive);
    assert!(o.spectrum.orders["a"].iter().all(|x| x % 2 != 0 && x % 3 != 0));
    assert!(o.prediction.unwrap().sound);
    let s: OrderSpectrum = from_json(&to_json(&o.spectrum)).unwrap();
    assert_eq!(s, o.spectrum);
}

#[test]
fn oracle_metacyclic_names_follow_graph() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.txt", "vertex x\nloop s x 3 2\n");
    let out = gbsep(&["oracle", &g, "--ncap", "30", "--json"]);
    let o: OracleOutput = from_json(&out.stdout).unwrap();
    assert!(o.spectrum.orders["x"].contains(&25));
    assert!(o.spectrum.orders.contains_key("s"));
}

#[test]
fn quotient_and_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = gbsep(&["quotient", "--bs", "2", "3", "-p", "5", "-k", "2", "--json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let cert: QuotientCert = from_json(&out.stdout).unwrap();
    assert_eq!(cert.modulus, 25);
    assert_eq!(to_json(&cert), out.stdout);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["images"]["t"], serde_json::json!([0, 9]));
    let path = write(dir.path(), "cert.json", &out.stdout);
    let ok = gbsep(&["verify", "--bs", "2", "3", "--cert", &path]);
    assert_eq!(ok.code, 0);
    assert!(ok.stdout.contains("valid: true"));
    let bad = out.stdout.replace("9\n", "8\n");
    let path = write(dir.path(), "bad.json", &bad);
    let r = gbsep(&["verify", "--bs", "2", "3", "--cert", &path]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("not killed"), "{}", r.stderr);
}

#[test]
fn torsion_quotient() {
    let out = gbsep(&["quotient", "--bs", "12", "2", "-p", "2", "--torsion", "--json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let cert: QuotientCert = from_json(&out.stdout).unwrap();
    assert_eq!(cert.modulus, 2);
}

#[test]
fn cohomology_with_module_file() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", r#"{"prime": 3, "dim": 2, "actions": {"a": [[0, 1], [1, 0]]}}"#);
    let out = gbsep(&["cohomology", "--bs", "6", "10", "--module", &m, "--json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let c: CohomologyOutput = from_json(&out.stdout).unwrap();
    let a = c.abstract_side.unwrap();
    let p = c.profinite.unwrap();
    assert!(a.h2 >= 1);
    assert_eq!(p.h2, 0);
    // text mode shows the same numbers
    let text = gbsep(&["cohomology", "--bs", "6", "10", "--module", &m]).stdout;
    assert!(text.contains(&format!("group: h0 = {}, h1 = {}, h2 = {}", a.h0, a.h1, a.h2)));
}

#[test]
fn ill_defined_module_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", r#"{"prime": 5, "dim": 1, "actions": {"a": [[2]]}}"#);
    let out = gbsep(&["cohomology", "--bs", "2", "3", "--module", &m]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("not well defined"));
}

#[test]
fn refusals_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", r#"{"prime": 2, "dim": 1, "actions": {}}"#);
    let out = gbsep(&["cohomology", "--bs", "2", "4", "--module", &m, "--side", "profinite"]);
    assert_eq!(out.code, 2, "{}", out.stderr);
    assert!(out.stderr.starts_with("refused: regime not covered"));
    // with both sides the refusal is reported alongside the abstract result
    let out = gbsep(&["cohomology", "--bs", "2", "4", "--module", &m, "--json"]);
    assert_eq!(out.code, 0);
    let c: CohomologyOutput = from_json(&out.stdout).unwrap();
    assert!(c.abstract_side.is_some() && c.profinite_refusal.is_some());
}

#[test]
fn input_errors_exit_one_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.txt", "vertex a\n# comment\nedge e a b 2 3\n");
    let out = gbsep(&["classify", &g]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("line 3: unknown vertex `b`"), "{}", out.stderr);
    let g = write(dir.path(), "z.txt", "vertex a\nloop t a 0 1\n");
    assert!(gbsep(&["classify", &g]).stderr.contains("label must be nonzero"));
    assert_eq!(gbsep(&["classify", "/nonexistent/graph"]).code, 1);
    assert_eq!(gbsep(&["classify"]).code, 1);
    assert_eq!(gbsep(&["classify", &g, "--bs", "2", "3"]).code, 1);
    assert_eq!(gbsep(&["--help"]).code, 0);
}

#[test]
fn epsilon_two_trees() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.txt", "vertex v1\nvertex v2\nedge e1 v1 v2 3 3\nedge e2 v2 v1 2 3\n");
    let a: serde_json::Value = serde_json::from_str(&gbsep(&["epsilon", &g, "-p", "2", "--json"]).stdout).unwrap();
    assert_eq!(a["values"], serde_json::json!([0, 0]));
    let b = gbsep(&["epsilon", &g, "-p", "2", "--tree", "e2", "--json"]);
    let b: serde_json::Value = serde_json::from_str(&b.stdout).unwrap();
    assert_eq!(b["values"], serde_json::json!([0, -1]));
}

#[test]
fn stdin_input() {
    let mut input: &[u8] = b"bs 6 10\n";
    let out = run(["gbsep", "classify", "-", "--json"], &mut input);
    let v: Verdict = from_json(&out.stdout).unwrap();
    assert_eq!(v.cycle_case, Some(2));
}
