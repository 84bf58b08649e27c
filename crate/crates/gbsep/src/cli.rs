//! The `gbsep` command line.
//!
//! Exit status is 0 on success, 1 on bad input and 2 when the requested
//! computation lies outside the regime the theory determines.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use gbs_core::arith::PrimeSet;
use gbs_core::classifier::{audit, classify_gbs, Certificate, Verdict};
use gbs_core::fpcohom::{cohomology_abstract, cohomology_profinite, describe_module, licensed_topology, CohomologyReport};
use gbs_core::gog::{canonical_presentation, epsilon_table, EpsilonTable, GbsGraph, SpanningTree};
use gbs_core::oracle::{
    check_topology_prediction, enumerate_metacyclic_quotients, enumerate_perm_quotients, OrderSpectrum,
    PredictionReport,
};
use gbs_core::quotients::{
    construct_balanced_quotient, construct_cycle_quotient, construct_nonisocratic_p_quotient, verify_cert,
    CertReport, QuotientCert, Target,
};
use serde::{Deserialize, Serialize};

use crate::io::{read_cert, read_graph, read_module, to_json, IoError};

#[derive(Debug, Parser)]
#[command(name = "gbsep", version, about = "Cohomological separability of generalised Baumslag-Solitar groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized internals; every command is currently deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

/// Exactly one of a graph file (`-` for stdin) or `--bs N M`.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Input {
    /// Graph file in the line format (`vertex`, `edge`, `loop`, `bs`).
    pub graph: Option<PathBuf>,
    /// BS(N, M) = <a, t | t a^M t^-1 = a^N>.
    #[arg(long, num_args = 2, value_names = ["N", "M"], allow_negative_numbers = true)]
    pub bs: Option<Vec<i64>>,
}

#[derive(Debug, Args)]
pub struct TreeArg {
    /// Spanning tree as comma-separated edge names; BFS tree by default.
    #[arg(long, value_delimiter = ',')]
    pub tree: Option<Vec<String>>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide separability and the profinite cohomological dimension.
    Classify {
        #[command(flatten)]
        input: Input,
    },
    /// Cohomology with coefficients in an F_p-module, for the group and its completion.
    Cohomology {
        #[command(flatten)]
        input: Input,
        /// Module JSON: {"prime": p, "dim": d, "actions": {generator: rows}}.
        #[arg(long)]
        module: PathBuf,
        #[command(flatten)]
        tree: TreeArg,
        /// Which side to compute.
        #[arg(long, value_enum, default_value_t = SideArg::Both)]
        side: SideArg,
    },
    /// Build a finite quotient certificate.
    Quotient {
        #[command(flatten)]
        input: Input,
        #[arg(short)]
        p: u64,
        #[arg(short, default_value_t = 1)]
        k: u32,
        #[arg(long, conflicts_with = "edge")]
        vertex: Option<String>,
        #[arg(long)]
        edge: Option<String>,
        /// Quotient onto C_p for a non-isocratic cycle.
        #[arg(long, conflicts_with_all = ["vertex", "edge"])]
        torsion: bool,
        #[command(flatten)]
        tree: TreeArg,
    },
    /// Check a quotient certificate.
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        cert: PathBuf,
        #[command(flatten)]
        tree: TreeArg,
    },
    /// Brute-force finite quotients and compare with the predicted topology.
    Oracle {
        #[command(flatten)]
        input: Input,
        /// Search symmetric groups up to this degree.
        #[arg(long, conflicts_with = "ncap")]
        degree: Option<usize>,
        /// Search holomorphs C_N x| Aut(C_N) up to this N.
        #[arg(long)]
        ncap: Option<u64>,
        /// Largest prime power reported as realized.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// The epsilon function of a prime on a spanning tree.
    Epsilon {
        #[command(flatten)]
        input: Input,
        #[arg(short)]
        p: u64,
        /// Base vertex; the first vertex by default.
        #[arg(long)]
        base: Option<String>,
        #[command(flatten)]
        tree: TreeArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SideArg {
    Abstract,
    Profinite,
    Both,
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Regime(String),
}

impl From<gbs_core::Error> for Failure {
    fn from(e: gbs_core::Error) -> Self {
        match e {
            gbs_core::Error::RegimeNotCovered(_) => Failure::Regime(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e.core() {
            Some(gbs_core::Error::RegimeNotCovered(_)) => Failure::Regime(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// Cohomology of both sides; the completion side may be refused.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyOutput {
    pub module: String,
    #[serde(rename = "abstract")]
    pub abstract_side: Option<CohomologyReport>,
    pub profinite: Option<CohomologyReport>,
    pub profinite_refusal: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleOutput {
    pub spectrum: OrderSpectrum,
    pub predicted: Option<PrimeSet>,
    pub prediction: Option<PredictionReport>,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(&cli, stdin) {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(Failure::Input(msg)) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Failure::Regime(msg)) => Outcome { code: 2, stdout: String::new(), stderr: format!("refused: {msg}\n") },
    }
}

fn graph(input: &Input, stdin: &mut dyn Read) -> Result<GbsGraph, Failure> {
    match (&input.graph, &input.bs) {
        (_, Some(nm)) => Ok(GbsGraph::bs(nm[0], nm[1])?),
        (Some(path), None) => Ok(read_graph(path, stdin)?),
        (None, None) => Err(Failure::Input("no input graph".into())),
    }
}

fn tree(g: &GbsGraph, arg: &TreeArg) -> Result<SpanningTree, Failure> {
    match &arg.tree {
        None => Ok(SpanningTree::bfs(g)),
        Some(names) => {
            let ids = names.iter().filter(|n| !n.is_empty()).map(|n| g.edge_id(n)).collect::<Result<Vec<_>, _>>()?;
            Ok(SpanningTree::new(g, ids)?)
        }
    }
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read) -> Result<String, Failure> {
    let json = cli.json;
    match &cli.command {
        Command::Classify { input } => {
            let g = graph(input, stdin)?;
            let v = classify_gbs(&g)?;
            Ok(if json { to_json(&v) } else { render_verdict(&v) })
        }
        Command::Cohomology { input, module, tree: t, side } => {
            let g = graph(input, stdin)?;
            let tree = tree(&g, t)?;
            let m = read_module(module, &g, stdin)?;
            m.check(&g, &tree)?;
            let mut out = CohomologyOutput {
                module: describe_module(&g, &m),
                abstract_side: None,
                profinite: None,
                profinite_refusal: None,
            };
            if *side != SideArg::Profinite {
                out.abstract_side = Some(cohomology_abstract(&g, &tree, &m)?);
            }
            if *side != SideArg::Abstract {
                match licensed_topology(&g).and_then(|s| cohomology_profinite(&g, &tree, &m, &s)) {
                    Ok(r) => out.profinite = Some(r),
                    Err(e @ gbs_core::Error::RegimeNotCovered(_)) if *side == SideArg::Both => {
                        out.profinite_refusal = Some(e.to_string())
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            Ok(if json { to_json(&out) } else { render_cohomology(&out) })
        }
        Command::Quotient { input, p, k, vertex, edge, torsion, tree: t } => {
            let g = graph(input, stdin)?;
            let tree = tree(&g, t)?;
            let cert = if *torsion {
                construct_nonisocratic_p_quotient(&g, &tree, *p)?
            } else {
                let target = match (vertex, edge) {
                    (_, Some(e)) => Target::Edge(e.clone()),
                    (Some(v), None) => Target::Vertex(v.clone()),
                    (None, None) => Target::Vertex(g.vertex_names()[0].clone()),
                };
                if g.is_cycle() {
                    construct_cycle_quotient(&g, &tree, *p, &target, *k)?
                } else {
                    let Target::Vertex(v) = &target else {
                        return Err(Failure::Input("edge targets need a cycle".into()));
                    };
                    construct_balanced_quotient(&g, &tree, g.vertex_id(v)?, *p, *k)?
                }
            };
            Ok(if json { to_json(&cert) } else { render_cert(&g, &tree, &cert) })
        }
        Command::Verify { input, cert, tree: t } => {
            let g = graph(input, stdin)?;
            let tree = tree(&g, t)?;
            let cert = read_cert(cert, stdin)?;
            let report = verify_cert(&g, &tree, &cert);
            let text = if json { to_json(&report) } else { render_cert_report(&report) };
            if report.valid {
                Ok(text)
            } else {
                Err(Failure::Input(format!("certificate rejected: {}", report.failure.unwrap_or_default())))
            }
        }
        Command::Oracle { input, degree, ncap, bound } => {
            let g = graph(input, stdin)?;
            let spectrum = match (degree, ncap) {
                (Some(d), _) => {
                    let pres = canonical_presentation(&g, &SpanningTree::bfs(&g));
                    enumerate_perm_quotients(&pres, *d)?
                }
                (None, cap) => {
                    let [e] = g.edges() else {
                        return Err(Failure::Input("the metacyclic search needs a single loop".into()));
                    };
                    if g.vertex_count() != 1 {
                        return Err(Failure::Input("the metacyclic search needs a single loop".into()));
                    }
                    let mut s = enumerate_metacyclic_quotients(e.lambda1, e.lambda0, cap.unwrap_or(60))?;
                    rename_loop(&mut s, &g);
                    s
                }
            };
            let predicted = predicted_topology(&g);
            let bound = bound.unwrap_or_else(|| spectrum.group_order_bound().min(100));
            let prediction = match &predicted {
                Some(s) => Some(check_topology_prediction(&g, &spectrum, s, bound)?),
                None => None,
            };
            let out = OracleOutput { spectrum, predicted, prediction };
            Ok(if json { to_json(&out) } else { render_oracle(&out) })
        }
        Command::Epsilon { input, p, base, tree: t } => {
            let g = graph(input, stdin)?;
            let tree = tree(&g, t)?;
            let w = match base {
                Some(b) => g.vertex_id(b)?,
                None => gbs_core::gog::VertexId(0),
            };
            let table = epsilon_table(&g, &tree, *p, w)?;
            Ok(if json { to_json(&table) } else { render_epsilon(&g, &table) })
        }
    }
}

// The metacyclic search labels its generators `a` and `t`.
fn rename_loop(s: &mut OrderSpectrum, g: &GbsGraph) {
    let names = [(String::from("a"), g.vertex_names()[0].clone()), (String::from("t"), g.edges()[0].name.clone())];
    let mut orders = std::collections::BTreeMap::new();
    for (from, to) in names {
        if let Some(set) = s.orders.remove(&from) {
            orders.insert(to, set);
        }
    }
    s.orders = orders;
}

/// The licensed topology, or for a non-isocratic cycle the isocracy locus of
/// its products, against which torsion is then allowed within its bound.
fn predicted_topology(g: &GbsGraph) -> Option<PrimeSet> {
    match licensed_topology(g) {
        Ok(s) => Some(s),
        Err(_) if g.is_cycle() => {
            let c = g.cycle_traversal().ok()?;
            let (n, m) = gbs_core::gog::augmentation_products(g, &c);
            gbs_core::arith::isocracy_locus(&n, &m).ok()
        }
        Err(_) => None,
    }
}

fn render_verdict(v: &Verdict) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "case: {:?}", v.case);
    if let Some(c) = v.cycle_case {
        let _ = writeln!(s, "cycle case: {c}");
    }
    let _ = writeln!(s, "separable: {}", v.separable);
    let _ = writeln!(s, "cd: {}", v.cd_abstract);
    let _ = writeln!(s, "cd of completion: {}", v.cd_profinite);
    if let Some((n, m)) = &v.products {
        let _ = writeln!(s, "augmentation products: ({n}, {m})");
    }
    let _ = writeln!(
        s,
        "reduced graph: {} vertices, {} edges",
        v.graph.vertex_count(),
        v.graph.edge_count()
    );
    if !v.certificates.is_empty() {
        let _ = writeln!(s, "certificates:");
    }
    for c in &v.certificates {
        match c {
            Certificate::Quotient(q) => {
                let orders: Vec<String> = q.claimed_orders.iter().map(|(n, o)| format!("|{n}| = {o}")).collect();
                let _ = writeln!(
                    s,
                    "  quotient ({:?}) into C_{} x| Aut(C_{}): {}",
                    q.kind,
                    q.modulus,
                    q.modulus,
                    orders.join(", ")
                );
            }
            Certificate::Module(w) => {
                let prof = w.profinite_report.as_ref().map_or("not computed".into(), |r| r.h2.to_string());
                let _ = writeln!(
                    s,
                    "  module F_{}^{} ({:?}): h2 = {} for the group, {} for the completion",
                    w.module.prime, w.module.dim, w.claim, w.abstract_report.h2, prof
                );
            }
            Certificate::Unbalanced { cycle, n, m } => {
                let _ = writeln!(s, "  unbalanced cycle {} with products ({n}, {m})", cycle.display(&v.graph));
            }
        }
    }
    if !v.notes.is_empty() {
        let _ = writeln!(s, "notes:");
    }
    for n in &v.notes {
        let _ = writeln!(s, "  {n}");
    }
    let problems = audit(v);
    let _ = writeln!(s, "audit: {}", if problems.is_empty() { "ok".into() } else { problems.join("; ") });
    s
}

fn render_report(s: &mut String, label: &str, r: &CohomologyReport) {
    let _ = writeln!(
        s,
        "{label}: h0 = {}, h1 = {}, h2 = {} (fibre primes: {}; euler characteristic {} = {})",
        r.h0,
        r.h1,
        r.h2,
        r.support,
        r.euler_characteristic(),
        r.fibre_euler_characteristic()
    );
}

fn render_cohomology(out: &CohomologyOutput) -> String {
    let mut s = format!("module: {}\n", out.module);
    if let Some(r) = &out.abstract_side {
        render_report(&mut s, "group", r);
    }
    if let Some(r) = &out.profinite {
        render_report(&mut s, "completion", r);
    }
    if let Some(msg) = &out.profinite_refusal {
        let _ = writeln!(s, "completion: {msg}");
    }
    s
}

fn render_cert(g: &GbsGraph, tree: &SpanningTree, c: &QuotientCert) -> String {
    let mut s = format!("quotient ({:?}) into C_{} x| Aut(C_{})\n", c.kind, c.modulus, c.modulus);
    for (name, x) in &c.images {
        let _ = writeln!(s, "  {name} -> ({}, {})", x.c, x.u);
    }
    for (name, o) in &c.claimed_orders {
        let _ = writeln!(s, "  |{name}| = {o}");
    }
    s.push_str(&render_cert_report(&verify_cert(g, tree, c)));
    s
}

fn render_cert_report(r: &CertReport) -> String {
    let mut s = String::new();
    match &r.failure {
        None => {
            let _ = writeln!(s, "valid: true");
        }
        Some(f) => {
            let _ = writeln!(s, "valid: false ({f})");
        }
    }
    if let Some(o) = r.target_order {
        let _ = writeln!(s, "target order: {o}");
    }
    if r.order_formula_checked {
        let _ = writeln!(s, "order formula: {}", if r.order_formula_ok { "ok" } else { "fails" });
    }
    s
}

fn render_oracle(out: &OracleOutput) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "search: {:?}, exhaustive: {}", out.spectrum.bound, out.spectrum.exhaustive);
    let _ = writeln!(s, "homomorphisms: {}", out.spectrum.homomorphisms);
    for (name, set) in &out.spectrum.orders {
        let list: Vec<String> = set.iter().map(u64::to_string).collect();
        let _ = writeln!(s, "orders of {name}: {}", list.join(" "));
    }
    if let (Some(p), Some(r)) = (&out.predicted, &out.prediction) {
        let _ = writeln!(s, "predicted primes: {p}");
        let _ = writeln!(s, "sound: {}", r.sound);
        let list: Vec<String> = r.realized.iter().map(u64::to_string).collect();
        let _ = writeln!(s, "realized prime powers: {}", list.join(" "));
        if !r.torsion_primes.is_empty() {
            let w: Vec<String> = r.torsion_witnesses.iter().map(|(n, o)| format!("|{n}| = {o}")).collect();
            let _ = writeln!(s, "torsion witnesses: {}", w.join(", "));
            let _ = writeln!(s, "torsion bound: {}", if r.torsion_bound_ok { "ok" } else { "exceeded" });
        }
    }
    s
}

fn render_epsilon(g: &GbsGraph, t: &EpsilonTable) -> String {
    let mut s = format!("epsilon at {} from {}\n", t.prime, g.vertex_name(t.base));
    let tree: Vec<&str> = t.tree.edges().map(|e| g.edge(e).name.as_str()).collect();
    let _ = writeln!(s, "tree: {}", tree.join(","));
    for v in g.vertex_ids() {
        let _ = writeln!(s, "  {} {}", g.vertex_name(v), t.value(v));
    }
    s
}
