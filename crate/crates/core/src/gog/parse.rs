use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::GbsGraph;
use crate::{Error, Result};

fn at(line: usize, msg: impl core::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

fn label(tok: &str, line: usize, edge: &str) -> Result<i64> {
    let x: i64 = tok.parse().map_err(|_| at(line, format!("`{tok}` is not an integer label")))?;
    if x == 0 {
        return Err(at(line, Error::ZeroLabel(edge.into())));
    }
    Ok(x)
}

/// Reads the line-oriented graph format:
///
/// ```text
/// # comment
/// vertex <name>
/// edge <name> <src> <dst> <λ0> <λ1>
/// loop <name> <v> <λ0> <λ1>
/// bs <n> <m>
/// ```
///
/// `bs n m` stands alone for one vertex `a` with a loop `t` labelled
/// `(m, n)`.
pub fn parse_graph(text: &str) -> Result<GbsGraph> {
    let mut b = GbsGraph::builder();
    let mut declared: Vec<String> = Vec::new();
    let mut bs: Option<(usize, i64, i64)> = None;
    let mut directives = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        directives += 1;
        let toks: Vec<&str> = content.split_whitespace().collect();
        let arity = |n: usize| {
            if toks.len() == n {
                Ok(())
            } else {
                Err(at(line, format!("`{}` takes {} arguments, found {}", toks[0], n - 1, toks.len() - 1)))
            }
        };
        let known = |v: &str, declared: &[String]| {
            if declared.iter().any(|d| d == v) {
                Ok(())
            } else {
                Err(at(line, Error::UnknownVertex(v.into())))
            }
        };
        match toks[0] {
            "vertex" => {
                arity(2)?;
                if declared.iter().any(|d| d == toks[1]) {
                    return Err(at(line, Error::DuplicateName(toks[1].into())));
                }
                declared.push(toks[1].into());
                b.add_vertex(toks[1]);
            }
            "edge" => {
                arity(6)?;
                known(toks[2], &declared)?;
                known(toks[3], &declared)?;
                let (l0, l1) = (label(toks[4], line, toks[1])?, label(toks[5], line, toks[1])?);
                b.add_edge(toks[1], toks[2], toks[3], l0, l1);
            }
            "loop" => {
                arity(5)?;
                known(toks[2], &declared)?;
                let (l0, l1) = (label(toks[3], line, toks[1])?, label(toks[4], line, toks[1])?);
                b.add_edge(toks[1], toks[2], toks[2], l0, l1);
            }
            "bs" => {
                arity(3)?;
                bs = Some((line, label(toks[1], line, "t")?, label(toks[2], line, "t")?));
            }
            other => return Err(at(line, format!("unknown directive `{other}`"))),
        }
    }
    match bs {
        Some((line, _, _)) if directives > 1 => Err(at(line, "`bs` must be the only directive")),
        Some((_, n, m)) => GbsGraph::bs(n, m),
        None => b.build(),
    }
}

/// Writes `g` in the format read by [`parse_graph`].
pub fn render_graph(g: &GbsGraph) -> String {
    let mut s = String::new();
    for v in g.vertex_names() {
        s.push_str(&format!("vertex {v}\n"));
    }
    for e in g.edges() {
        if e.is_loop() {
            s.push_str(&format!("loop {} {} {} {}\n", e.name, g.vertex_name(e.src), e.lambda0, e.lambda1));
        } else {
            let (a, b) = (g.vertex_name(e.src), g.vertex_name(e.dst));
            s.push_str(&format!("edge {} {a} {b} {} {}\n", e.name, e.lambda0, e.lambda1));
        }
    }
    s
}
