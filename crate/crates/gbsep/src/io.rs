//! Reading graphs, modules and certificates from disk, and the JSON forms of
//! every report.

use std::fs;
use std::io::Read;
use std::path::Path;

use gbs_core::fpcohom::{FpModule, ModuleTable};
use gbs_core::gog::{parse_graph, GbsGraph};
use gbs_core::quotients::QuotientCert;
use serde::de::DeserializeOwned;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Core { path: String, source: gbs_core::Error },
    #[error("{path}: invalid JSON: {source}")]
    Json { path: String, source: serde_json::Error },
}

impl IoError {
    /// The library error underneath, if any.
    pub fn core(&self) -> Option<&gbs_core::Error> {
        match self {
            IoError::Core { source, .. } => Some(source),
            _ => None,
        }
    }
}

/// Reads a file, or standard input for `-`.
pub fn read_text(path: &Path, stdin: &mut dyn Read) -> Result<String, IoError> {
    let shown = path.display().to_string();
    let mut s = String::new();
    let r = if path.as_os_str() == "-" { stdin.read_to_string(&mut s).map(|_| s) } else { fs::read_to_string(path) };
    r.map_err(|source| IoError::Read { path: shown, source })
}

pub fn read_graph(path: &Path, stdin: &mut dyn Read) -> Result<GbsGraph, IoError> {
    let text = read_text(path, stdin)?;
    parse_graph(&text).map_err(|source| IoError::Core { path: path.display().to_string(), source })
}

fn read_json<T: DeserializeOwned>(path: &Path, stdin: &mut dyn Read) -> Result<T, IoError> {
    let text = read_text(path, stdin)?;
    serde_json::from_str(&text).map_err(|source| IoError::Json { path: path.display().to_string(), source })
}

/// Reads `{"prime": p, "dim": d, "actions": {name: rows}}` and checks it
/// against the relators of `g`.
pub fn read_module(path: &Path, g: &GbsGraph, stdin: &mut dyn Read) -> Result<FpModule, IoError> {
    let table: ModuleTable = read_json(path, stdin)?;
    let core = |source| IoError::Core { path: path.display().to_string(), source };
    let m = table.to_module(g).map_err(core)?;
    Ok(m)
}

pub fn read_cert(path: &Path, stdin: &mut dyn Read) -> Result<QuotientCert, IoError> {
    read_json(path, stdin)
}

/// Pretty JSON with a trailing newline; deterministic for a given value.
pub fn to_json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("report types serialize");
    s.push('\n');
    s
}

pub fn from_json<T: DeserializeOwned>(s: &str) -> serde_json::Result<T> {
    serde_json::from_str(s)
}
