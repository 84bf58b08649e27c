use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{FpMatrix, FpModule};
use crate::gog::GbsGraph;
use crate::{Error, Result};

/// A module with its action keyed by generator name, the form in which
/// modules are read and written. Generators left out act trivially.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModuleTable {
    pub prime: u64,
    pub dim: usize,
    pub actions: BTreeMap<String, Vec<Vec<i64>>>,
}

impl ModuleTable {
    pub fn from_module(g: &GbsGraph, m: &FpModule) -> Self {
        let actions = m
            .actions()
            .iter()
            .map(|(&x, a)| {
                let rows = a.to_rows().into_iter().map(|r| r.into_iter().map(|v| v as i64).collect()).collect();
                (String::from(g.generator_name(x)), rows)
            })
            .collect();
        Self { prime: m.prime(), dim: m.dim(), actions }
    }

    /// Resolves names against `g`; the result is not yet checked against the
    /// relators, see [`FpModule::check`].
    pub fn to_module(&self, g: &GbsGraph) -> Result<FpModule> {
        let mut actions = BTreeMap::new();
        for (name, rows) in &self.actions {
            let x = g
                .generator_by_name(name)
                .ok_or_else(|| Error::Precondition(format!("unknown generator `{name}`")))?;
            if rows.len() != self.dim || rows.iter().any(|r| r.len() != self.dim) {
                return Err(Error::Dimension(format!("action of `{name}` is not {0}x{0}", self.dim)));
            }
            actions.insert(x, FpMatrix::from_rows(self.prime, rows)?);
        }
        FpModule::new(g, self.prime, self.dim, actions)
    }
}
