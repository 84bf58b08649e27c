//! File formats and the `gbsep` command line for [`gbs_core`].

pub mod cli;
pub mod io;

pub use cli::{run, Outcome};
