//! Test-suite evaluation harness for sentence-level MT quality estimation.
//!
//! This crate carries everything that touches the outside world: the
//! tab-separated file formats, regular-expression compilation and labeling,
//! QE adapters (built-in baseline, score files, external commands), run
//! manifests and the `suiteval` command-line pipeline. The algorithms
//! themselves live in `suiteval-core`.

pub mod adapters;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod labeling;
pub mod manifest;
pub mod model_file;
pub mod pairsio;
pub mod predfile;
pub mod tsvio;
pub mod util;

pub use error::{HarnessError, HarnessResult};

/// Version stamp recorded in run manifests.
pub const TOOL_VERSION: &str = concat!("suiteval/", env!("CARGO_PKG_VERSION"));
