//! Monte Carlo laboratory, file formats and command line for empty-triangle
//! statistics. The exact geometry lives in `emptri-core`; this crate adds
//! threads, files and the experiment harness.

pub mod cli;
pub mod experiments;
pub mod io;
pub mod par;

pub use emptri_core as core;
