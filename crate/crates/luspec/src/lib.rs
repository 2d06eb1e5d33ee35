//! Graph construction IO, numeric spectra and the `luspec` command line.

pub mod cli;
pub mod export;
pub mod oracle;
pub mod verify;

pub use luspec_core as core;
