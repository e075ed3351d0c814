//! Command-line front end: file formats, random inputs, the verification
//! suites and parameter sweeps.

pub mod cli;
pub mod complex;
pub mod format;
pub mod random;
pub mod sweep;
pub mod verify;
