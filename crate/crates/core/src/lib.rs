//! Weight modules of the restricted unrolled quantum group of sl2 at the even
//! root of unity `q = exp(iπ/r)`, the ribbon structure on them, and the
//! renormalized link invariants built from cutting links open along
//! generically colored components.
//!
//! The crate is `no_std` and only needs `alloc`. Parsing, file formats and the
//! command line live in the `rtcalc` crate.

#![no_std]

extern crate alloc;

pub mod cat;
pub mod invariant;
pub mod linalg;
pub mod qarith;
pub mod repr;
pub mod tangle;

mod tol;

pub use linalg::{CMatrix, C64};
pub use qarith::GlobalParams;
pub use tol::Tolerances;
