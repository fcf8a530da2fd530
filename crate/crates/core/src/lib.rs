//! Exact-arithmetic reductions between polynomial systems and the
//! shift-sparsification problem.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs; file formats, threads and the command line live
//! in the companion `shiftforge` crate.
//!
//! Pipeline overview:
//!
//! * [`ring`]: scalars over Z, Q, F_p and Z_q.
//! * [`poly`]: canonical sparse multivariate polynomials with shifts.
//! * [`circuit`]: arithmetic circuits with fan-in two products.
//! * [`quadratize`]: lowering of equation systems to quadratic binomials
//!   plus affine equations, and constant normalization.
//! * [`hn`]: the W-linear degree-3 instance whose sparsifying shifts are
//!   exactly the solutions of a system.
//! * [`amplify`]: products of disjoint copies and gap parameters.
//! * [`max3lin`]: the quadratic encoding of Max-3Lin instances.
//! * [`search`]: brute-force oracles over finite domains and boxes.

#![no_std]

extern crate alloc;

pub mod amplify;
pub mod circuit;
mod error;
pub mod hn;
pub mod max3lin;
pub mod poly;
pub mod quadratize;
pub mod ring;
pub mod search;

pub use error::{Error, Result};
pub use poly::{Monomial, SparsePoly};
pub use ring::{RingElement, RingSpec};

/// Default cap on the number of terms an expansion may produce.
pub const DEFAULT_TERM_CAP: usize = 1_000_000;

/// Default cap on the number of points an exhaustive search may visit.
pub const DEFAULT_POINT_CAP: u64 = 10_000_000;
