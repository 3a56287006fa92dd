//! Variationally discretized semilinear elliptic optimal control on the unit
//! square, together with an explicitly computable test that promotes a
//! computed KKT point to a global (or unique global) minimizer.
//!
//! The crate is `no_std` and only needs `alloc`. Everything that touches the
//! file system or a terminal lives in the `optcert` companion crate.
//!
//! Layout:
//!
//! * [`mesh`]: uniform Friedrichs–Keller triangulations and constraint node sets.
//! * [`linalg`]: CSR storage and banded direct solvers.
//! * [`quadrature`]: triangle quadrature rules.
//! * [`nonlinearity`]: the monotone nonlinearity and its structural constants.
//! * [`special`] and [`constants`]: Gamma/Beta, Gagliardo–Nirenberg bounds, the threshold.
//! * [`fem`]: P1 assembly, the discrete state solve, Ritz projection, exact `L^q` norms.
//! * [`kkt`]: the first-order system and its semismooth Newton solver.
//! * [`certificate`]: the global-optimality verdict.
//! * [`experiments`]: the benchmark scenarios and α sweeps.
#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::too_many_arguments)]

extern crate alloc;

pub mod certificate;
pub mod constants;
mod error;
pub mod experiments;
pub mod fem;
pub mod kkt;
pub mod linalg;
pub mod mesh;
pub mod nonlinearity;
pub mod quadrature;
pub mod special;

pub use error::{Error, Result};
