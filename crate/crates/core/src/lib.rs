//! Kernel interpolation in reproducing kernel Hilbert spaces, together with the
//! machinery to check its convergence empirically.
//!
//! The crate is organised bottom-up:
//!
//! - [`kernels`]: translation-invariant positive definite kernels, Gram matrices,
//!   Cholesky certification of positive definiteness and a Hölder-exponent estimator.
//! - [`geometry`]: box domains, point sequences (uniform random, Halton, farthest point)
//!   and grid-based fill distances.
//! - [`rkhs`]: finite kernel combinations, exact native-space inner products and norms,
//!   interpolant fitting and the error functionals.
//! - [`lab`]: convergence experiments, log-log rate fits, error-bound checks and the
//!   compactly supported counterexample.
//! - [`cli`]: the command-line front end used by the `rkhs-lab` binary.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod kernels;
pub mod lab;
pub mod linalg;
pub mod plot;
pub mod rkhs;

pub use error::{Error, Result};
pub use geometry::{Domain, Generator, PointSequence, PointSet};
pub use kernels::{Family, GramMatrix, JitterPolicy, Kernel, KernelSpec};
pub use rkhs::{FitOptions, Interpolant, KernelCombination};
