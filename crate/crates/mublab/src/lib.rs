//! Numerical laboratory for quantum propagator kernels and
//! mutual-unbiasedness diagnostics.
//!
//! The library builds discretized time-evolution kernels for 1D potentials
//! (closed forms, time-sliced compositions, split-operator stepping, dense
//! spectral oracles), measures how close a kernel's position bases at times
//! 0 and t come to being mutually unbiased, and carries the analogous
//! machinery for the lattice free scalar field.

// validation uses !(x > 0.0) so NaN is rejected along with the sign
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod field;
pub mod kernels;
pub mod mub;
pub mod numerics;
pub mod trotter;
pub mod unbiasedness;

pub use error::{Error, Result};
