//! Exact kernels for the spherical Hecke algebra of `GL(n)` at a prime, the
//! amplifier linear system built from it, and the lattice-point counts that
//! control the amplified pre-trace formula.
//!
//! The crate is `no_std` and only needs `alloc`. IO, reports and the command
//! line live in the `supnorm` crate.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod amplifier;
pub mod arith;
pub mod combinat;
pub mod coset;
pub mod diophantine;
pub mod error;
pub mod hecke;
pub mod linalg;
pub mod poly;
pub mod satake;
pub mod sympoly;

pub use combinat::Partition;
pub use error::{Error, Result};
pub use hecke::{HeckeAlgebra, HeckeElement};
pub use sympoly::SymPoly;

/// Exact rational scalar used throughout the symbolic kernels.
pub type Rat = num_rational::BigRational;
