//! Number-theoretic and dynamical machinery for sparse-orbit equidistribution
//! experiments at desk scale.
//!
//! The crate has two halves that meet in [`equi`]:
//!
//! * **Arithmetic.** Exact integer arithmetic ([`arith`]), Dirichlet
//!   characters with exact root-of-unity values ([`characters`]),
//!   power-residue counting and its decomposition into scaled characters
//!   ([`powres`]), and complete exponential sums with polynomial phases
//!   ([`expsums`]).
//! * **Dynamics.** Continued fractions with arbitrary-precision convergents
//!   ([`diophantine`]) and explicit rigid systems over irrational rotations:
//!   skew products and special flows driven by lacunary Fourier cocycles
//!   ([`dynamics`]).
//!
//! [`equi`] computes sparse ergodic averages (orbit times `i^C`), weighted
//! averages against power-residue counts, and Fourier-mode discrepancy
//! reports. [`cli`] wraps everything in a deterministic experiment runner;
//! the `sparse-orbits` binary is a thin shell around it.
//!
//! Everything is exact where it can be: residue arithmetic in 128-bit
//! intermediates, character values as rational phases, rotation orbits as
//! big rationals reduced mod 1. Floating point only appears after a final
//! conversion, and quantities whose exponents overflow `f64` (convergent
//! denominators grow doubly exponentially) go through [`scaled::Scaled`].
//!
//! See the `examples/` directory for one runnable example per capability.

pub mod arith;
pub mod characters;
pub mod cli;
pub mod diophantine;
pub mod dynamics;
pub mod equi;
pub mod error;
pub mod expsums;
pub mod powres;
pub mod scaled;

pub use error::{Error, Result};
