//! Computable symbolic coding for irreducible toral automorphisms.
//!
//! The crate covers the expansive (Pisot) and nonexpansive (Salem) cases:
//!
//! * [`algebra`]: integer polynomials, multiprecision roots, partial
//!   fractions, classification and the companion-matrix action on the torus.
//! * [`seqspace`]: finite windows onto two-sided sequences, the shift and
//!   `f(σ)`, and the central subspace `ker f(σ)` in coefficient form.
//! * [`coding`]: the one-sided homoclinic points, the coding map `ξ*`, the
//!   cocycle `d(n, v)`, torus encoding and boundedness diagnostics.
//! * [`betashift`]: greedy expansions, the quasi-greedy expansion of one and
//!   Parry admissibility.
//! * [`hofbauer`]: the Hofbauer–Takahashi chain, Perron data, the Parry
//!   measure and sampling.
//! * [`salem`]: zero insertion producing d-bounded sequences with high
//!   entropy, plus the entropy estimators.
//!
//! Everything here is `no_std` (with `alloc`); IO and file formats live in
//! the `salem-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod betashift;
pub mod coding;
mod error;
pub mod fixed;
pub mod hofbauer;
pub mod rng;
pub mod salem;
pub mod seqspace;

pub use error::{Error, Result};
