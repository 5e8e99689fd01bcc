//! Integer polynomials, their roots and the companion-matrix action.

mod classify;
pub mod cyclotomic;
mod poly;
mod roots;
mod torus;

pub use classify::{classify, reducibility_warnings, PolyClass, ReducibilityWarning};
pub use poly::{IntPolynomial, Reciprocity};
pub use roots::{find_roots, partial_fractions, Root, RootClass, RootData, DEFAULT_DIGITS, TOL_CIRCLE};
pub use torus::{companion_apply, torus_orbit, TorusPoint};
