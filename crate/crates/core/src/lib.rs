//! Numerical semigroup laboratory.
//!
//! Invariants of numerical semigroups (minimal presentations, graded Betti
//! numbers, type, Frobenius data, tangent-cone Hilbert functions and
//! Hilbert-series numerators), together with enumeration engines and a
//! harness that checks known theorems and probes open problems over bounded
//! families.

pub mod classify;
pub mod error;
pub mod factorization;
pub mod lab;
pub mod linalg;
pub mod report;
pub mod resolution;
pub mod semigroup;
pub mod tangent_cone;

pub use error::{Error, Result};
pub use semigroup::{AperySet, Invariants, NumericalSemigroup, PseudoFrobeniusSet};
