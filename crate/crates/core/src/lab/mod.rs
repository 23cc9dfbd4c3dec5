//! Conjecture lab: enumeration, per-semigroup checks, theorem suites and
//! bounded searches for extremal values.

pub mod checks;
pub mod enumerate;
pub mod replay;
pub mod rf;
pub mod search;
pub mod suites;
