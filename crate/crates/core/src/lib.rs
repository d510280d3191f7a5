//! Computational tools for the growth of Lipschitz mapping class sets.
//!
//! The crate is organized around four pieces:
//!
//! - [`graded_lie`]: exact arithmetic in free graded Lie algebras over ℚ with
//!   Hall-basis normalization, plus an associative-embedding oracle.
//! - [`cw_spaces`]: the two-cell-plus-top-cell spaces `(S^ℓ ∨ S^m) ∪_ζ D^n`,
//!   parameter solving for a target growth exponent, and the degree
//!   constraint systems that Lipschitz cellular maps must satisfy.
//! - [`growth_count`]: exact lattice-point counts for those constraint
//!   systems, closed-form exponents, and exponent fitting.
//! - [`lip_cost`]: a small asymptotic cost calculus and numeric checkers for
//!   the Lipschitz budgets of the explicit constructions.

pub mod cw_spaces;
pub mod graded_lie;
pub mod growth_count;
pub mod lip_cost;
pub mod rational;

pub use rational::Q;
