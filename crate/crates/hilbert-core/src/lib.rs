//! Hilbert functions of determinantal-style monomial families and of the
//! bigraded modules built from them.
//!
//! The crate is split into four layers:
//!
//! * [`exact_arith`]: big-integer binomials, polynomials, truncated series and
//!   rational generating functions.
//! * [`chain_enum`]: lattice-cell monomials, chain predicates and exhaustive
//!   counters used as oracles.
//! * [`closed_form`]: closed formulas, recursions and series for the chain
//!   counting families.
//! * [`module_analyzer`]: parameter validation, variety invariants and
//!   generator Hilbert polynomials for the modules `M_{l1,l2}`.
//!
//! [`verification`] runs the cross-check sweeps shared by the CLI and the
//! acceptance tests.

pub mod chain_enum;
pub mod closed_form;
pub mod exact_arith;
pub mod module_analyzer;
pub mod verification;
