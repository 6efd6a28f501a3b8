//! Filtering kernel for the `alldifferent` constraint.
//!
//! Four consistency levels over explicit finite domains, each behind the
//! same filter contract:
//!
//! - [`decomp`]: arc consistency on the binary disequality decomposition
//!   (the singleton rule);
//! - [`bounds`]: bound consistency via Hall intervals;
//! - [`range`]: range consistency via Hall sets;
//! - [`regin`]: hyper-arc consistency via maximum matching in the value
//!   graph.
//!
//! [`engine`] runs any level over multi-constraint problems to a global
//! fixpoint and embeds it in a deterministic backtracking solver.
//! [`oracle`] holds brute-force definitional references used by the test
//! suites; it is not a production path.
//!
//! The crate is `no_std` (with `alloc`) and does no IO; the companion
//! `alldiff-cli` crate carries file formats, generators and the binary.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bounds;
pub mod decomp;
pub mod engine;
pub mod model;
pub mod oracle;
pub mod range;
pub mod regin;

pub use engine::{propagate, solve, SearchStats, SolveMode, SolveResult};
pub use model::{
    compare_stores, is_solution, validate, AllDifferentConstraint, ConsistencyLevel, Domain,
    DomainStore, FilterOutcome, Infeasible, InfeasibleCause, ModelError, Problem, StoreOrdering,
    Value, VariableId,
};
