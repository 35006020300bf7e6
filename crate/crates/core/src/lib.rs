//! Cost-optimal truthful mechanisms under partial verification.
//!
//! Every type shares one strictly increasing utility over outcomes, and a
//! reflexive reporting relation says which misreports are possible. The crate
//! finds cheapest truthful mechanisms for additive costs (min-cut for
//! deterministic, convex envelopes for randomized) and for combinatorial
//! submodular costs, and ships naive brute-force oracles to check them.


pub mod bench;
pub mod cnf;
pub mod cost;
pub mod envelope;
pub mod error;
pub mod generators;
pub mod instance;
pub mod io;
pub mod mincut;
pub mod oracle;
pub mod submodular;

pub use cost::{CostValue, Rational};
pub use error::{Error, Result};
pub use instance::{
    AdditiveCostMatrix, DeterministicMechanism, Instance, OutcomeSpace, RandomizedMechanism,
    ReportingRelation, Skeleton,
};
