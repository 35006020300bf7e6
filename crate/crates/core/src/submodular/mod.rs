//! Combinatorial costs queried through a value oracle.
//!
//! For submodular costs the truthful deterministic optimum is a lattice
//! minimization, and the randomized optimum is a convex program over marginal
//! profiles whose objective is evaluated through the unique non-crossing
//! distribution with those marginals.

pub mod binary;
pub mod chain;
pub mod check;
pub mod convex;
pub mod deterministic;
pub mod lattice;
pub mod oracle;

pub use binary::{determinize_binary, BinaryRounding};
pub use chain::{
    chain_cost, interpret_marginals, objective_subgradient, uncross, ChainDistribution, MarginalProfile,
};
pub use check::{is_submodular, CheckMode, SubmodularVerdict};
pub use convex::{
    solve_randomized_submodular, solve_randomized_submodular_with, ConvexBackend, ConvexOptions,
    RandomizedSubmodularSolution,
};
pub use deterministic::{solve_deterministic_submodular, SubmodularBackend, SubmodularSolution};
pub use lattice::{in_truthful_lattice, join, meet, LatticePoint};
pub use oracle::{AdditiveOracle, CostOracle, OverheadOracle, TableOracle};
