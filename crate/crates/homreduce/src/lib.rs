//! A toolkit of constructive reductions between graph coloring,
//! homomorphism and subgraph problems, paired with exact solvers and
//! post-hoc verifiers.
//!
//! The chain goes 3-coloring -> list homomorphism (over a grouped graph)
//! -> homomorphism (via rigidity gadgets) -> a family of subgraph
//! isomorphism instances (via vertex replication). Every construction ships
//! with a verifier that recomputes its claimed properties, and every witness
//! can be transported across the reductions in both directions. The
//! `parallel` feature (default) runs the data-parallel inner loops on rayon;
//! without it everything falls back to sequential code with identical
//! results.

pub mod bench;
pub mod gadgets;
pub mod graph;
pub mod io;
pub mod naive;
pub mod partition;
pub mod pipeline;
pub mod random;
pub mod reductions;
pub mod solver;

pub use graph::{Color, Coloring, SimpleGraph, Vertex};
pub use solver::{SolveBudget, SolveOutcome, Witness};
