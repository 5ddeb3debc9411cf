//! Kernelization engine and exact oracles for correlation clustering on
//! fuzzy weighted graphs.

#![allow(clippy::needless_range_loop)]

pub mod clustering;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod pipelines;
pub mod reductions;
pub mod rules;
pub mod simple;
pub mod solver;
pub mod structure;
pub mod verify;

pub use clustering::{cost, is_solution, split_disconnected, Clustering};
pub use error::{Error, Result};
pub use graph::{EdgeKind, FuzzyGraph, PairSummary, VertexId};
pub use pipelines::{
    closure_kernelize, degeneracy_kernelize, instance_stats, kernelize, InstanceStats, KernelResult, KernelTrace, Mode,
    NoReason, Verdict,
};
pub use rules::{apply_rule, replay, RuleOutcome, TraceEntry, TraceOp};
pub use simple::SimpleGraph;
pub use solver::{enumerate_partitions, exact_decide, optimal_clustering, optimal_cost, SolverLimits};
pub use structure::{ClosureReport, DegeneracyOrdering};
pub use reductions::{
    brute_force_clique, brute_force_multicut, brute_force_sat, clique_to_cc_star, multicut_to_cc, sat3_to_tree_multicut,
    subdivide_real_edges, tree_multicut_to_cc, CnfFormula, MulticutInstance,
};
pub use generators::{generate, GenSpec, Generated, Planted, PlantedInstance};
