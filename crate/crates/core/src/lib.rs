//! Minimum-cost integer labeling of rooted trees.
//!
//! Leaves carry observed integer labels; the internal nodes are to be
//! labeled so that the summed edge cost `θ(|label difference|)` is minimal,
//! for a strictly increasing θ with θ(0) = 0. Two solvers are provided:
//!
//! - [`dp::solve_dp`]: dynamic programming over the leaf label range, any
//!   tree shape and any θ, O(N·m²).
//! - [`interval::solve_interval`]: interval propagation for Manhattan cost
//!   on binary trees, O(N).
//!
//! [`oracle::brute_force_min`] enumerates every labeling and is the ground
//! truth for both. [`ktuple`] extends the problem to nondecreasing tuples.

pub mod bench;
pub mod check;
pub mod cli;
pub mod cost;
pub mod dp;
pub mod generate;
pub mod interval;
pub mod ktuple;
pub mod newick;
pub mod oracle;
pub mod solver;
pub mod tree;

pub use cost::{
    eval_total, label_range, Cost, CostFunction, Label, LabelRange, Labeling, LeafLabeling,
};
pub use solver::{solve, Algorithm, ExtCost, SolveError, TieRule};
pub use tree::{build_tree, NodeId, Tree};
