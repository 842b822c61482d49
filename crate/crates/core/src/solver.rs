//! Shared solver vocabulary and the algorithm dispatcher.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use thiserror::Error;

use crate::cost::{Cost, CostError, CostFunction, Labeling, LeafLabeling};
use crate::oracle::OracleConfig;
use crate::tree::Tree;
use crate::{dp, interval, oracle};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("the interval solver needs a binary tree")]
    NotBinaryTree,
    #[error("the interval solver only handles manhattan cost, got {0}")]
    NotManhattan(String),
    #[error("exhaustive search needs {needed} evaluations, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("leaf labeling covers {labeling} nodes but the tree has {tree}")]
    SizeMismatch { tree: usize, labeling: usize },
    #[error(transparent)]
    Cost(#[from] CostError),
}

impl SolveError {
    pub fn code(&self) -> &'static str {
        match self {
            SolveError::NotBinaryTree => "NotBinaryTree",
            SolveError::NotManhattan(_) => "NotManhattan",
            SolveError::BudgetExceeded { .. } => "BudgetExceeded",
            SolveError::SizeMismatch { .. } => "SizeMismatch",
            SolveError::Cost(e) => e.code(),
        }
    }
}

pub(crate) fn check_sizes(tree: &Tree, leaves: &LeafLabeling) -> Result<(), SolveError> {
    if tree.node_count() != leaves.node_count() {
        return Err(SolveError::SizeMismatch {
            tree: tree.node_count(),
            labeling: leaves.node_count(),
        });
    }
    Ok(())
}

/// Which optimal label to take when several are equally good.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieRule {
    #[default]
    Lowest,
    Highest,
    /// The lower median of the tied candidates.
    Midpoint,
}

impl TieRule {
    /// Picks from a nonempty ascending candidate list.
    pub fn pick<T: Copy>(self, ascending: &[T]) -> T {
        match self {
            TieRule::Lowest => ascending[0],
            TieRule::Highest => ascending[ascending.len() - 1],
            TieRule::Midpoint => ascending[(ascending.len() - 1) / 2],
        }
    }
}

impl FromStr for TieRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lowest" => Ok(TieRule::Lowest),
            "highest" => Ok(TieRule::Highest),
            "midpoint" => Ok(TieRule::Midpoint),
            _ => Err(format!("unknown tie rule {s:?}")),
        }
    }
}

/// A cost that may be infinite. Finite values order below `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtCost {
    Finite(Cost),
    Infinite,
}

impl ExtCost {
    pub fn finite(self) -> Option<Cost> {
        match self {
            ExtCost::Finite(c) => Some(c),
            ExtCost::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtCost::Finite(_))
    }
}

impl Add for ExtCost {
    type Output = ExtCost;

    fn add(self, rhs: ExtCost) -> ExtCost {
        match (self, rhs) {
            // Overflow is excluded up front by the lookup-table guard.
            (ExtCost::Finite(a), ExtCost::Finite(b)) => ExtCost::Finite(a.saturating_add(b)),
            _ => ExtCost::Infinite,
        }
    }
}

impl fmt::Display for ExtCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtCost::Finite(c) => write!(f, "{c}"),
            ExtCost::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Dp,
    Interval,
    Oracle,
    /// Interval for binary trees under manhattan cost, DP otherwise.
    Auto,
}

impl Algorithm {
    /// Resolves `Auto` against a concrete instance.
    pub fn resolve(self, tree: &Tree, cost: &CostFunction) -> Algorithm {
        match self {
            Algorithm::Auto if tree.is_binary() && cost.is_manhattan() => Algorithm::Interval,
            Algorithm::Auto => Algorithm::Dp,
            other => other,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Dp => "dp",
            Algorithm::Interval => "interval",
            Algorithm::Oracle => "oracle",
            Algorithm::Auto => "auto",
        }
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dp" => Ok(Algorithm::Dp),
            "interval" => Ok(Algorithm::Interval),
            "oracle" => Ok(Algorithm::Oracle),
            "auto" => Ok(Algorithm::Auto),
            _ => Err(format!("unknown algorithm {s:?}")),
        }
    }
}

/// Solves one instance with the requested algorithm.
///
/// The oracle returns the first optimum in its enumeration order and ignores
/// the tie rule.
pub fn solve(
    algorithm: Algorithm,
    tree: &Tree,
    leaves: &LeafLabeling,
    cost: &CostFunction,
    tie: TieRule,
    oracle_config: &OracleConfig,
) -> Result<Labeling, SolveError> {
    match algorithm.resolve(tree, cost) {
        Algorithm::Dp => dp::solve_dp(tree, leaves, cost, tie),
        Algorithm::Interval => {
            if !cost.is_manhattan() {
                return Err(SolveError::NotManhattan(cost.to_string()));
            }
            interval::solve_interval(tree, leaves, tie)
        }
        Algorithm::Oracle => {
            let mut set = oracle::brute_force_min(tree, leaves, cost, oracle_config)?;
            Ok(set.labelings.swap_remove(0))
        }
        Algorithm::Auto => unreachable!("resolve never yields Auto"),
    }
}
