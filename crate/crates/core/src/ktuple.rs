//! Uniform k-tuple labelings.
//!
//! Every node carries a nondecreasing tuple of `k` integers and an edge costs
//! the sum of θ over the coordinate-wise differences. The solver handles
//! each coordinate as an independent scalar problem and then audits that the
//! assembled tuples are still nondecreasing. When they are, the total is the
//! sum of `k` scalar optima, which is a lower bound for the constrained
//! problem, so the result is optimal. When they are not, the solver reports
//! the offending node instead of repairing it.

use thiserror::Error;

use crate::cost::{Cost, CostError, CostFunction, Label, LeafLabeling};
use crate::newick::{parse_named, write_newick, NewickError};
use crate::oracle::OracleConfig;
use crate::solver::{solve, Algorithm, SolveError, TieRule};
use crate::tree::{NodeId, Tree};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TupleError {
    #[error("tuple width must be positive")]
    ZeroWidth,
    #[error("node {node} has a tuple of {found} values, expected {expected}")]
    WrongWidth {
        node: usize,
        expected: usize,
        found: usize,
    },
    #[error("tuple at node {0} is not nondecreasing")]
    TupleNotMonotone(usize),
    #[error("node {0} has no tuple")]
    MissingNodeLabel(usize),
    #[error("node {0} is not a leaf")]
    NotALeaf(usize),
    #[error("leaf {0} is labeled more than once")]
    DuplicateLeafLabel(usize),
    #[error("leaf name {0:?} is not a '|'-separated list of integers")]
    NonIntegerLeafName(String),
    #[error(
        "per-coordinate solutions break monotonicity at node {node} \
         (coordinates {coordinate} and {}); reproducer: {reproducer}",
        coordinate + 1
    )]
    TupleDecompositionNotMonotone {
        node: usize,
        coordinate: usize,
        reproducer: String,
    },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Newick(#[from] NewickError),
}

impl TupleError {
    pub fn code(&self) -> &'static str {
        match self {
            TupleError::ZeroWidth => "ZeroWidth",
            TupleError::WrongWidth { .. } => "WrongWidth",
            TupleError::TupleNotMonotone(_) => "TupleNotMonotone",
            TupleError::MissingNodeLabel(_) => "MissingNodeLabel",
            TupleError::NotALeaf(_) => "NotALeaf",
            TupleError::DuplicateLeafLabel(_) => "DuplicateLeafLabel",
            TupleError::NonIntegerLeafName(_) => "NonIntegerLeafName",
            TupleError::TupleDecompositionNotMonotone { .. } => "TupleDecompositionNotMonotone",
            TupleError::Solve(e) => e.code(),
            TupleError::Newick(e) => e.code(),
        }
    }
}

impl From<CostError> for TupleError {
    fn from(e: CostError) -> Self {
        TupleError::Solve(SolveError::Cost(e))
    }
}

fn check_tuple(node: usize, k: usize, tuple: &[Label]) -> Result<(), TupleError> {
    if tuple.len() != k {
        return Err(TupleError::WrongWidth {
            node,
            expected: k,
            found: tuple.len(),
        });
    }
    if tuple.windows(2).any(|w| w[0] > w[1]) {
        return Err(TupleError::TupleNotMonotone(node));
    }
    Ok(())
}

/// Nondecreasing `k`-tuples on every leaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleLeafLabeling {
    k: usize,
    tuples: Vec<Option<Vec<Label>>>,
}

impl TupleLeafLabeling {
    pub fn new(
        tree: &Tree,
        k: usize,
        pairs: impl IntoIterator<Item = (NodeId, Vec<Label>)>,
    ) -> Result<Self, TupleError> {
        if k == 0 {
            return Err(TupleError::ZeroWidth);
        }
        let mut tuples = vec![None; tree.node_count()];
        for (node, tuple) in pairs {
            let i = node.index();
            if i >= tuples.len() || !tree.is_leaf(node) {
                return Err(TupleError::NotALeaf(i));
            }
            check_tuple(i, k, &tuple)?;
            if tuples[i].replace(tuple).is_some() {
                return Err(TupleError::DuplicateLeafLabel(i));
            }
        }
        if let Some(missing) = tree.leaves().find(|v| tuples[v.index()].is_none()) {
            return Err(TupleError::MissingNodeLabel(missing.index()));
        }
        Ok(TupleLeafLabeling { k, tuples })
    }

    /// Pairs `values` with the leaves of `tree` in ascending id order.
    pub fn from_leaf_values(
        tree: &Tree,
        k: usize,
        values: &[Vec<Label>],
    ) -> Result<Self, TupleError> {
        Self::new(tree, k, tree.leaves().zip(values.iter().cloned()))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, node: NodeId) -> Option<&[Label]> {
        self.tuples.get(node.index()).and_then(|t| t.as_deref())
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, &[Label])> + '_ {
        self.tuples
            .iter()
            .enumerate()
            .filter_map(|(i, t)| t.as_deref().map(|t| (NodeId::new(i), t)))
    }

    /// The scalar problem for one coordinate.
    pub fn coordinate(&self, tree: &Tree, i: usize) -> Result<LeafLabeling, TupleError> {
        Ok(LeafLabeling::new(
            tree,
            self.iter().map(|(v, t)| (v, t[i])),
        )?)
    }
}

/// A nondecreasing tuple on every node and the total stretch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleLabeling {
    pub k: usize,
    pub values: Vec<Vec<Label>>,
    pub total_cost: Cost,
}

/// Σ over edges of Σ over coordinates of θ(|difference|).
pub fn tuple_cost(
    tree: &Tree,
    cost: &CostFunction,
    values: &[Vec<Label>],
) -> Result<Cost, TupleError> {
    if values.len() < tree.node_count() {
        return Err(TupleError::MissingNodeLabel(values.len()));
    }
    let k = values.first().map_or(0, Vec::len);
    for (node, tuple) in values.iter().enumerate() {
        check_tuple(node, k, tuple)?;
    }
    let mut total: Cost = 0;
    for (parent, child) in tree.edges() {
        for (a, b) in values[parent.index()].iter().zip(&values[child.index()]) {
            let d = a.abs_diff(*b);
            total = total
                .checked_add(cost.theta(d)?)
                .ok_or(CostError::CostOverflowRisk {
                    edges: tree.edge_count(),
                    max_difference: d,
                })?;
        }
    }
    Ok(total)
}

/// Solves each coordinate with `algorithm` (`Auto` picks interval for binary
/// trees under manhattan cost) and audits the assembled tuples.
pub fn solve_ktuple(
    tree: &Tree,
    leaves: &TupleLeafLabeling,
    cost: &CostFunction,
    algorithm: Algorithm,
    tie: TieRule,
) -> Result<TupleLabeling, TupleError> {
    let k = leaves.k();
    let oracle = OracleConfig::default();
    let mut values = vec![Vec::with_capacity(k); tree.node_count()];
    let mut total: Cost = 0;
    for i in 0..k {
        let scalar = leaves.coordinate(tree, i)?;
        let labeling = solve(algorithm, tree, &scalar, cost, tie, &oracle)?;
        total += labeling.total_cost;
        for (tuple, label) in values.iter_mut().zip(labeling.values) {
            tuple.push(label);
        }
    }
    for (node, tuple) in values.iter().enumerate() {
        if let Some(coordinate) = tuple.windows(2).position(|w| w[0] > w[1]) {
            return Err(TupleError::TupleDecompositionNotMonotone {
                node,
                coordinate,
                reproducer: serialize_tuple_leaves(tree, leaves),
            });
        }
    }
    let total_cost = tuple_cost(tree, cost, &values)?;
    assert_eq!(
        total_cost, total,
        "tuple cost must equal the sum of coordinate optima"
    );
    Ok(TupleLabeling {
        k,
        values,
        total_cost,
    })
}

fn join(tuple: &[Label]) -> String {
    tuple
        .iter()
        .map(Label::to_string)
        .collect::<Vec<_>>()
        .join("|")
}

/// Parses Newick whose leaf names are `a|b|c` tuples; `k` is taken from the
/// first leaf.
pub fn parse_tuple_newick(text: &str) -> Result<(Tree, TupleLeafLabeling), TupleError> {
    let named = parse_named(text)?;
    let mut pairs = Vec::with_capacity(named.tree.leaf_count());
    for leaf in named.tree.leaves() {
        let name = &named.names[leaf.index()];
        let tuple = name
            .split('|')
            .map(|part| part.trim().parse::<Label>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| TupleError::NonIntegerLeafName(name.clone()))?;
        pairs.push((leaf, tuple));
    }
    let k = pairs.first().map_or(0, |(_, t)| t.len());
    let leaves = TupleLeafLabeling::new(&named.tree, k, pairs)?;
    Ok((named.tree, leaves))
}

/// Tuple Newick with only the leaf tuples.
pub fn serialize_tuple_leaves(tree: &Tree, leaves: &TupleLeafLabeling) -> String {
    write_newick(tree, |v| leaves.get(v).map(join).unwrap_or_default())
}

/// Tuple Newick with every node's tuple.
pub fn serialize_tuple_labeling(tree: &Tree, labeling: &TupleLabeling) -> String {
    write_newick(tree, |v| join(&labeling.values[v.index()]))
}
