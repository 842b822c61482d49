//! Edge-cost functions, leaf labelings and total-cost evaluation.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::tree::{NodeId, Tree};

/// An integer node label. Negative values are allowed; only differences matter.
pub type Label = i64;

/// A finite, nonnegative cost.
pub type Cost = u64;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CostError {
    #[error("cost table has {len} entries; difference {difference} is out of range")]
    DifferenceOutOfRange { difference: u64, len: usize },
    #[error("cost table must start with 0, found {0}")]
    NonZeroOrigin(Cost),
    #[error("cost table is not strictly increasing at difference {0}")]
    NotStrictlyIncreasing(usize),
    #[error("cost table is empty")]
    EmptyTable,
    #[error("power exponent must be a positive integer")]
    ZeroExponent,
    #[error("unrecognised cost spec {0:?}; expected manhattan, power:<n> or table:<c0,c1,...>")]
    BadSpec(String),
    #[error("cost of {edges} edges at difference {max_difference} would overflow")]
    CostOverflowRisk { edges: usize, max_difference: u64 },
    #[error("node {0} has no label")]
    MissingNodeLabel(usize),
    #[error("leaf {0} is labeled more than once")]
    DuplicateLeafLabel(usize),
    #[error("node {0} is not a leaf")]
    NotALeaf(usize),
    #[error("node {0} does not exist")]
    UnknownNode(usize),
    #[error("labeling gives leaf {node} the value {got}, expected {expected}")]
    LeafMismatch {
        node: usize,
        got: Label,
        expected: Label,
    },
}

impl CostError {
    pub fn code(&self) -> &'static str {
        match self {
            CostError::DifferenceOutOfRange { .. } => "DifferenceOutOfRange",
            CostError::NonZeroOrigin(_) => "NonZeroOrigin",
            CostError::NotStrictlyIncreasing(_) => "NotStrictlyIncreasing",
            CostError::EmptyTable => "EmptyTable",
            CostError::ZeroExponent => "ZeroExponent",
            CostError::BadSpec(_) => "BadCostSpec",
            CostError::CostOverflowRisk { .. } => "CostOverflowRisk",
            CostError::MissingNodeLabel(_) => "MissingNodeLabel",
            CostError::DuplicateLeafLabel(_) => "DuplicateLeafLabel",
            CostError::NotALeaf(_) => "NotALeaf",
            CostError::UnknownNode(_) => "UnknownNode",
            CostError::LeafMismatch { .. } => "LeafMismatch",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Kind {
    Manhattan,
    Power(u32),
    Table(Vec<Cost>),
}

/// A strictly increasing edge cost θ over label differences with θ(0) = 0.
///
/// Parses from and prints as `manhattan`, `power:<λ>` or `table:<c0,c1,...>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostFunction(Kind);

impl CostFunction {
    pub fn manhattan() -> Self {
        CostFunction(Kind::Manhattan)
    }

    /// θ(d) = d^λ. `power(1)` is Manhattan cost but keeps its own identity.
    pub fn power(exponent: u32) -> Result<Self, CostError> {
        if exponent == 0 {
            return Err(CostError::ZeroExponent);
        }
        Ok(CostFunction(Kind::Power(exponent)))
    }

    /// θ(d) = `table[d]`. Checked exhaustively for θ(0) = 0 and strict increase.
    pub fn table(table: Vec<Cost>) -> Result<Self, CostError> {
        match table.first() {
            None => return Err(CostError::EmptyTable),
            Some(&c) if c != 0 => return Err(CostError::NonZeroOrigin(c)),
            Some(_) => {}
        }
        if let Some(i) = table.windows(2).position(|w| w[0] >= w[1]) {
            return Err(CostError::NotStrictlyIncreasing(i + 1));
        }
        Ok(CostFunction(Kind::Table(table)))
    }

    pub fn is_manhattan(&self) -> bool {
        matches!(self.0, Kind::Manhattan)
    }

    /// θ(d).
    pub fn theta(&self, d: u64) -> Result<Cost, CostError> {
        match &self.0 {
            Kind::Manhattan => Ok(d),
            Kind::Power(exp) => d.checked_pow(*exp).ok_or(CostError::CostOverflowRisk {
                edges: 1,
                max_difference: d,
            }),
            Kind::Table(table) => usize::try_from(d)
                .ok()
                .and_then(|i| table.get(i).copied())
                .ok_or(CostError::DifferenceOutOfRange {
                    difference: d,
                    len: table.len(),
                }),
        }
    }

    /// θ(0..m) as a lookup table, after checking that `edges` edges each
    /// costing θ(m − 1) still fit in a [`Cost`].
    pub fn lookup(&self, m: u64, edges: usize) -> Result<Vec<Cost>, CostError> {
        let max_difference = m.saturating_sub(1);
        let risk = CostError::CostOverflowRisk {
            edges,
            max_difference,
        };
        let worst = self.theta(max_difference).map_err(|e| match e {
            CostError::CostOverflowRisk { .. } => risk.clone(),
            other => other,
        })?;
        // Keep one extra edge of headroom: the up phase adds θ to subtree sums.
        (edges as u64)
            .checked_add(1)
            .and_then(|e| e.checked_mul(worst))
            .ok_or(risk)?;
        (0..m).map(|d| self.theta(d)).collect()
    }
}

impl fmt::Display for CostFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Kind::Manhattan => write!(f, "manhattan"),
            Kind::Power(exp) => write!(f, "power:{exp}"),
            Kind::Table(table) => {
                write!(f, "table:")?;
                for (i, c) in table.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for CostFunction {
    type Err = CostError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CostError::BadSpec(s.to_string());
        let s = s.trim();
        if s == "manhattan" {
            return Ok(CostFunction::manhattan());
        }
        if let Some(exp) = s.strip_prefix("power:") {
            return CostFunction::power(exp.trim().parse().map_err(|_| bad())?);
        }
        if let Some(entries) = s.strip_prefix("table:") {
            let table = entries
                .split(',')
                .map(|c| c.trim().parse::<Cost>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| bad())?;
            return CostFunction::table(table);
        }
        Err(bad())
    }
}

/// Extremes of the leaf labels: `g_min`, `g_max` and the range size `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelRange {
    pub g_min: Label,
    pub g_max: Label,
    pub m: u64,
}

impl LabelRange {
    pub fn contains(&self, label: Label) -> bool {
        (self.g_min..=self.g_max).contains(&label)
    }

    /// Offset of `label` from `g_min`.
    pub fn offset(&self, label: Label) -> usize {
        label.abs_diff(self.g_min) as usize
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + Clone {
        self.g_min..=self.g_max
    }
}

/// The observed labels of the leaves of one tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafLabeling {
    labels: Vec<Option<Label>>,
    range: LabelRange,
}

impl LeafLabeling {
    /// Every leaf of `tree` must appear exactly once and nothing else may.
    pub fn new(
        tree: &Tree,
        pairs: impl IntoIterator<Item = (NodeId, Label)>,
    ) -> Result<Self, CostError> {
        let mut labels = vec![None; tree.node_count()];
        for (node, label) in pairs {
            let slot = labels
                .get_mut(node.index())
                .ok_or(CostError::UnknownNode(node.index()))?;
            if !tree.is_leaf(node) {
                return Err(CostError::NotALeaf(node.index()));
            }
            if slot.replace(label).is_some() {
                return Err(CostError::DuplicateLeafLabel(node.index()));
            }
        }
        if let Some(missing) = tree.leaves().find(|v| labels[v.index()].is_none()) {
            return Err(CostError::MissingNodeLabel(missing.index()));
        }
        let values = labels.iter().flatten();
        let g_min = *values.clone().min().expect("a tree has at least one leaf");
        let g_max = *values.max().expect("a tree has at least one leaf");
        let range = LabelRange {
            g_min,
            g_max,
            m: g_max.abs_diff(g_min) + 1,
        };
        Ok(LeafLabeling { labels, range })
    }

    /// Pairs `values` with the leaves of `tree` in ascending id order.
    pub fn from_leaf_values(tree: &Tree, values: &[Label]) -> Result<Self, CostError> {
        let leaves: Vec<NodeId> = tree.leaves().collect();
        if values.len() < leaves.len() {
            return Err(CostError::MissingNodeLabel(leaves[values.len()].index()));
        }
        if values.len() > leaves.len() {
            return Err(CostError::UnknownNode(tree.node_count()));
        }
        Self::new(tree, leaves.into_iter().zip(values.iter().copied()))
    }

    pub fn get(&self, node: NodeId) -> Option<Label> {
        self.labels.get(node.index()).copied().flatten()
    }

    pub fn range(&self) -> LabelRange {
        self.range
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// `(leaf, label)` pairs in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = (NodeId, Label)> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(i, l)| l.map(|l| (NodeId::new(i), l)))
    }

    /// Applies `f` to every leaf label.
    pub fn map(&self, f: impl Fn(Label) -> Label) -> Self {
        let labels: Vec<Option<Label>> = self.labels.iter().map(|l| l.map(&f)).collect();
        let values = labels.iter().flatten();
        let g_min = *values.clone().min().expect("nonempty");
        let g_max = *values.max().expect("nonempty");
        LeafLabeling {
            labels,
            range: LabelRange {
                g_min,
                g_max,
                m: g_max.abs_diff(g_min) + 1,
            },
        }
    }
}

/// `(g_min, g_max, m)` of a leaf labeling.
pub fn label_range(leaves: &LeafLabeling) -> LabelRange {
    leaves.range()
}

/// A label for every node together with its total cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    pub values: Vec<Label>,
    pub total_cost: Cost,
}

impl Labeling {
    /// Evaluates `values` under `cost` and checks agreement with `leaves`.
    pub fn new(
        tree: &Tree,
        cost: &CostFunction,
        leaves: &LeafLabeling,
        values: Vec<Label>,
    ) -> Result<Self, CostError> {
        for (leaf, expected) in leaves.iter() {
            let got = *values
                .get(leaf.index())
                .ok_or(CostError::MissingNodeLabel(leaf.index()))?;
            if got != expected {
                return Err(CostError::LeafMismatch {
                    node: leaf.index(),
                    got,
                    expected,
                });
            }
        }
        let total_cost = eval_total(tree, cost, &values)?;
        Ok(Labeling { values, total_cost })
    }

    pub fn get(&self, node: NodeId) -> Label {
        self.values[node.index()]
    }
}

/// Σ over edges (parent, child) of θ(|π(parent) − π(child)|).
pub fn eval_total(tree: &Tree, cost: &CostFunction, labels: &[Label]) -> Result<Cost, CostError> {
    if labels.len() < tree.node_count() {
        return Err(CostError::MissingNodeLabel(labels.len()));
    }
    let mut total: Cost = 0;
    for (parent, child) in tree.edges() {
        let d = labels[parent.index()].abs_diff(labels[child.index()]);
        total = total
            .checked_add(cost.theta(d)?)
            .ok_or(CostError::CostOverflowRisk {
                edges: tree.edge_count(),
                max_difference: d,
            })?;
    }
    Ok(total)
}
