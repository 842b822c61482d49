//! Exhaustive reference solver.
//!
//! Tries every assignment of `[g_min, g_max]` labels to the internal nodes
//! and keeps the cheapest. Nothing is pruned: the only shortcut is that each
//! edge's cost is added once, when its parent is assigned, and internal
//! nodes are assigned in postorder so both endpoints are known by then.
//! Assignments are visited in lexicographic order over the internal nodes
//! taken in postorder, labels ascending.

use crate::cost::{Cost, CostFunction, Label, Labeling, LeafLabeling};
use crate::solver::{check_sizes, SolveError};
use crate::tree::{NodeId, Tree};

/// Environment variable that overrides [`OracleConfig::budget`].
pub const BUDGET_ENV: &str = "TREELABEL_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Maximum number of complete assignments to evaluate.
    pub budget: u64,
    /// Maximum number of optimal labelings kept in [`OptimumSet::labelings`].
    pub labeling_cap: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            budget: 10_000_000,
            labeling_cap: 1024,
        }
    }
}

impl OracleConfig {
    /// Defaults, with the budget taken from `TREELABEL_BUDGET` when it parses.
    pub fn from_env() -> Self {
        let mut config = OracleConfig::default();
        if let Some(budget) = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
        {
            config.budget = budget;
        }
        config
    }
}

/// Every optimum of one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimumSet {
    pub cost: Cost,
    /// Optimal labelings in enumeration order, at most `labeling_cap` of them.
    pub labelings: Vec<Labeling>,
    /// Set when more optimal labelings exist than were kept.
    pub truncated: bool,
    /// Every root label used by some optimum, ascending. Never truncated.
    pub root_labels: Vec<Label>,
    node_labels: Vec<Vec<Label>>,
}

impl OptimumSet {
    /// Every label `node` takes in some optimum, ascending. Never truncated.
    pub fn labels_of(&self, node: NodeId) -> &[Label] {
        &self.node_labels[node.index()]
    }
}

struct Search<'a> {
    tree: &'a Tree,
    order: Vec<NodeId>,
    theta: Vec<Cost>,
    g_min: Label,
    width: usize,
    values: Vec<Label>,
    best: Cost,
    optima: Vec<Labeling>,
    truncated: bool,
    seen: Vec<bool>,
    cap: usize,
}

impl Search<'_> {
    fn run(&mut self, level: usize, partial: Cost) {
        if level == self.order.len() {
            self.record(partial);
            return;
        }
        let node = self.order[level];
        for offset in 0..self.width {
            let label = self.g_min + offset as Label;
            self.values[node.index()] = label;
            let mut sum = partial;
            for &child in self.tree.children(node) {
                sum += self.theta[label.abs_diff(self.values[child.index()]) as usize];
            }
            self.run(level + 1, sum);
        }
    }

    fn record(&mut self, total: Cost) {
        if total > self.best {
            return;
        }
        if total < self.best {
            self.best = total;
            self.optima.clear();
            self.truncated = false;
            self.seen.fill(false);
        }
        for (node, &label) in self.values.iter().enumerate() {
            let offset = label.abs_diff(self.g_min) as usize;
            self.seen[node * self.width + offset] = true;
        }
        if self.optima.len() < self.cap {
            self.optima.push(Labeling {
                values: self.values.clone(),
                total_cost: total,
            });
        } else {
            self.truncated = true;
        }
    }
}

/// Exact optimum by exhaustive enumeration.
pub fn brute_force_min(
    tree: &Tree,
    leaves: &LeafLabeling,
    cost: &CostFunction,
    config: &OracleConfig,
) -> Result<OptimumSet, SolveError> {
    check_sizes(tree, leaves)?;
    let range = leaves.range();
    let order: Vec<NodeId> = tree
        .postorder()
        .iter()
        .copied()
        .filter(|&v| !tree.is_leaf(v))
        .collect();
    let needed = u32::try_from(order.len())
        .ok()
        .and_then(|k| range.m.checked_pow(k));
    match needed {
        Some(n) if n <= config.budget => {}
        _ => {
            return Err(SolveError::BudgetExceeded {
                needed: format!("{}^{}", range.m, order.len()),
                budget: config.budget,
            })
        }
    }
    let theta = cost.lookup(range.m, tree.edge_count())?;
    let width = range.m as usize;

    let mut values = vec![range.g_min; tree.node_count()];
    for (leaf, label) in leaves.iter() {
        values[leaf.index()] = label;
    }
    let mut search = Search {
        tree,
        order,
        theta,
        g_min: range.g_min,
        width,
        values,
        best: Cost::MAX,
        optima: Vec::new(),
        truncated: false,
        seen: vec![false; tree.node_count() * width],
        cap: config.labeling_cap.max(1),
    };
    search.run(0, 0);

    let node_labels: Vec<Vec<Label>> = search
        .seen
        .chunks(width)
        .map(|row| {
            range
                .labels()
                .zip(row)
                .filter(|(_, &hit)| hit)
                .map(|(label, _)| label)
                .collect()
        })
        .collect();
    Ok(OptimumSet {
        cost: search.best,
        labelings: search.optima,
        truncated: search.truncated,
        root_labels: node_labels[tree.root().index()].clone(),
        node_labels,
    })
}

/// Every label `node` carries in at least one optimal labeling, ascending.
pub fn enumerate_optimal(
    tree: &Tree,
    leaves: &LeafLabeling,
    cost: &CostFunction,
    node: NodeId,
    config: &OracleConfig,
) -> Result<Vec<Label>, SolveError> {
    let set = brute_force_min(tree, leaves, cost, config)?;
    Ok(set.labels_of(node).to_vec())
}
