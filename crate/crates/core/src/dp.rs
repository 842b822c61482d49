//! Dynamic-programming solver for any tree shape and any strictly
//! increasing edge cost.
//!
//! The up phase fills, in postorder, a table `S_k(i)`: the cheapest cost of
//! the subtree under node `k` when `k` carries label `i`. Labels are only
//! searched in `[g_min, g_max]`, which always contains an optimum when θ is
//! strictly increasing. For an internal node `a` with children `b_1..b_k`,
//!
//! ```text
//! S_a(i) = Σ_b min_j [ θ(|i − j|) + S_b(j) ]
//! ```
//!
//! and a leaf row is 0 at its observed label and infinite elsewhere. The
//! down phase walks the tree in preorder, giving each node the label that
//! minimizes `θ(|parent − j|) + S_node(j)`.
//!
//! Each cell is a direct scan over the label range, so a solve costs
//! O(N·m²).

use std::fmt::Write as _;

use crate::cost::{eval_total, Cost, CostFunction, Label, LabelRange, Labeling, LeafLabeling};
use crate::solver::{check_sizes, ExtCost, SolveError, TieRule};
use crate::tree::{NodeId, Tree};

/// Per-node subtree costs over the label range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostTable {
    range: LabelRange,
    width: usize,
    cells: Vec<ExtCost>,
}

impl CostTable {
    fn new(range: LabelRange, nodes: usize) -> Self {
        let width = range.m as usize;
        CostTable {
            range,
            width,
            cells: vec![ExtCost::Infinite; width * nodes],
        }
    }

    pub fn range(&self) -> LabelRange {
        self.range
    }

    /// `S_node(i)` for `i` from `g_min` to `g_max`.
    pub fn row(&self, node: NodeId) -> &[ExtCost] {
        let start = node.index() * self.width;
        &self.cells[start..start + self.width]
    }

    fn row_mut(&mut self, node: NodeId) -> &mut [ExtCost] {
        let start = node.index() * self.width;
        &mut self.cells[start..start + self.width]
    }

    /// `S_node(label)`; infinite outside the range.
    pub fn get(&self, node: NodeId, label: Label) -> ExtCost {
        if self.range.contains(label) {
            self.row(node)[self.range.offset(label)]
        } else {
            ExtCost::Infinite
        }
    }

    pub fn node_count(&self) -> usize {
        self.cells.len() / self.width
    }

    /// One line per node, one column per label; infinite cells print as `inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("node");
        for label in self.range.labels() {
            let _ = write!(out, ",{label}");
        }
        out.push('\n');
        for node in 0..self.node_count() {
            let _ = write!(out, "{node}");
            for cell in self.row(NodeId::new(node)) {
                let _ = write!(out, ",{cell}");
            }
            out.push('\n');
        }
        out
    }
}

/// The optimal total cost and every root label attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootOptimum {
    pub cost: Cost,
    pub argmin: Vec<Label>,
}

fn leaf_row(row: &mut [ExtCost], range: LabelRange, label: Label) {
    row.fill(ExtCost::Infinite);
    row[range.offset(label)] = ExtCost::Finite(0);
}

/// `min_j θ(|i − j|) + child(j)` for every `i`.
fn edge_message(child: &[ExtCost], theta: &[Cost]) -> Vec<ExtCost> {
    let m = child.len();
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| ExtCost::Finite(theta[i.abs_diff(j)]) + child[j])
                .min()
                .expect("label range is nonempty")
        })
        .collect()
}

fn prepare(
    tree: &Tree,
    leaves: &LeafLabeling,
    cost: &CostFunction,
) -> Result<(LabelRange, Vec<Cost>), SolveError> {
    check_sizes(tree, leaves)?;
    let range = leaves.range();
    let theta = cost.lookup(range.m, tree.edge_count())?;
    Ok((range, theta))
}

/// Fills the cost table bottom-up for a tree of any arity.
pub fn dp_up(
    tree: &Tree,
    leaves: &LeafLabeling,
    cost: &CostFunction,
) -> Result<CostTable, SolveError> {
    let (range, theta) = prepare(tree, leaves, cost)?;
    let mut table = CostTable::new(range, tree.node_count());
    for &node in tree.postorder() {
        if let Some(label) = leaves.get(node) {
            leaf_row(table.row_mut(node), range, label);
            continue;
        }
        let mut acc = vec![ExtCost::Finite(0); table.width];
        for &child in tree.children(node) {
            let msg = edge_message(table.row(child), &theta);
            for (a, x) in acc.iter_mut().zip(msg) {
                *a = *a + x;
            }
        }
        table.row_mut(node).copy_from_slice(&acc);
    }
    Ok(table)
}

/// The two-child form of the up phase, evaluated cell by cell:
/// `S_a(i) = min_j [θ(|i − j|) + S_l(j)] + min_k [θ(|i − k|) + S_r(k)]`.
pub fn dp_up_binary(
    tree: &Tree,
    leaves: &LeafLabeling,
    cost: &CostFunction,
) -> Result<CostTable, SolveError> {
    if !tree.is_binary() {
        return Err(SolveError::NotBinaryTree);
    }
    let (range, theta) = prepare(tree, leaves, cost)?;
    let m = range.m as usize;
    let mut table = CostTable::new(range, tree.node_count());
    for &node in tree.postorder() {
        if let Some(label) = leaves.get(node) {
            leaf_row(table.row_mut(node), range, label);
            continue;
        }
        let (left, right) = match tree.children(node) {
            [l, r] => (*l, *r),
            _ => unreachable!("checked binary"),
        };
        let mut row = vec![ExtCost::Infinite; m];
        for (i, cell) in row.iter_mut().enumerate() {
            let mut best_left = ExtCost::Infinite;
            let mut best_right = ExtCost::Infinite;
            for j in 0..m {
                let edge = ExtCost::Finite(theta[i.abs_diff(j)]);
                best_left = best_left.min(edge + table.row(left)[j]);
                best_right = best_right.min(edge + table.row(right)[j]);
            }
            *cell = best_left + best_right;
        }
        table.row_mut(node).copy_from_slice(&row);
    }
    Ok(table)
}

/// Minimum of the root row and all labels attaining it, ascending.
pub fn min_total(table: &CostTable, root: NodeId) -> RootOptimum {
    let row = table.row(root);
    let best = *row.iter().min().expect("label range is nonempty");
    let cost = best.finite().expect("root row always has a finite entry");
    let argmin = table
        .range
        .labels()
        .zip(row)
        .filter(|(_, &c)| c == best)
        .map(|(label, _)| label)
        .collect();
    RootOptimum { cost, argmin }
}

/// Reconstructs labels top-down from a filled table.
pub fn dp_down(
    tree: &Tree,
    table: &CostTable,
    cost: &CostFunction,
    tie: TieRule,
) -> Result<Labeling, SolveError> {
    let range = table.range;
    let theta = cost.lookup(range.m, tree.edge_count())?;
    let mut values: Vec<Label> = vec![0; tree.node_count()];
    values[tree.root().index()] = tie.pick(&min_total(table, tree.root()).argmin);

    let mut candidates = Vec::new();
    for &node in &tree.preorder()[1..] {
        let parent = tree.parent(node).expect("non-root node has a parent");
        let parent_offset = range.offset(values[parent.index()]);
        let row = table.row(node);
        let scores = row
            .iter()
            .enumerate()
            .map(|(j, &s)| ExtCost::Finite(theta[parent_offset.abs_diff(j)]) + s);
        let best = scores.clone().min().expect("label range is nonempty");
        candidates.clear();
        candidates.extend(
            range
                .labels()
                .zip(scores)
                .filter(|&(_, s)| s == best)
                .map(|(label, _)| label),
        );
        values[node.index()] = tie.pick(&candidates);
    }

    let total_cost = eval_total(tree, cost, &values)?;
    Ok(Labeling { values, total_cost })
}

/// Up phase, root minimization and down phase in one call.
pub fn solve_dp(
    tree: &Tree,
    leaves: &LeafLabeling,
    cost: &CostFunction,
    tie: TieRule,
) -> Result<Labeling, SolveError> {
    let table = dp_up(tree, leaves, cost)?;
    dp_down(tree, &table, cost, tie)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::build_tree;
    use ExtCost::{Finite as F, Infinite as I};

    fn cherry(a: Label, b: Label) -> (Tree, LeafLabeling) {
        let t = build_tree(&[None, Some(0), Some(0)], &[false, true, true]).unwrap();
        let l = LeafLabeling::from_leaf_values(&t, &[a, b]).unwrap();
        (t, l)
    }

    fn five_node() -> (Tree, LeafLabeling) {
        let t = build_tree(
            &[None, Some(0), Some(0), Some(1), Some(1)],
            &[false, false, true, true, true],
        )
        .unwrap();
        // leaf 2 = 9, leaves 3,4 = 1,5
        let l = LeafLabeling::from_leaf_values(&t, &[9, 1, 5]).unwrap();
        (t, l)
    }

    #[test]
    fn cherry_rows() {
        let (t, l) = cherry(2, 7);
        let table = dp_up(&t, &l, &CostFunction::manhattan()).unwrap();
        assert_eq!(table.row(NodeId::new(1)), &[F(0), I, I, I, I, I]);
        assert_eq!(table.row(NodeId::new(2)), &[I, I, I, I, I, F(0)]);
        assert_eq!(table.row(NodeId::new(0)), &[F(5); 6]);
        let opt = min_total(&table, t.root());
        assert_eq!(
            opt,
            RootOptimum {
                cost: 5,
                argmin: vec![2, 3, 4, 5, 6, 7]
            }
        );

        let labeling = dp_down(&t, &table, &CostFunction::manhattan(), TieRule::Lowest).unwrap();
        assert_eq!(labeling.values, vec![2, 2, 7]);
        assert_eq!(labeling.total_cost, 5);
        let high = dp_down(&t, &table, &CostFunction::manhattan(), TieRule::Highest).unwrap();
        assert_eq!(high.values, vec![7, 2, 7]);
    }

    #[test]
    fn single_leaf() {
        let t = build_tree(&[None], &[true]).unwrap();
        let l = LeafLabeling::from_leaf_values(&t, &[3]).unwrap();
        let table = dp_up(&t, &l, &CostFunction::manhattan()).unwrap();
        assert_eq!(table.row(t.root()), &[F(0)]);
        assert_eq!(
            min_total(&table, t.root()),
            RootOptimum {
                cost: 0,
                argmin: vec![3]
            }
        );
        let sol = solve_dp(&t, &l, &CostFunction::power(3).unwrap(), TieRule::Lowest).unwrap();
        assert_eq!(sol.values, vec![3]);
        assert_eq!(sol.total_cost, 0);
    }

    #[test]
    fn star_median() {
        let t = build_tree(
            &[None, Some(0), Some(0), Some(0)],
            &[false, true, true, true],
        )
        .unwrap();
        let l = LeafLabeling::from_leaf_values(&t, &[1, 3, 8]).unwrap();
        let table = dp_up(&t, &l, &CostFunction::manhattan()).unwrap();
        // |i-1| + |i-3| + |i-8| for i = 1..=8
        let expected: Vec<ExtCost> = [9, 8, 7, 8, 9, 10, 11, 12].iter().map(|&c| F(c)).collect();
        assert_eq!(table.row(t.root()), &expected[..]);
        assert_eq!(
            min_total(&table, t.root()),
            RootOptimum {
                cost: 7,
                argmin: vec![3]
            }
        );
    }

    #[test]
    fn three_leaf_manhattan_and_power() {
        let (t, l) = five_node();
        let sol = solve_dp(&t, &l, &CostFunction::manhattan(), TieRule::Lowest).unwrap();
        assert_eq!(sol.total_cost, 8);
        assert_eq!(sol.values[0], 5);
        assert_eq!(sol.values[1], 5);

        let p2 = CostFunction::power(2).unwrap();
        let table = dp_up(&t, &l, &p2).unwrap();
        assert_eq!(
            min_total(&table, t.root()),
            RootOptimum {
                cost: 23,
                argmin: vec![6, 7]
            }
        );
        let sol = dp_down(&t, &table, &p2, TieRule::Lowest).unwrap();
        assert_eq!(sol.total_cost, 23);
        assert_eq!((sol.values[0], sol.values[1]), (6, 4));
    }

    #[test]
    fn all_equal_leaves() {
        let (t, l) = cherry(4, 4);
        for c in ["manhattan", "power:2", "table:0,5"] {
            let sol = solve_dp(&t, &l, &c.parse().unwrap(), TieRule::Lowest).unwrap();
            assert_eq!(sol.values, vec![4, 4, 4]);
            assert_eq!(sol.total_cost, 0);
        }
    }

    #[test]
    fn single_child_chain() {
        let t = build_tree(
            &[None, Some(0), Some(1), Some(1)],
            &[false, false, true, true],
        )
        .unwrap();
        let l = LeafLabeling::from_leaf_values(&t, &[2, 6]).unwrap();
        let sol = solve_dp(&t, &l, &CostFunction::manhattan(), TieRule::Lowest).unwrap();
        assert_eq!(sol.total_cost, 4);
        assert_eq!(sol.values[0], sol.values[1]);
    }

    #[test]
    fn binary_form_matches_general_form() {
        let (t, l) = five_node();
        for c in ["manhattan", "power:2", "table:0,1,3,7,8,20,21,22,40"] {
            let c: CostFunction = c.parse().unwrap();
            assert_eq!(
                dp_up(&t, &l, &c).unwrap(),
                dp_up_binary(&t, &l, &c).unwrap()
            );
        }
        let star = build_tree(
            &[None, Some(0), Some(0), Some(0)],
            &[false, true, true, true],
        )
        .unwrap();
        let l = LeafLabeling::from_leaf_values(&star, &[1, 2, 3]).unwrap();
        assert_eq!(
            dp_up_binary(&star, &l, &CostFunction::manhattan()),
            Err(SolveError::NotBinaryTree)
        );
    }

    #[test]
    fn short_table_is_rejected() {
        let (t, l) = cherry(0, 5);
        let c = CostFunction::table(vec![0, 1, 2]).unwrap();
        assert!(matches!(
            dp_up(&t, &l, &c),
            Err(SolveError::Cost(
                crate::cost::CostError::DifferenceOutOfRange { .. }
            ))
        ));
    }

    #[test]
    fn overflow_risk_is_rejected() {
        let (t, l) = cherry(0, 1 << 20);
        let c = CostFunction::power(4).unwrap();
        assert!(matches!(
            dp_up(&t, &l, &c),
            Err(SolveError::Cost(
                crate::cost::CostError::CostOverflowRisk { .. }
            ))
        ));
    }

    #[test]
    fn csv_dump() {
        let (t, l) = cherry(2, 4);
        let table = dp_up(&t, &l, &CostFunction::manhattan()).unwrap();
        assert_eq!(
            table.to_csv(),
            "node,2,3,4\n0,2,2,2\n1,0,inf,inf\n2,inf,inf,0\n"
        );
    }
}
