//! Linear-time solver for Manhattan cost on binary trees.
//!
//! Bottom-up, each node gets a closed interval: a leaf gets its own label,
//! and a parent gets the intersection of its children's intervals or, when
//! they are disjoint, the gap between them. Top-down, the root takes a point
//! of its interval and every other node takes the point of its own interval
//! nearest to its parent's label.

use std::fmt::{self, Write as _};

use crate::cost::{eval_total, CostError, CostFunction, Label, Labeling, LeafLabeling};
use crate::solver::{check_sizes, SolveError, TieRule};
use crate::tree::{NodeId, Tree};

/// A nonempty closed integer interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Label,
    hi: Label,
}

impl Interval {
    /// `None` when `lo > hi`.
    pub fn new(lo: Label, hi: Label) -> Option<Self> {
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn point(x: Label) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn lo(self) -> Label {
        self.lo
    }

    pub fn hi(self) -> Label {
        self.hi
    }

    pub fn contains(self, x: Label) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// The point of the interval nearest to `x`.
    pub fn clamp(self, x: Label) -> Label {
        x.clamp(self.lo, self.hi)
    }

    pub fn labels(self) -> impl Iterator<Item = Label> {
        self.lo..=self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Intersection of `a` and `b`, or the gap between them when disjoint.
///
/// Touching intervals (`a.hi == b.lo`) intersect in a single point.
pub fn merge_intervals(a: Interval, b: Interval) -> Interval {
    let lo = a.lo.max(b.lo);
    let hi = a.hi.min(b.hi);
    if lo <= hi {
        Interval { lo, hi }
    } else if a.hi < b.lo {
        Interval { lo: a.hi, hi: b.lo }
    } else {
        Interval { lo: b.hi, hi: a.lo }
    }
}

/// One interval per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalAssignment {
    intervals: Vec<Interval>,
}

impl IntervalAssignment {
    pub fn get(&self, node: NodeId) -> Interval {
        self.intervals[node.index()]
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, Interval)> + '_ {
        self.intervals
            .iter()
            .enumerate()
            .map(|(i, &iv)| (NodeId::new(i), iv))
    }

    /// `node,lo,hi` lines under a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("node,lo,hi\n");
        for (node, iv) in self.iter() {
            let _ = writeln!(out, "{node},{},{}", iv.lo, iv.hi);
        }
        out
    }
}

/// Bottom-up stage, driven by a caller-supplied merge rule.
pub fn bottom_up_intervals_with(
    tree: &Tree,
    leaves: &LeafLabeling,
    merge: impl Fn(Interval, Interval) -> Interval,
) -> Result<IntervalAssignment, SolveError> {
    check_sizes(tree, leaves)?;
    if !tree.is_binary() {
        return Err(SolveError::NotBinaryTree);
    }
    let mut intervals = vec![Interval::point(0); tree.node_count()];
    for &node in tree.postorder() {
        intervals[node.index()] = match leaves.get(node) {
            Some(label) => Interval::point(label),
            None => {
                let [l, r] = tree.children(node) else {
                    unreachable!("checked binary")
                };
                merge(intervals[l.index()], intervals[r.index()])
            }
        };
    }
    Ok(IntervalAssignment { intervals })
}

pub fn bottom_up_intervals(
    tree: &Tree,
    leaves: &LeafLabeling,
) -> Result<IntervalAssignment, SolveError> {
    bottom_up_intervals_with(tree, leaves, merge_intervals)
}

/// Top-down stage: the root picks from its interval by `tie`, every other
/// node clamps its parent's label into its own interval.
pub fn top_down_labels(
    tree: &Tree,
    assignment: &IntervalAssignment,
    tie: TieRule,
) -> Result<Labeling, SolveError> {
    let root = assignment.get(tree.root());
    let mut values = vec![0; tree.node_count()];
    values[tree.root().index()] = match tie {
        TieRule::Lowest => root.lo,
        TieRule::Highest => root.hi,
        TieRule::Midpoint => root.lo + (root.hi - root.lo) / 2,
    };
    for &node in &tree.preorder()[1..] {
        let parent = tree.parent(node).expect("non-root node has a parent");
        values[node.index()] = assignment.get(node).clamp(values[parent.index()]);
    }
    let total_cost = eval_total(tree, &CostFunction::manhattan(), &values)?;
    Ok(Labeling { values, total_cost })
}

pub fn solve_interval(
    tree: &Tree,
    leaves: &LeafLabeling,
    tie: TieRule,
) -> Result<Labeling, SolveError> {
    let range = leaves.range();
    (tree.edge_count() as u64)
        .checked_mul(range.m - 1)
        .ok_or(CostError::CostOverflowRisk {
            edges: tree.edge_count(),
            max_difference: range.m - 1,
        })?;
    let assignment = bottom_up_intervals(tree, leaves)?;
    top_down_labels(tree, &assignment, tie)
}
