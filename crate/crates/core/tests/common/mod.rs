//! Fixtures shared by the integration suites.

#![allow(dead_code)]

use treelabel::cost::{Cost, CostFunction, Label};
use treelabel::ktuple::TupleLeafLabeling;
use treelabel::tree::{build_tree, NodeId, Tree};

#[derive(Debug, Clone)]
pub enum Shape {
    Leaf,
    Node(Vec<Shape>),
}

/// Every ordered binary shape with `n` leaves.
pub fn binary_shapes(n: usize) -> Vec<Shape> {
    if n == 1 {
        return vec![Shape::Leaf];
    }
    let mut out = Vec::new();
    for k in 1..n {
        for l in binary_shapes(k) {
            for r in binary_shapes(n - k) {
                out.push(Shape::Node(vec![l.clone(), r]));
            }
        }
    }
    out
}

/// Shapes up to child reordering with `n` leaves and internal arity ≥ 2
/// (exactly 2 when `binary_only`).
pub fn unordered_shapes(n: usize, binary_only: bool) -> Vec<Shape> {
    fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in (1..=max.min(n)).rev() {
            for mut rest in partitions(n - first, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    if n == 1 {
        return vec![Shape::Leaf];
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for parts in partitions(n, n - 1) {
        if binary_only && parts.len() != 2 {
            continue;
        }
        let mut combos: Vec<Vec<Shape>> = vec![vec![]];
        for &size in &parts {
            let options = unordered_shapes(size, binary_only);
            combos = combos
                .into_iter()
                .flat_map(|prefix| {
                    options.iter().map(move |o| {
                        let mut v = prefix.clone();
                        v.push(o.clone());
                        v
                    })
                })
                .collect();
        }
        for children in combos {
            let node = Shape::Node(children);
            if seen.insert(canonical(&node)) {
                out.push(node);
            }
        }
    }
    out
}

fn canonical(s: &Shape) -> String {
    match s {
        Shape::Leaf => "x".into(),
        Shape::Node(children) => {
            let mut keys: Vec<String> = children.iter().map(canonical).collect();
            keys.sort();
            format!("({})", keys.join(","))
        }
    }
}

/// Builds the tree with nodes numbered in preorder.
pub fn shape_tree(shape: &Shape) -> Tree {
    let mut parents = Vec::new();
    let mut leaf = Vec::new();
    let mut stack = vec![(None, shape)];
    while let Some((parent, s)) = stack.pop() {
        let id = parents.len();
        parents.push(parent);
        match s {
            Shape::Leaf => leaf.push(true),
            Shape::Node(children) => {
                leaf.push(false);
                stack.extend(children.iter().rev().map(|c| (Some(id), c)));
            }
        }
    }
    build_tree(&parents, &leaf).unwrap()
}

/// Calls `f` with every vector of `len` values drawn from `values`.
pub fn for_each_assignment<T: Copy>(values: &[T], len: usize, mut f: impl FnMut(&[T])) {
    let mut idx = vec![0usize; len];
    let mut current: Vec<T> = vec![values[0]; len];
    loop {
        f(&current);
        let mut pos = len;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < values.len() {
                current[pos] = values[idx[pos]];
                break;
            }
            idx[pos] = 0;
            current[pos] = values[0];
        }
    }
}

/// Every nondecreasing k-tuple with entries in `lo..=hi`, lexicographic.
pub fn nondecreasing_tuples(k: usize, lo: Label, hi: Label) -> Vec<Vec<Label>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in lo..=hi {
        for mut rest in nondecreasing_tuples(k - 1, first, hi) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Exhaustive search space for the constrained tuple problem: every
/// nondecreasing k-tuple with entries in a fixed box, plus the edge stretch
/// between every pair of them.
pub struct TupleSpace {
    states: Vec<Vec<Label>>,
    stretch: Vec<Cost>,
}

impl TupleSpace {
    pub fn new(k: usize, lo: Label, hi: Label, cost: &CostFunction) -> Self {
        let states = nondecreasing_tuples(k, lo, hi);
        let s = states.len();
        let mut stretch = vec![0 as Cost; s * s];
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                stretch[i * s + j] = a
                    .iter()
                    .zip(b)
                    .map(|(x, y)| cost.theta(x.abs_diff(*y)).unwrap())
                    .sum();
            }
        }
        TupleSpace { states, stretch }
    }

    /// Minimum total stretch over all internal assignments. The box must
    /// contain every leaf value.
    pub fn min_cost(&self, tree: &Tree, leaves: &TupleLeafLabeling) -> Cost {
        let order: Vec<NodeId> = tree
            .postorder()
            .iter()
            .copied()
            .filter(|&v| !tree.is_leaf(v))
            .collect();
        let mut assigned: Vec<usize> = (0..tree.node_count())
            .map(|i| match leaves.get(NodeId::new(i)) {
                Some(t) => self
                    .states
                    .iter()
                    .position(|x| x == t)
                    .expect("leaf tuple inside box"),
                None => 0,
            })
            .collect();
        let mut best = Cost::MAX;
        self.search(tree, &order, &mut assigned, 0, 0, &mut best);
        best
    }

    fn search(
        &self,
        tree: &Tree,
        order: &[NodeId],
        assigned: &mut [usize],
        level: usize,
        partial: Cost,
        best: &mut Cost,
    ) {
        if level == order.len() {
            *best = (*best).min(partial);
            return;
        }
        let s = self.states.len();
        let node = order[level];
        for state in 0..s {
            assigned[node.index()] = state;
            let mut sum = partial;
            for &c in tree.children(node) {
                sum += self.stretch[state * s + assigned[c.index()]];
            }
            self.search(tree, order, assigned, level + 1, sum, best);
        }
    }
}

/// Exact constrained tuple optimum, searching the leaves' overall value box.
pub fn tuple_brute_force(tree: &Tree, leaves: &TupleLeafLabeling, cost: &CostFunction) -> Cost {
    let all: Vec<Label> = leaves.iter().flat_map(|(_, t)| t.iter().copied()).collect();
    let lo = *all.iter().min().unwrap();
    let hi = *all.iter().max().unwrap();
    TupleSpace::new(leaves.k(), lo, hi, cost).min_cost(tree, leaves)
}

/// A strictly increasing table `0 = t0 < t1 < …` with random increments.
pub fn random_table<R: rand::Rng>(rng: &mut R, len: usize) -> CostFunction {
    let mut table = vec![0];
    for _ in 1..len {
        let step = rng.random_range(1..=6);
        table.push(table.last().unwrap() + step);
    }
    CostFunction::table(table).unwrap()
}
