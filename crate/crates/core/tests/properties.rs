mod common;

use proptest::prelude::*;
use rand::Rng;
use treelabel::cost::{eval_total, CostFunction, Label, LeafLabeling};
use treelabel::dp::{dp_up, min_total, solve_dp};
use treelabel::generate::{random_labels, random_tree, rng_from_seed, Arity};
use treelabel::interval::{merge_intervals, solve_interval, Interval};
use treelabel::newick::{parse_newick, serialize_labeled, serialize_tree};
use treelabel::oracle::{brute_force_min, OracleConfig};
use treelabel::solver::TieRule;
use treelabel::tree::Tree;

fn arity() -> impl Strategy<Value = Arity> {
    prop_oneof![Just(Arity::Binary), (2usize..=5).prop_map(Arity::UpTo)]
}

fn cost() -> impl Strategy<Value = CostFunction> {
    prop_oneof![
        Just(CostFunction::manhattan()),
        (2u32..=3).prop_map(|p| CostFunction::power(p).unwrap()),
        any::<u64>().prop_map(|seed| common::random_table(&mut rng_from_seed(seed), 41)),
    ]
}

/// A random tree plus leaf labels in `[lo, lo + span]`.
fn instance(max_leaves: usize, span: Label) -> impl Strategy<Value = (Tree, LeafLabeling)> {
    (any::<u64>(), 1..=max_leaves, arity(), -20 as Label..20).prop_map(
        move |(seed, n, arity, lo)| {
            let mut rng = rng_from_seed(seed);
            let tree = random_tree(&mut rng, n, arity).unwrap();
            let leaves = random_labels(&mut rng, &tree, lo, lo + span).unwrap();
            (tree, leaves)
        },
    )
}

fn binary_instance(max_leaves: usize, span: Label) -> impl Strategy<Value = (Tree, LeafLabeling)> {
    (any::<u64>(), 1..=max_leaves, -20 as Label..20).prop_map(move |(seed, n, lo)| {
        let mut rng = rng_from_seed(seed);
        let tree = random_tree(&mut rng, n, Arity::Binary).unwrap();
        let leaves = random_labels(&mut rng, &tree, lo, lo + span).unwrap();
        (tree, leaves)
    })
}

proptest! {
    #[test]
    fn traversals_visit_every_node_in_order((tree, _) in instance(40, 5)) {
        let n = tree.node_count();
        let mut seen = vec![false; n];
        let mut position = vec![0; n];
        for (i, v) in tree.postorder().iter().enumerate() {
            prop_assert!(!seen[v.index()]);
            seen[v.index()] = true;
            position[v.index()] = i;
        }
        prop_assert!(seen.iter().all(|&s| s));
        for (parent, child) in tree.edges() {
            prop_assert!(position[child.index()] < position[parent.index()]);
        }
        prop_assert_eq!(*tree.postorder().last().unwrap(), tree.root());
        prop_assert_eq!(tree.preorder()[0], tree.root());
        prop_assert_eq!(tree.edge_count(), n - 1);
        prop_assert_eq!(tree.leaf_count() + tree.internal_nodes().count(), n);
    }

    #[test]
    fn eval_total_is_translation_and_reflection_invariant(
        (tree, _) in instance(15, 10),
        c in cost(),
        seed in any::<u64>(),
        shift in -50 as Label..50,
    ) {
        let mut rng = rng_from_seed(seed);
        let labels: Vec<Label> = (0..tree.node_count()).map(|_| rng.random_range(0..=40)).collect();
        let base = eval_total(&tree, &c, &labels).unwrap();
        let moved: Vec<Label> = labels.iter().map(|x| x + shift).collect();
        let mirrored: Vec<Label> = labels.iter().map(|x| 40 - x).collect();
        prop_assert_eq!(eval_total(&tree, &c, &moved).unwrap(), base);
        prop_assert_eq!(eval_total(&tree, &c, &mirrored).unwrap(), base);
    }

    #[test]
    fn dp_matches_oracle((tree, leaves) in instance(6, 7), c in cost()) {
        let dp = solve_dp(&tree, &leaves, &c, TieRule::Lowest).unwrap();
        let oracle = brute_force_min(&tree, &leaves, &c, &OracleConfig::default()).unwrap();
        prop_assert_eq!(dp.total_cost, oracle.cost);
        prop_assert_eq!(eval_total(&tree, &c, &dp.values).unwrap(), dp.total_cost);
    }

    #[test]
    fn every_tie_rule_is_optimal((tree, leaves) in instance(20, 15), c in cost()) {
        let lowest = solve_dp(&tree, &leaves, &c, TieRule::Lowest).unwrap();
        for tie in [TieRule::Highest, TieRule::Midpoint] {
            let other = solve_dp(&tree, &leaves, &c, tie).unwrap();
            prop_assert_eq!(other.total_cost, lowest.total_cost);
            prop_assert_eq!(eval_total(&tree, &c, &other.values).unwrap(), other.total_cost);
        }
    }

    #[test]
    fn interval_matches_dp((tree, leaves) in binary_instance(60, 30)) {
        let m = CostFunction::manhattan();
        let dp = solve_dp(&tree, &leaves, &m, TieRule::Lowest).unwrap();
        for tie in [TieRule::Lowest, TieRule::Highest, TieRule::Midpoint] {
            let iv = solve_interval(&tree, &leaves, tie).unwrap();
            prop_assert_eq!(iv.total_cost, dp.total_cost);
            prop_assert_eq!(eval_total(&tree, &m, &iv.values).unwrap(), iv.total_cost);
        }
    }

    #[test]
    fn newick_round_trip((tree, leaves) in instance(30, 100)) {
        let text = serialize_tree(&tree, &leaves);
        let doc = parse_newick(&text).unwrap();
        prop_assert_eq!(serialize_tree(&doc.tree, &doc.leaf_labels), text);
        prop_assert_eq!(doc.tree.node_count(), tree.node_count());
        prop_assert_eq!(doc.tree.leaf_count(), tree.leaf_count());

        let solved = solve_dp(&doc.tree, &doc.leaf_labels, &CostFunction::manhattan(), TieRule::Lowest).unwrap();
        let labeled = serialize_labeled(&doc, &solved.values).unwrap();
        prop_assert_eq!(parse_newick(&labeled).unwrap().tree.node_count(), tree.node_count());
    }

    #[test]
    fn optimum_stays_in_leaf_range((tree, leaves) in instance(20, 20), c in cost()) {
        let range = leaves.range();
        for tie in [TieRule::Lowest, TieRule::Highest] {
            let sol = solve_dp(&tree, &leaves, &c, tie).unwrap();
            prop_assert!(sol.values.iter().all(|&v| range.contains(v)));
        }
    }

    #[test]
    fn manhattan_cost_at_least_range_width((tree, leaves) in instance(25, 30)) {
        let range = leaves.range();
        let sol = solve_dp(&tree, &leaves, &CostFunction::manhattan(), TieRule::Lowest).unwrap();
        prop_assert!(sol.total_cost >= (range.g_max - range.g_min) as u64);
    }

    #[test]
    fn dp_is_translation_equivariant((tree, leaves) in instance(15, 12), c in cost(), shift in -30 as Label..30) {
        let base = dp_up(&tree, &leaves, &c).unwrap();
        let moved = dp_up(&tree, &leaves.map(|x| x + shift), &c).unwrap();
        for v in tree.node_ids() {
            prop_assert_eq!(base.row(v), moved.row(v));
        }
        let a = min_total(&base, tree.root());
        let b = min_total(&moved, tree.root());
        prop_assert_eq!(a.cost, b.cost);
        prop_assert_eq!(a.argmin.iter().map(|x| x + shift).collect::<Vec<_>>(), b.argmin);
    }

    #[test]
    fn merge_is_commutative_and_tight(a in -20 as Label..20, la in 0 as Label..10, b in -20 as Label..20, lb in 0 as Label..10) {
        let x = Interval::new(a, a + la).unwrap();
        let y = Interval::new(b, b + lb).unwrap();
        let merged = merge_intervals(x, y);
        prop_assert_eq!(merged, merge_intervals(y, x));
        // Every label in the merge minimizes the summed distance to both intervals.
        let dist = |iv: Interval, p: Label| (iv.clamp(p) - p).abs();
        let best = (-40..=40).map(|p| dist(x, p) + dist(y, p)).min().unwrap();
        for p in merged.labels() {
            prop_assert_eq!(dist(x, p) + dist(y, p), best);
        }
    }
}
