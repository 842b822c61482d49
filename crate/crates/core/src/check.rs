//! Cross-checks the solvers against each other and the oracle.

use std::fmt;

use crate::cost::{Cost, CostFunction, Labeling, LeafLabeling};
use crate::dp::solve_dp;
use crate::interval::solve_interval;
use crate::newick::serialize_tree;
use crate::oracle::{brute_force_min, OracleConfig};
use crate::solver::{SolveError, TieRule};
use crate::tree::Tree;

pub type SolverFn = fn(&Tree, &LeafLabeling, &CostFunction) -> Result<Labeling, SolveError>;

/// The solver implementations under test. The oracle is always the real one.
#[derive(Clone, Copy)]
pub struct Solvers {
    pub dp: SolverFn,
    pub interval: SolverFn,
}

impl Default for Solvers {
    fn default() -> Self {
        Solvers {
            dp: |t, l, c| solve_dp(t, l, c, TieRule::Lowest),
            interval: |t, l, _| solve_interval(t, l, TieRule::Lowest),
        }
    }
}

/// Costs reported for one instance; `None` where a solver did not apply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Agreement {
    pub index: usize,
    pub source: String,
    pub newick: String,
    pub nodes: usize,
    pub dp: Cost,
    pub interval: Option<Cost>,
    pub oracle: Option<Cost>,
}

impl Agreement {
    pub fn agrees(&self) -> bool {
        [self.interval, self.oracle]
            .iter()
            .flatten()
            .all(|&c| c == self.dp)
    }
}

impl fmt::Display for Agreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |c: Option<Cost>| c.map_or_else(|| "-".to_string(), |c| c.to_string());
        write!(
            f,
            "{}\t{}\tdp={} interval={} oracle={}\t{}",
            self.index,
            self.source,
            self.dp,
            show(self.interval),
            show(self.oracle),
            if self.agrees() { "agree" } else { "DISAGREE" }
        )
    }
}

/// Runs DP, interval (binary + manhattan only) and the oracle (within
/// budget) on one instance.
pub fn check_instance(
    index: usize,
    source: &str,
    tree: &Tree,
    leaves: &LeafLabeling,
    cost: &CostFunction,
    solvers: &Solvers,
    oracle: &OracleConfig,
) -> Result<Agreement, SolveError> {
    let dp = (solvers.dp)(tree, leaves, cost)?.total_cost;
    let interval = if tree.is_binary() && cost.is_manhattan() {
        Some((solvers.interval)(tree, leaves, cost)?.total_cost)
    } else {
        None
    };
    let oracle = match brute_force_min(tree, leaves, cost, oracle) {
        Ok(set) => Some(set.cost),
        Err(SolveError::BudgetExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(Agreement {
        index,
        source: source.to_string(),
        newick: serialize_tree(tree, leaves),
        nodes: tree.node_count(),
        dp,
        interval,
        oracle,
    })
}

/// Pairwise agreement counts over a batch.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub rows: Vec<Agreement>,
}

impl CheckReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(Agreement::agrees)
    }

    /// The disagreeing instance with the fewest nodes, earliest first on ties.
    pub fn minimal_failure(&self) -> Option<&Agreement> {
        self.rows
            .iter()
            .filter(|r| !r.agrees())
            .min_by_key(|r| (r.nodes, r.index))
    }

    /// `(agreeing, compared)` for each solver pair.
    pub fn matrix(&self) -> [(&'static str, usize, usize); 3] {
        let mut counts = [
            ("dp~interval", 0, 0),
            ("dp~oracle", 0, 0),
            ("interval~oracle", 0, 0),
        ];
        for r in &self.rows {
            let pairs = [
                Some(r.dp).zip(r.interval),
                Some(r.dp).zip(r.oracle),
                r.interval.zip(r.oracle),
            ];
            for (slot, pair) in counts.iter_mut().zip(pairs) {
                if let Some((a, b)) = pair {
                    slot.2 += 1;
                    slot.1 += usize::from(a == b);
                }
            }
        }
        counts
    }

    pub fn summary(&self) -> String {
        let mut out = format!("instances: {}\n", self.rows.len());
        for (name, agree, total) in self.matrix() {
            out.push_str(&format!("{name}: {agree}/{total} agree\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newick::parse_newick;

    #[test]
    fn cherry_agrees() {
        let doc = parse_newick("(2,7);").unwrap();
        let row = check_instance(
            0,
            "x",
            &doc.tree,
            &doc.leaf_labels,
            &CostFunction::manhattan(),
            &Solvers::default(),
            &OracleConfig::default(),
        )
        .unwrap();
        assert_eq!((row.dp, row.interval, row.oracle), (5, Some(5), Some(5)));
        assert!(row.agrees());
        let report = CheckReport { rows: vec![row] };
        assert!(report.all_agree());
        assert_eq!(
            report.summary(),
            "instances: 1\ndp~interval: 1/1 agree\ndp~oracle: 1/1 agree\ninterval~oracle: 1/1 agree\n"
        );
    }

    #[test]
    fn oracle_skipped_over_budget() {
        let doc = parse_newick("((0,100),(50,70));").unwrap();
        let tight = OracleConfig {
            budget: 10,
            labeling_cap: 1,
        };
        let row = check_instance(
            0,
            "x",
            &doc.tree,
            &doc.leaf_labels,
            &"power:2".parse().unwrap(),
            &Solvers::default(),
            &tight,
        )
        .unwrap();
        assert_eq!(row.oracle, None);
        assert_eq!(row.interval, None);
        assert!(row.agrees());
    }
}
