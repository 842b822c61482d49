//! Timing harness for the scaling checks.
//!
//! Each grid point is one binary tree with `leaves` leaves whose labels span
//! exactly `[0, m − 1]`. The instance depends only on the seed and the grid
//! point, so every algorithm is timed on the same input.

use std::hint::black_box;
use std::time::Instant;

use crate::cost::{CostFunction, Label};
use crate::generate::{random_tree, rng_from_seed, spanning_labels, Arity};
use crate::oracle::OracleConfig;
use crate::solver::{solve, Algorithm, SolveError, TieRule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub algorithm: Algorithm,
    pub nodes: usize,
    pub m: u64,
    pub repetitions: usize,
    pub median_ns: u128,
}

pub const CSV_HEADER: &str = "algorithm,N,m,repetitions,median_ns";

impl BenchRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.algorithm.name(),
            self.nodes,
            self.m,
            self.repetitions,
            self.median_ns
        )
    }
}

fn grid_seed(seed: u64, leaves: usize, m: u64) -> u64 {
    seed ^ (leaves as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
        ^ m.wrapping_mul(0xc2b2_ae3d_27d4_eb4f)
}

fn median(mut samples: Vec<u128>) -> u128 {
    samples.sort_unstable();
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        (samples[mid - 1] + samples[mid]) / 2
    }
}

/// Median wall time of `repetitions` solves after one warmup solve.
pub fn bench_point(
    algorithm: Algorithm,
    leaves: usize,
    m: u64,
    repetitions: usize,
    seed: u64,
    cost: &CostFunction,
) -> Result<BenchRow, SolveError> {
    let mut rng = rng_from_seed(grid_seed(seed, leaves, m));
    let tree = random_tree(&mut rng, leaves.max(1), Arity::Binary).expect("at least one leaf");
    let labels =
        spanning_labels(&mut rng, &tree, 0, m.max(1) as Label - 1).expect("nonempty range");
    let oracle = OracleConfig::from_env();

    let run = || solve(algorithm, &tree, &labels, cost, TieRule::Lowest, &oracle);
    black_box(run()?);
    let mut samples = Vec::with_capacity(repetitions);
    for _ in 0..repetitions.max(1) {
        let start = Instant::now();
        black_box(run()?);
        samples.push(start.elapsed().as_nanos());
    }
    Ok(BenchRow {
        algorithm,
        nodes: tree.node_count(),
        m: labels.range().m,
        repetitions: samples.len(),
        median_ns: median(samples),
    })
}

/// Every combination of algorithm, leaf count and range size, in that
/// nesting order.
pub fn run_grid(
    algorithms: &[Algorithm],
    leaves: &[usize],
    ms: &[u64],
    repetitions: usize,
    seed: u64,
    cost: &CostFunction,
) -> Result<Vec<BenchRow>, SolveError> {
    let mut rows = Vec::new();
    for &algorithm in algorithms {
        for &n in leaves {
            for &m in ms {
                rows.push(bench_point(algorithm, n, m, repetitions, seed, cost)?);
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn medians() {
        assert_eq!(median(vec![5, 1, 3]), 3);
        assert_eq!(median(vec![4, 1, 3, 2]), 2);
    }

    #[test]
    fn oracle_point_fits_budget() {
        let row = bench_point(Algorithm::Oracle, 3, 9, 5, 1, &CostFunction::manhattan()).unwrap();
        assert_eq!((row.nodes, row.m, row.repetitions), (5, 9, 5));
        assert!(row.to_csv().starts_with("oracle,5,9,5,"));
    }
}
