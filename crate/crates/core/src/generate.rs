//! Seeded random instances.
//!
//! Trees are grown by recursive splitting: a group of `n > 1` leaves becomes
//! an internal node whose children receive a uniformly random composition of
//! `n` into `k` positive parts. Binary trees always use `k = 2`; the bounded
//! profile draws `k` uniformly from `2..=min(max, n)`. Nodes are numbered in
//! preorder, matching the numbering the Newick reader produces.

use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cost::{Label, LeafLabeling};
use crate::tree::{build_tree, Tree};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("a tree needs at least one leaf")]
    NoLeaves,
    #[error("label range [{0}, {1}] is empty")]
    EmptyRange(Label, Label),
    #[error("maximum arity must be at least 2, got {0}")]
    ArityTooSmall(usize),
    #[error("unrecognised arity profile {0:?}; expected binary or max:<k>")]
    BadArity(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    Binary,
    UpTo(usize),
}

impl FromStr for Arity {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "binary" {
            return Ok(Arity::Binary);
        }
        let max = s
            .strip_prefix("max:")
            .and_then(|k| k.parse().ok())
            .ok_or_else(|| GenError::BadArity(s.to_string()))?;
        if max < 2 {
            return Err(GenError::ArityTooSmall(max));
        }
        Ok(Arity::UpTo(max))
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random tree with exactly `leaves` leaves.
pub fn random_tree<R: Rng + ?Sized>(
    rng: &mut R,
    leaves: usize,
    arity: Arity,
) -> Result<Tree, GenError> {
    if leaves == 0 {
        return Err(GenError::NoLeaves);
    }
    if let Arity::UpTo(max) = arity {
        if max < 2 {
            return Err(GenError::ArityTooSmall(max));
        }
    }
    let mut parents: Vec<Option<usize>> = Vec::new();
    let mut leaf_flags = Vec::new();
    let mut stack = vec![(None, leaves)];
    while let Some((parent, count)) = stack.pop() {
        let id = parents.len();
        parents.push(parent);
        leaf_flags.push(count == 1);
        if count == 1 {
            continue;
        }
        let k = match arity {
            Arity::Binary => 2,
            Arity::UpTo(max) => rng.random_range(2..=max.min(count)),
        };
        let mut cuts: Vec<usize> = sample(rng, count - 1, k - 1)
            .into_iter()
            .map(|c| c + 1)
            .collect();
        cuts.sort_unstable();
        cuts.push(count);
        let mut sizes = Vec::with_capacity(k);
        let mut prev = 0;
        for cut in cuts {
            sizes.push(cut - prev);
            prev = cut;
        }
        // Reversed so the leftmost part is numbered first.
        stack.extend(sizes.into_iter().rev().map(|size| (Some(id), size)));
    }
    Ok(build_tree(&parents, &leaf_flags).expect("generated trees are well formed"))
}

/// Leaf labels drawn uniformly from `[lo, hi]`.
pub fn random_labels<R: Rng + ?Sized>(
    rng: &mut R,
    tree: &Tree,
    lo: Label,
    hi: Label,
) -> Result<LeafLabeling, GenError> {
    if lo > hi {
        return Err(GenError::EmptyRange(lo, hi));
    }
    let values: Vec<Label> = (0..tree.leaf_count())
        .map(|_| rng.random_range(lo..=hi))
        .collect();
    Ok(LeafLabeling::from_leaf_values(tree, &values).expect("one value per leaf"))
}

/// Like [`random_labels`], but the first two leaves are pinned to `lo` and
/// `hi` so the label range is exactly `[lo, hi]` whenever there are two
/// leaves or more.
pub fn spanning_labels<R: Rng + ?Sized>(
    rng: &mut R,
    tree: &Tree,
    lo: Label,
    hi: Label,
) -> Result<LeafLabeling, GenError> {
    if lo > hi {
        return Err(GenError::EmptyRange(lo, hi));
    }
    let mut values: Vec<Label> = (0..tree.leaf_count())
        .map(|_| rng.random_range(lo..=hi))
        .collect();
    values[0] = lo;
    if values.len() > 1 {
        values[1] = hi;
    }
    Ok(LeafLabeling::from_leaf_values(tree, &values).expect("one value per leaf"))
}

pub fn random_instance<R: Rng + ?Sized>(
    rng: &mut R,
    leaves: usize,
    lo: Label,
    hi: Label,
    arity: Arity,
) -> Result<(Tree, LeafLabeling), GenError> {
    if lo > hi {
        return Err(GenError::EmptyRange(lo, hi));
    }
    let tree = random_tree(rng, leaves, arity)?;
    let labels = random_labels(rng, &tree, lo, hi)?;
    Ok((tree, labels))
}
