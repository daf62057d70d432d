use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classify::Label;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSpec {
    pub k: usize,
    pub seed: u64,
    pub stratified: bool,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            k: 5,
            seed: 1,
            stratified: true,
        }
    }
}

/// Splits sample indices into `k` disjoint test folds covering every index.
///
/// Each class is shuffled with the seeded generator and dealt round-robin
/// across the folds, the deal continuing where the previous class stopped.
/// Per-fold class counts are therefore within one of `class_size / k`, and
/// fold sizes within one of each other. With `stratified` off, all samples
/// are dealt as a single pool. Indices inside a fold are ascending.
pub fn stratified_kfold(labels: &[Label], spec: &SplitSpec) -> Result<Vec<Vec<usize>>> {
    if spec.k < 2 {
        return Err(Error::invalid(format!(
            "k must be at least 2, got {}",
            spec.k
        )));
    }
    let groups: Vec<Vec<usize>> = if spec.stratified {
        [Label::Positive, Label::Negative]
            .iter()
            .map(|&class| (0..labels.len()).filter(|&i| labels[i] == class).collect())
            .collect()
    } else {
        vec![(0..labels.len()).collect()]
    };
    let smallest = groups.iter().map(Vec::len).min().unwrap_or(0);
    if spec.k > smallest {
        return Err(Error::invalid(format!(
            "k={} exceeds the smallest class size {smallest}",
            spec.k
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut folds = vec![Vec::new(); spec.k];
    let mut next = 0;
    for mut group in groups {
        group.shuffle(&mut rng);
        for i in group {
            folds[next].push(i);
            next = (next + 1) % spec.k;
        }
    }
    folds.iter_mut().for_each(|f| f.sort_unstable());
    Ok(folds)
}
