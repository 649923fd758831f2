//! Seeded train/test partitioning.

use rand::seq::SliceRandom;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::seed;

#[derive(Debug, Clone, PartialEq)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
    pub stratified: bool,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_fraction: 0.6754,
            seed: 0,
            stratified: true,
        }
    }
}

/// Sorted row indices of each side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Per-class train sizes: floors of `fraction * n_i`, then the rows still
/// needed to reach `round(fraction * n)` overall go to the classes with the
/// largest remainders (ties to the lower class index). Each class keeps at
/// least one row on both sides.
pub fn stratum_sizes(counts: &[usize], fraction: f64) -> Vec<usize> {
    let total: usize = counts.iter().sum();
    let target = (fraction * total as f64).round() as usize;
    let exact: Vec<f64> = counts.iter().map(|&n| fraction * n as f64).collect();
    let mut sizes: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let assigned: usize = sizes.iter().sum();
    let mut order: Vec<usize> = (0..counts.len()).filter(|&c| counts[c] > 0).collect();
    order.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &c in order.iter().take(target.saturating_sub(assigned)) {
        sizes[c] += 1;
    }
    for (c, s) in sizes.iter_mut().enumerate() {
        if counts[c] >= 2 {
            *s = (*s).clamp(1, counts[c] - 1);
        }
    }
    sizes
}

pub fn split_indices(data: &Dataset, spec: &SplitSpec) -> Result<SplitIndices> {
    if !(spec.train_fraction > 0.0 && spec.train_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "train_fraction must lie in (0, 1), got {}",
            spec.train_fraction
        )));
    }
    let n = data.n_samples();
    let mut rng = seed::rng(spec.seed);
    let mut train = Vec::new();
    if spec.stratified {
        let strata: Vec<Vec<usize>> = (0..data.n_classes()).map(|c| data.class_indices(c)).collect();
        for (c, idx) in strata.iter().enumerate() {
            if idx.len() == 1 {
                return Err(Error::ClassTooSmall {
                    class: data.class_names()[c].clone(),
                    count: 1,
                });
            }
        }
        let counts: Vec<usize> = strata.iter().map(Vec::len).collect();
        let sizes = stratum_sizes(&counts, spec.train_fraction);
        for (mut idx, size) in strata.into_iter().zip(sizes) {
            idx.shuffle(&mut rng);
            train.extend_from_slice(&idx[..size]);
        }
    } else {
        if n < 2 {
            return Err(Error::InvalidParameter("cannot split fewer than 2 rows".into()));
        }
        let size = ((spec.train_fraction * n as f64).round() as usize).clamp(1, n - 1);
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut rng);
        train.extend_from_slice(&idx[..size]);
    }
    train.sort_unstable();
    let mut in_train = vec![false; n];
    for &i in &train {
        in_train[i] = true;
    }
    let test = (0..n).filter(|&i| !in_train[i]).collect();
    Ok(SplitIndices { train, test })
}

pub fn stratified_split(data: &Dataset, spec: &SplitSpec) -> Result<(Dataset, Dataset)> {
    let s = split_indices(data, spec)?;
    Ok((data.subset(&s.train), data.subset(&s.test)))
}
