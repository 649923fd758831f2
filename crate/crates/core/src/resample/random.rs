//! Random over- and under-sampling.

use rand::Rng as _;

use super::kernel::{deficits, Builder};
use super::{Method, Resampled, Warning};
use crate::dataset::Dataset;
use crate::error::Result;
use crate::seed;
use crate::stats::ClassStats;

/// Grows every minority class to `n_max` with uniformly drawn duplicates.
pub fn ros(train: &Dataset, stats: &ClassStats, seed: u64) -> Result<Resampled> {
    let mut rng = seed::rng(seed);
    let mut b = Builder::with_all(train);
    if stats.minority_classes().is_empty() {
        b.warnings.push(Warning::NoMinorityClasses);
    }
    for (class, deficit) in deficits(stats) {
        let members = train.class_indices(class);
        for _ in 0..deficit {
            let s = members[rng.gen_range(0..members.len())];
            b.duplicate(s, None);
        }
    }
    Ok(b.finish(Method::Ros))
}

/// Shrinks every majority class to the size of the largest minority class,
/// sampling without replacement. Kept rows stay in input order.
pub fn rus(train: &Dataset, stats: &ClassStats, seed: u64) -> Result<Resampled> {
    let mut rng = seed::rng(seed);
    let minority = stats.minority_classes();
    let Some(target) = minority.iter().map(|&c| stats.counts[c]).max() else {
        let mut b = Builder::with_all(train);
        b.warnings.push(Warning::NoMinorityClasses);
        return Ok(b.finish(Method::Rus));
    };
    let mut keep = vec![true; train.n_samples()];
    for class in stats.majority_classes() {
        if stats.counts[class] <= target {
            continue;
        }
        let members = train.class_indices(class);
        let mut kept = vec![false; members.len()];
        for i in rand::seq::index::sample(&mut rng, members.len(), target) {
            kept[i] = true;
        }
        for (m, k) in members.into_iter().zip(kept) {
            keep[m] = k;
        }
    }
    let rows = (0..train.n_samples()).filter(|&i| keep[i]);
    Ok(Builder::with_rows(train, rows).finish(Method::Rus))
}
