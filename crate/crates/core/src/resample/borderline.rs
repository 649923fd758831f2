//! Borderline-SMOTE (borderline-1).

use super::kernel::{deficits, oversample, Builder, Quota};
use super::smote::auto_metric;
use super::{Method, Resampled, Warning};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::neighbors::{knn_batch, Metric};
use crate::seed;
use crate::stats::ClassStats;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BorderlineState {
    /// Fewer than half of the `m` neighbors belong to other classes.
    Safe,
    /// At least half, but not all, neighbors belong to other classes.
    Danger,
    /// Every neighbor belongs to another class.
    Noise,
}

/// Classifies each row of `members` (all of one class) by its `m` nearest
/// neighbors over the whole table.
pub fn borderline_states(train: &Dataset, members: &[usize], m: usize, metric: &Metric) -> Result<Vec<BorderlineState>> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    let n = train.n_samples();
    if n < 2 || members.is_empty() {
        return Ok(vec![BorderlineState::Safe; members.len()]);
    }
    let m = m.min(n - 1);
    let all: Vec<usize> = (0..n).collect();
    let lists = knn_batch(&train.points(), &all, members, m, metric)?;
    let labels = train.labels();
    Ok(lists
        .iter()
        .map(|nl| {
            let own = labels[nl.query];
            let other = nl.neighbors.iter().filter(|x| labels[x.index] != own).count();
            if other == m {
                BorderlineState::Noise
            } else if 2 * other >= m {
                BorderlineState::Danger
            } else {
                BorderlineState::Safe
            }
        })
        .collect())
}

/// Seeds are the DANGER samples of each minority class; partners are drawn
/// from the whole class. Classes with no DANGER sample fall back to SMOTE.
pub fn borderline_smote(train: &Dataset, stats: &ClassStats, k: usize, m: usize, seed: u64) -> Result<Resampled> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let mut rng = seed::rng(seed);
    let mut b = Builder::with_all(train);
    if stats.minority_classes().is_empty() {
        b.warnings.push(Warning::NoMinorityClasses);
    }
    for (class, deficit) in deficits(stats) {
        let members = train.class_indices(class);
        let metric = auto_metric(train, &members);
        let states = borderline_states(train, &members, m, &metric)?;
        let danger: Vec<usize> = members
            .iter()
            .zip(&states)
            .filter(|(_, s)| **s == BorderlineState::Danger)
            .map(|(&i, _)| i)
            .collect();
        let seeds = if danger.is_empty() {
            b.warnings.push(Warning::NoDangerSamples { class });
            &members
        } else {
            &danger
        };
        oversample(&mut b, class, seeds, &members, Quota::Draw(deficit), k, &metric, None, &mut rng)?;
    }
    Ok(b.finish(Method::BorderlineSmote))
}
