//! ADASYN: synthetic quotas proportional to how many of a sample's
//! neighbors belong to other classes.

use super::kernel::{deficits, oversample, Builder, Quota};
use super::quota::largest_remainder;
use super::smote::auto_metric;
use super::{Method, Resampled, Warning};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::neighbors::{knn_batch, Metric};
use crate::seed;
use crate::stats::ClassStats;

/// Fraction of other-class rows among each member's `k` nearest neighbors
/// over the whole table.
pub fn adasyn_difficulty(train: &Dataset, members: &[usize], k: usize, metric: &Metric) -> Result<Vec<f64>> {
    let n = train.n_samples();
    if members.is_empty() || n < 2 {
        return Ok(vec![0.0; members.len()]);
    }
    let k = k.min(n - 1);
    let all: Vec<usize> = (0..n).collect();
    let labels = train.labels();
    let lists = knn_batch(&train.points(), &all, members, k, metric)?;
    Ok(lists
        .iter()
        .map(|nl| {
            let own = labels[nl.query];
            nl.neighbors.iter().filter(|x| labels[x.index] != own).count() as f64 / k as f64
        })
        .collect())
}

pub fn adasyn(train: &Dataset, stats: &ClassStats, k: usize, seed: u64) -> Result<Resampled> {
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
        let difficulty = adasyn_difficulty(train, &members, k, &metric)?;
        if difficulty.iter().sum::<f64>() == 0.0 {
            b.warnings.push(Warning::UniformQuotas { class });
        }
        let quotas = largest_remainder(&difficulty, deficit);
        oversample(&mut b, class, &members, &members, Quota::PerSeed(&quotas), k, &metric, None, &mut rng)?;
    }
    Ok(b.finish(Method::Adasyn))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Feature;
    use crate::stats::class_stats;

    #[test]
    fn quotas_follow_difficulty() {
        // two minority rows: row 0 buried in majority, row 1 next to a third minority row
        let rows = vec![
            vec![0.0],
            vec![100.0],
            vec![100.5],
            vec![0.1],
            vec![0.2],
            vec![-0.1],
            vec![-0.2],
            vec![30.0],
            vec![31.0],
            vec![32.0],
            vec![33.0],
            vec![34.0],
            vec![35.0],
        ];
        let mut labels = vec![1, 1, 1];
        labels.extend(vec![0; 10]);
        let d = Dataset::from_rows(vec![Feature::continuous("x")], &rows, labels, vec!["maj".into(), "min".into()])
            .unwrap();
        let members = d.class_indices(1);
        let r = adasyn_difficulty(&d, &members, 1, &Metric::Euclidean).unwrap();
        assert_eq!(r, vec![1.0, 0.0, 0.0]);

        let out = adasyn(&d, &class_stats(d.labels(), 2), 1, 0).unwrap();
        assert_eq!(out.provenance.len(), 7);
        assert!(out.provenance.iter().all(|p| p.seed == 0));
    }

    #[test]
    fn zero_difficulty_warns_and_spreads_evenly() {
        let rows = vec![vec![0.0], vec![0.1], vec![10.0], vec![10.1], vec![10.2], vec![10.3]];
        let d = Dataset::from_rows(
            vec![Feature::continuous("x")],
            &rows,
            vec![1, 1, 0, 0, 0, 0],
            vec!["maj".into(), "min".into()],
        )
        .unwrap();
        let out = adasyn(&d, &class_stats(d.labels(), 2), 1, 0).unwrap();
        assert_eq!(out.warnings, vec![Warning::UniformQuotas { class: 1 }]);
        let from0 = out.provenance.iter().filter(|p| p.seed == 0).count();
        assert_eq!((from0, out.provenance.len() - from0), (1, 1));
    }
}
