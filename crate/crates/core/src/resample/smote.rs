//! SMOTE and SMOTE-NC.

use super::kernel::{deficits, metric_for, mixed_metric_for, oversample, Builder, Quota};
use super::{Method, Resampled, Warning};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::neighbors::Metric;
use crate::seed;
use crate::stats::ClassStats;

/// Interpolates each minority class toward same-class nearest neighbors
/// until it reaches `n_max`. Continuous features only.
pub fn smote(train: &Dataset, stats: &ClassStats, k: usize, seed: u64) -> Result<Resampled> {
    if train.has_nominal() {
        return Err(Error::InvalidParameter(
            "smote interpolates continuous features only; use smote_nc for nominal columns".into(),
        ));
    }
    per_class(train, stats, k, seed, Method::Smote, |_, _| Metric::Euclidean)
}

/// SMOTE over mixed tables: neighbors under the SMOTE-NC metric, nominal
/// cells set to the neighbors' most frequent category.
pub fn smote_nc(train: &Dataset, stats: &ClassStats, k: usize, seed: u64) -> Result<Resampled> {
    per_class(train, stats, k, seed, Method::SmoteNc, mixed_metric_for)
}

/// Shared driver: one cell per minority class. Also the fallback used by
/// the seed-selecting variants.
pub(crate) fn per_class(
    train: &Dataset,
    stats: &ClassStats,
    k: usize,
    seed: u64,
    method: Method,
    metric: impl Fn(&Dataset, &[usize]) -> Metric,
) -> Result<Resampled> {
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
        let metric = metric(train, &members);
        oversample(&mut b, class, &members, &members, Quota::Draw(deficit), k, &metric, None, &mut rng)?;
    }
    Ok(b.finish(method))
}

/// Metric used by the variants that accept mixed tables.
pub(crate) fn auto_metric(train: &Dataset, rows: &[usize]) -> Metric {
    metric_for(train, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Feature;
    use crate::stats::class_stats;

    fn two_class(minority: &[[f64; 2]], majority: usize) -> Dataset {
        let mut rows: Vec<Vec<f64>> = (0..majority).map(|i| vec![10.0 + i as f64, -5.0]).collect();
        rows.extend(minority.iter().map(|r| r.to_vec()));
        let mut labels = vec![0; majority];
        labels.extend(vec![1; minority.len()]);
        Dataset::from_rows(
            vec![Feature::continuous("x"), Feature::continuous("y")],
            &rows,
            labels,
            vec!["maj".into(), "min".into()],
        )
        .unwrap()
    }

    #[test]
    fn grows_to_majority_and_interpolates() {
        let d = two_class(&[[0.0, 0.0], [2.0, 2.0], [1.0, 3.0], [0.5, 0.5]], 12);
        let stats = class_stats(d.labels(), 2);
        let out = smote(&d, &stats, 5, 1).unwrap();
        assert_eq!(out.data.n_samples(), 24);
        assert_eq!(out.provenance.len(), 8);
        for r in &out.provenance {
            let nb = r.neighbor.unwrap();
            assert_ne!(nb, r.seed);
            assert_eq!(d.labels()[r.seed], 1);
            assert_eq!(d.labels()[nb], 1);
            assert!((0.0..=1.0).contains(&r.gap));
            let (s, n, g) = (d.row(r.seed), d.row(nb), out.data.row(r.row));
            for j in 0..2 {
                assert_eq!(g[j], s[j] + r.gap * (n[j] - s[j]));
            }
        }
        // original rows untouched
        for i in 0..d.n_samples() {
            assert_eq!(out.data.row(i), d.row(i));
        }
    }

    #[test]
    fn singleton_minority_duplicates() {
        let d = two_class(&[[0.0, 0.0]], 5);
        let out = smote(&d, &class_stats(d.labels(), 2), 5, 1).unwrap();
        assert_eq!(out.provenance.len(), 4);
        assert!(out.provenance.iter().all(|r| r.neighbor.is_none()));
        assert!(matches!(out.warnings[0], Warning::Duplicated { class: 1, count: 4, .. }));
    }

    #[test]
    fn rejects_nominal_columns() {
        let d = Dataset::from_rows(
            vec![Feature::continuous("x"), Feature::nominal("n")],
            &[vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 0.0]],
            vec![0, 0, 1],
            vec!["a".into(), "b".into()],
        )
        .unwrap();
        assert!(smote(&d, &class_stats(d.labels(), 2), 1, 0).is_err());
        assert!(smote_nc(&d, &class_stats(d.labels(), 2), 1, 0).is_ok());
    }

    #[test]
    fn smote_nc_matches_smote_on_continuous_data() {
        let d = two_class(&[[0.0, 0.0], [2.0, 2.0], [1.0, 3.0], [0.5, 0.5], [4.0, 1.0]], 20);
        let stats = class_stats(d.labels(), 2);
        let a = smote(&d, &stats, 3, 77).unwrap();
        let b = smote_nc(&d, &stats, 3, 77).unwrap();
        assert_eq!(a.data, b.data);
        assert_eq!(a.provenance, b.provenance);
    }

    #[test]
    fn nominal_vote_and_tie_rule() {
        // minority seed at x=0 with four neighbors whose codes are 0,0,1,1 -> tie -> 0
        let rows = vec![
            vec![0.0, 2.0],
            vec![1.0, 0.0],
            vec![1.0, 0.0],
            vec![-1.0, 1.0],
            vec![-1.0, 1.0],
            vec![50.0, 2.0],
            vec![51.0, 2.0],
            vec![52.0, 2.0],
            vec![53.0, 2.0],
            vec![54.0, 2.0],
            vec![55.0, 2.0],
        ];
        let labels = vec![1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0];
        let d = Dataset::from_rows(
            vec![Feature::continuous("x"), Feature::nominal("fuel")],
            &rows,
            labels,
            vec!["maj".into(), "min".into()],
        )
        .unwrap();
        let stats = class_stats(d.labels(), 2);
        let out = smote_nc(&d, &stats, 4, 5).unwrap();
        for r in out.provenance.iter().filter(|r| r.seed == 0) {
            assert_eq!(out.data.row(r.row)[1], 0.0);
        }
    }
}
