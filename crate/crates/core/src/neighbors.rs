//! Exact k-nearest-neighbor search.
//!
//! Results are sorted by distance with ties broken by ascending row index,
//! which keeps every resampler deterministic under a fixed seed.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::dataset::FeatureKind;
use crate::error::{Error, Result};

/// Borrowed row-major matrix with a kind per column.
#[derive(Debug, Clone, Copy)]
pub struct Points<'a> {
    values: &'a [f64],
    kinds: &'a [FeatureKind],
}

impl<'a> Points<'a> {
    pub fn new(values: &'a [f64], kinds: &'a [FeatureKind]) -> Self {
        assert!(
            kinds.is_empty() && values.is_empty() || !kinds.is_empty() && values.len().is_multiple_of(kinds.len()),
            "matrix size is not a multiple of the column count"
        );
        Points { values, kinds }
    }

    pub fn len(&self) -> usize {
        if self.kinds.is_empty() {
            0
        } else {
            self.values.len() / self.kinds.len()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.kinds.len()
    }

    pub fn kinds(&self) -> &'a [FeatureKind] {
        self.kinds
    }

    pub fn row(&self, i: usize) -> &'a [f64] {
        let d = self.dim();
        &self.values[i * d..(i + 1) * d]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    /// Plain Euclidean distance; every column must be continuous.
    Euclidean,
    /// Euclidean over continuous columns plus `nominal_penalty²` per
    /// mismatching nominal column (SMOTE-NC).
    MixedNc { nominal_penalty: f64 },
}

impl Metric {
    pub fn validate(&self, kinds: &[FeatureKind]) -> Result<()> {
        match *self {
            Metric::Euclidean if kinds.contains(&FeatureKind::Nominal) => Err(Error::InvalidParameter(
                "Euclidean metric requires all-continuous columns".into(),
            )),
            Metric::MixedNc { nominal_penalty } if !(nominal_penalty >= 0.0) || !nominal_penalty.is_finite() => {
                Err(Error::InvalidParameter(format!(
                    "nominal penalty must be a non-negative real, got {nominal_penalty}"
                )))
            }
            _ => Ok(()),
        }
    }

    /// Distance between two conforming rows. No validation.
    pub fn distance(&self, a: &[f64], b: &[f64], kinds: &[FeatureKind]) -> f64 {
        let penalty = match *self {
            Metric::Euclidean => 0.0,
            Metric::MixedNc { nominal_penalty } => nominal_penalty,
        };
        raw_mixed(a, b, kinds, penalty)
    }
}

fn raw_mixed(a: &[f64], b: &[f64], kinds: &[FeatureKind], penalty: f64) -> f64 {
    let p2 = penalty * penalty;
    let mut sum = 0.0;
    for ((x, y), k) in a.iter().zip(b).zip(kinds) {
        match k {
            FeatureKind::Continuous => {
                let d = x - y;
                sum += d * d;
            }
            FeatureKind::Nominal => {
                if x != y {
                    sum += p2;
                }
            }
        }
    }
    sum.sqrt()
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// `sqrt(Σ_continuous (a_j − b_j)² + Σ_nominal [a_j ≠ b_j]·penalty²)`.
pub fn mixed_distance(a: &[f64], b: &[f64], kinds: &[FeatureKind], nominal_penalty: f64) -> Result<f64> {
    if a.len() != kinds.len() || b.len() != kinds.len() {
        return Err(Error::SchemaMismatch(format!(
            "rows of length {} and {} against a schema of {} columns",
            a.len(),
            b.len(),
            kinds.len()
        )));
    }
    Metric::MixedNc { nominal_penalty }.validate(kinds)?;
    Ok(raw_mixed(a, b, kinds, nominal_penalty))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NeighborList {
    pub query: usize,
    pub neighbors: Vec<Neighbor>,
}

impl NeighborList {
    pub fn indices(&self) -> Vec<usize> {
        self.neighbors.iter().map(|n| n.index).collect()
    }
}

fn by_distance_then_index(a: &Neighbor, b: &Neighbor) -> Ordering {
    a.distance.total_cmp(&b.distance).then(a.index.cmp(&b.index))
}

/// The `k` nearest rows of `points` to row `query`, excluding the query row.
pub fn knn(points: &Points, query: usize, k: usize, metric: &Metric) -> Result<NeighborList> {
    let candidates: Vec<usize> = (0..points.len()).collect();
    knn_among(points, &candidates, query, k, metric)
}

/// Like [`knn`] but only rows listed in `candidates` are eligible.
pub fn knn_among(
    points: &Points,
    candidates: &[usize],
    query: usize,
    k: usize,
    metric: &Metric,
) -> Result<NeighborList> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if query >= points.len() {
        return Err(Error::InvalidParameter(format!("query row {query} out of range")));
    }
    metric.validate(points.kinds())?;
    let q = points.row(query);
    let mut all: Vec<Neighbor> = candidates
        .iter()
        .filter(|&&i| i != query)
        .map(|&i| Neighbor {
            index: i,
            distance: metric.distance(q, points.row(i), points.kinds()),
        })
        .collect();
    if all.len() < k {
        return Err(Error::NotEnoughNeighbors {
            requested: k,
            available: all.len(),
        });
    }
    if all.len() > k {
        all.select_nth_unstable_by(k - 1, by_distance_then_index);
        all.truncate(k);
    }
    all.sort_unstable_by(by_distance_then_index);
    Ok(NeighborList { query, neighbors: all })
}

/// Neighbor lists for several queries, computed in parallel.
pub fn knn_batch(
    points: &Points,
    candidates: &[usize],
    queries: &[usize],
    k: usize,
    metric: &Metric,
) -> Result<Vec<NeighborList>> {
    queries
        .par_iter()
        .map(|&q| knn_among(points, candidates, q, k, metric))
        .collect()
}

/// Median of the per-column population standard deviations of the continuous
/// columns over `rows`. Falls back to 1 when there is nothing to measure.
pub fn default_nominal_penalty(points: &Points, rows: &[usize]) -> f64 {
    if rows.is_empty() {
        return 1.0;
    }
    let n = rows.len() as f64;
    let mut stds: Vec<f64> = (0..points.dim())
        .filter(|&j| points.kinds()[j] == FeatureKind::Continuous)
        .map(|j| {
            let mean = rows.iter().map(|&i| points.row(i)[j]).sum::<f64>() / n;
            (rows.iter().map(|&i| (points.row(i)[j] - mean).powi(2)).sum::<f64>() / n).sqrt()
        })
        .collect();
    if stds.is_empty() {
        return 1.0;
    }
    stds.sort_by(f64::total_cmp);
    let m = stds.len();
    if m % 2 == 1 {
        stds[m / 2]
    } else {
        0.5 * (stds[m / 2 - 1] + stds[m / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const C: FeatureKind = FeatureKind::Continuous;
    const N: FeatureKind = FeatureKind::Nominal;

    #[test]
    fn line_example() {
        let values = [0.0, 1.0, 3.0];
        let kinds = [C];
        let p = Points::new(&values, &kinds);
        let nl = knn(&p, 0, 2, &Metric::Euclidean).unwrap();
        assert_eq!(nl.indices(), vec![1, 2]);
        assert_eq!(nl.neighbors[0].distance, 1.0);
        assert_eq!(nl.neighbors[1].distance, 3.0);
    }

    #[test]
    fn duplicate_of_query_comes_first() {
        let values = [5.0, 4.0, 5.0, 9.0];
        let kinds = [C];
        let p = Points::new(&values, &kinds);
        let nl = knn(&p, 0, 2, &Metric::Euclidean).unwrap();
        assert_eq!(nl.neighbors[0], Neighbor { index: 2, distance: 0.0 });
        assert_eq!(nl.neighbors[1].index, 1);
    }

    #[test]
    fn ties_go_to_lower_index() {
        let values = [0.0, 1.0, -1.0, 1.0];
        let kinds = [C];
        let p = Points::new(&values, &kinds);
        assert_eq!(knn(&p, 0, 3, &Metric::Euclidean).unwrap().indices(), vec![1, 2, 3]);
    }

    #[test]
    fn k_too_large() {
        let values = [0.0, 1.0];
        let kinds = [C];
        let p = Points::new(&values, &kinds);
        assert!(matches!(
            knn(&p, 0, 2, &Metric::Euclidean),
            Err(Error::NotEnoughNeighbors { requested: 2, available: 1 })
        ));
        assert!(matches!(knn(&p, 0, 0, &Metric::Euclidean), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn euclidean_rejects_nominal_columns() {
        let values = [0.0, 1.0, 1.0, 0.0];
        let kinds = [C, N];
        let p = Points::new(&values, &kinds);
        assert!(knn(&p, 0, 1, &Metric::Euclidean).is_err());
        assert!(knn(&p, 0, 1, &Metric::MixedNc { nominal_penalty: 1.0 }).is_ok());
    }

    #[test]
    fn mixed_distance_examples() {
        let kinds = [C, N, C];
        let a = [1.0, 2.0, 3.0];
        assert_eq!(mixed_distance(&a, &a, &kinds, 0.7).unwrap(), 0.0);
        let b = [1.0, 0.0, 3.0];
        assert_eq!(mixed_distance(&a, &b, &kinds, 0.5).unwrap(), 0.5);
        let cont = [C, C];
        let d = mixed_distance(&[0.0, 0.0], &[3.0, 4.0], &cont, 9.0).unwrap();
        assert_eq!(d, 5.0);
        assert_eq!(d, euclidean(&[0.0, 0.0], &[3.0, 4.0]));
        assert!(mixed_distance(&a, &[1.0], &kinds, 0.5).is_err());
        assert!(mixed_distance(&a, &b, &kinds, -1.0).is_err());
    }

    #[test]
    fn median_penalty() {
        // column stds: 1, 0, 2 -> median 1; nominal column ignored.
        let values = [0.0, 5.0, 0.0, 3.0, 2.0, 5.0, 4.0, 0.0];
        let kinds = [C, C, C, N];
        let p = Points::new(&values, &kinds);
        assert_eq!(default_nominal_penalty(&p, &[0, 1]), 1.0);
    }

    fn row_strategy() -> impl Strategy<Value = Vec<f64>> {
        // two continuous columns, two nominal columns with 3 codes
        (-5.0..5.0f64, -5.0..5.0f64, 0..3u8, 0..3u8)
            .prop_map(|(a, b, c, d)| vec![a, b, f64::from(c), f64::from(d)])
    }

    proptest! {
        #[test]
        fn mixed_metric_axioms(a in row_strategy(), b in row_strategy(), c in row_strategy(), pen in 0.0..3.0f64) {
            let kinds = [C, C, N, N];
            let d = |x: &[f64], y: &[f64]| mixed_distance(x, y, &kinds, pen).unwrap();
            prop_assert_eq!(d(&a, &a), 0.0);
            prop_assert_eq!(d(&a, &b), d(&b, &a));
            prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
        }

        #[test]
        fn permutation_invariance(rows in proptest::collection::vec(row_strategy(), 8..40), k in 1usize..6, shift in 0usize..40) {
            let kinds = [C, C, N, N];
            let n = rows.len();
            let flat: Vec<f64> = rows.concat();
            // rotate rows; position i in the rotated matrix holds original (i + shift) % n
            let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
            let rotated: Vec<f64> = perm.iter().flat_map(|&i| rows[i].clone()).collect();
            let metric = Metric::MixedNc { nominal_penalty: 0.8 };
            let p = Points::new(&flat, &kinds);
            let r = Points::new(&rotated, &kinds);
            for q in 0..n {
                let orig = knn(&p, perm[q], k, &metric).unwrap();
                let rot = knn(&r, q, k, &metric).unwrap();
                let od: Vec<f64> = orig.neighbors.iter().map(|x| x.distance).collect();
                let rd: Vec<f64> = rot.neighbors.iter().map(|x| x.distance).collect();
                prop_assert_eq!(od, rd);
            }
        }
    }
}
