//! Output assembly and the interpolation step shared by the SMOTE family.

use rand::Rng as _;

use super::{Method, Resampled, RowSource, SyntheticRecord, Warning};
use crate::clustering::ClusterLabel;
use crate::dataset::{Dataset, FeatureKind};
use crate::error::Result;
use crate::neighbors::{default_nominal_penalty, knn_batch, Metric, NeighborList};
use crate::seed::Rng;
use crate::stats::ClassStats;

pub(crate) struct Builder<'a> {
    data: &'a Dataset,
    values: Vec<f64>,
    labels: Vec<usize>,
    sources: Vec<RowSource>,
    provenance: Vec<SyntheticRecord>,
    pub warnings: Vec<Warning>,
    row_buf: Vec<f64>,
}

impl<'a> Builder<'a> {
    /// Starts from every training row, in order.
    pub fn with_all(data: &'a Dataset) -> Self {
        Self::with_rows(data, 0..data.n_samples())
    }

    pub fn with_rows(data: &'a Dataset, rows: impl IntoIterator<Item = usize>) -> Self {
        let mut b = Builder {
            data,
            values: Vec::new(),
            labels: Vec::new(),
            sources: Vec::new(),
            provenance: Vec::new(),
            warnings: Vec::new(),
            row_buf: Vec::with_capacity(data.n_features()),
        };
        for i in rows {
            b.values.extend_from_slice(data.row(i));
            b.labels.push(data.labels()[i]);
            b.sources.push(RowSource::Original(i));
        }
        b
    }

    fn push(&mut self, seed: usize, neighbor: Option<usize>, gap: f64, cluster: Option<ClusterLabel>) {
        let row = self.labels.len();
        self.values.extend_from_slice(&self.row_buf);
        self.labels.push(self.data.labels()[seed]);
        self.sources.push(RowSource::Synthetic(self.provenance.len()));
        self.provenance.push(SyntheticRecord {
            row,
            seed,
            neighbor,
            gap,
            cluster,
        });
    }

    pub fn duplicate(&mut self, seed: usize, cluster: Option<ClusterLabel>) {
        self.row_buf.clear();
        self.row_buf.extend_from_slice(self.data.row(seed));
        self.push(seed, None, 0.0, cluster);
    }

    /// `seed + λ·(neighbor − seed)` on continuous columns with the neighbor
    /// drawn uniformly from `nl`, then λ ~ U[0, 1). Nominal columns take the
    /// most frequent category over all of `nl` (ties to the lower code).
    pub fn interpolate(&mut self, nl: &NeighborList, cluster: Option<ClusterLabel>, rng: &mut Rng) {
        let pick = nl.neighbors[rng.gen_range(0..nl.neighbors.len())].index;
        let gap: f64 = rng.gen();
        let s = self.data.row(nl.query);
        let nb = self.data.row(pick);
        self.row_buf.clear();
        for (j, kind) in self.data.kinds().iter().enumerate() {
            let v = match kind {
                FeatureKind::Continuous => s[j] + gap * (nb[j] - s[j]),
                FeatureKind::Nominal => self.mode(nl, j),
            };
            self.row_buf.push(v);
        }
        self.push(nl.query, Some(pick), gap, cluster);
    }

    fn mode(&self, nl: &NeighborList, column: usize) -> f64 {
        let mut counts = vec![0usize; self.data.categories(column).len()];
        for n in &nl.neighbors {
            counts[self.data.row(n.index)[column] as usize] += 1;
        }
        // max_by_key keeps the last maximum, so scan codes in reverse
        let best = (0..counts.len()).rev().max_by_key(|&c| counts[c]).unwrap_or(0);
        best as f64
    }

    pub fn finish(self, method: Method) -> Resampled {
        for w in &self.warnings {
            log::warn!("{}: {w}", method.name());
        }
        Resampled {
            method,
            data: self.data.with_values(self.values, self.labels),
            sources: self.sources,
            provenance: self.provenance,
            warnings: self.warnings,
        }
    }
}

pub(crate) enum Quota<'q> {
    /// Draw this many seeds uniformly with replacement.
    Draw(usize),
    /// Exactly `q[i]` rows from `seeds[i]`.
    PerSeed(&'q [usize]),
}

/// Grows rows from `seeds` toward their nearest neighbors among
/// `candidates` (`k` clipped to `candidates.len() - 1`). A lone candidate is
/// duplicated instead.
#[allow(clippy::too_many_arguments)]
pub(crate) fn oversample(
    b: &mut Builder,
    class: usize,
    seeds: &[usize],
    candidates: &[usize],
    quota: Quota,
    k: usize,
    metric: &Metric,
    cluster: Option<ClusterLabel>,
    rng: &mut Rng,
) -> Result<()> {
    let total = match quota {
        Quota::Draw(n) => n,
        Quota::PerSeed(q) => q.iter().sum(),
    };
    if total == 0 || seeds.is_empty() {
        return Ok(());
    }
    if candidates.len() < 2 {
        match quota {
            Quota::Draw(n) => {
                for _ in 0..n {
                    let s = seeds[rng.gen_range(0..seeds.len())];
                    b.duplicate(s, cluster);
                }
            }
            Quota::PerSeed(q) => {
                for (&s, &g) in seeds.iter().zip(q) {
                    for _ in 0..g {
                        b.duplicate(s, cluster);
                    }
                }
            }
        }
        b.warnings.push(Warning::Duplicated { class, cluster, count: total });
        return Ok(());
    }
    let k = k.min(candidates.len() - 1);
    let points = b.data.points();
    let lists = knn_batch(&points, candidates, seeds, k, metric)?;
    match quota {
        Quota::Draw(n) => {
            for _ in 0..n {
                let s = rng.gen_range(0..seeds.len());
                b.interpolate(&lists[s], cluster, rng);
            }
        }
        Quota::PerSeed(q) => {
            for (nl, &g) in lists.iter().zip(q) {
                for _ in 0..g {
                    b.interpolate(nl, cluster, rng);
                }
            }
        }
    }
    Ok(())
}

/// Euclidean on all-continuous tables, otherwise the SMOTE-NC metric with
/// the penalty measured on `rows`.
pub(crate) fn metric_for(data: &Dataset, rows: &[usize]) -> Metric {
    if data.has_nominal() {
        Metric::MixedNc {
            nominal_penalty: default_nominal_penalty(&data.points(), rows),
        }
    } else {
        Metric::Euclidean
    }
}

pub(crate) fn mixed_metric_for(data: &Dataset, rows: &[usize]) -> Metric {
    Metric::MixedNc {
        nominal_penalty: default_nominal_penalty(&data.points(), rows),
    }
}

/// Minority classes that need rows to reach `n_max`, with their deficits.
pub(crate) fn deficits(stats: &ClassStats) -> Vec<(usize, usize)> {
    stats
        .minority_classes()
        .into_iter()
        .map(|c| (c, stats.n_max - stats.counts[c]))
        .filter(|&(_, d)| d > 0)
        .collect()
}
