//! AC-SMOTE: DBSCAN on the minority samples, then SMOTE inside every
//! (group, class) cell with a per-cell share of the class deficit.

use serde::{Deserialize, Serialize};

use super::kernel::{oversample, Builder, Quota};
use super::quota::largest_remainder;
use super::smote::auto_metric;
use super::{Method, Resampled, Warning};
use crate::clustering::{dbscan, ClusterLabel, DbscanParams};
use crate::dataset::{Dataset, FeatureKind};
use crate::error::{Error, Result};
use crate::neighbors::Points;
use crate::seed;
use crate::stats::ClassStats;

/// Synthetic rows per cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetPolicy {
    /// The class deficit `N_max − N_c` split across the class's cells in
    /// proportion to cell size. Every class ends at `N_max`.
    #[default]
    Proportional,
    /// Each cell grown to `max(N_max, n_cell)` on its own.
    LiteralMax,
}

/// Which samples DBSCAN sees together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoolMode {
    /// All minority classes in one run; a cluster may hold several classes.
    #[default]
    Pooled,
    /// One run per minority class.
    PerClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AcSmoteOptions {
    pub dbscan: DbscanParams,
    pub policy: TargetPolicy,
    /// Oversample the noise group as well.
    pub include_noise: bool,
    pub pool: PoolMode,
}

impl Default for AcSmoteOptions {
    fn default() -> Self {
        AcSmoteOptions {
            dbscan: DbscanParams { eps: 0.5, min_pts: 5 },
            policy: TargetPolicy::Proportional,
            include_noise: true,
            pool: PoolMode::Pooled,
        }
    }
}

/// The members of one class inside one DBSCAN group.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub class: usize,
    pub group: ClusterLabel,
    /// Training-set indices, ascending.
    pub members: Vec<usize>,
}

/// Non-empty cells ordered by class, then group (noise first). Clustering
/// uses the continuous columns only.
pub fn ac_smote_cells(
    train: &Dataset,
    stats: &ClassStats,
    params: &DbscanParams,
    pool: PoolMode,
) -> Result<(Vec<Cell>, Vec<Warning>)> {
    params.validate()?;
    let minority = stats.minority_classes();
    if minority.is_empty() {
        return Err(Error::Degenerate("AC-SMOTE needs at least one minority class".into()));
    }
    let n_cont = train.continuous_columns().len();
    if n_cont == 0 {
        return Err(Error::InvalidParameter("AC-SMOTE clusters on continuous features; none present".into()));
    }
    let kinds = vec![FeatureKind::Continuous; n_cont];
    let cluster = |rows: &[usize]| {
        let m = train.continuous_matrix(rows);
        dbscan(&Points::new(&m, &kinds), params)
    };

    let mut cells = Vec::new();
    let mut any_cluster = false;
    let mut push_groups = |class: usize, rows: &[usize], labels: &[ClusterLabel], n_clusters: usize| {
        let groups = std::iter::once(ClusterLabel::Noise).chain((0..n_clusters).map(ClusterLabel::Cluster));
        for g in groups {
            let members: Vec<usize> = rows
                .iter()
                .zip(labels)
                .filter(|&(&i, &l)| l == g && train.labels()[i] == class)
                .map(|(&i, _)| i)
                .collect();
            if !members.is_empty() {
                cells.push(Cell { class, group: g, members });
            }
        }
    };
    match pool {
        PoolMode::Pooled => {
            let rows: Vec<usize> = (0..train.n_samples())
                .filter(|&i| stats.is_minority(train.labels()[i]))
                .collect();
            let a = cluster(&rows);
            any_cluster = a.n_clusters > 0;
            for &c in &minority {
                push_groups(c, &rows, &a.labels, a.n_clusters);
            }
        }
        PoolMode::PerClass => {
            for &c in &minority {
                let rows = train.class_indices(c);
                let a = cluster(&rows);
                any_cluster |= a.n_clusters > 0;
                push_groups(c, &rows, &a.labels, a.n_clusters);
            }
        }
    }
    let warnings = if any_cluster { Vec::new() } else { vec![Warning::AllNoise] };
    Ok((cells, warnings))
}

/// Synthetic rows per cell, aligned with `cells`.
pub fn cell_quotas(
    cells: &[Cell],
    stats: &ClassStats,
    policy: TargetPolicy,
    include_noise: bool,
) -> (Vec<usize>, Vec<Warning>) {
    let mut quotas = vec![0; cells.len()];
    let mut warnings = Vec::new();
    let mut start = 0;
    while start < cells.len() {
        let class = cells[start].class;
        let end = start + cells[start..].iter().take_while(|c| c.class == class).count();
        let span = &cells[start..end];
        let eligible: Vec<bool> = if include_noise {
            vec![true; span.len()]
        } else if span.iter().all(|c| c.group.is_noise()) {
            warnings.push(Warning::NoiseOnlyClass { class });
            vec![true; span.len()]
        } else {
            span.iter().map(|c| !c.group.is_noise()).collect()
        };
        match policy {
            TargetPolicy::Proportional => {
                let deficit = stats.n_max.saturating_sub(stats.counts[class]);
                let weights: Vec<f64> = span
                    .iter()
                    .zip(&eligible)
                    .map(|(c, &e)| if e { c.members.len() as f64 } else { 0.0 })
                    .collect();
                quotas[start..end].copy_from_slice(&largest_remainder(&weights, deficit));
            }
            TargetPolicy::LiteralMax => {
                for (q, (c, &e)) in quotas[start..end].iter_mut().zip(span.iter().zip(&eligible)) {
                    if e {
                        *q = stats.n_max.max(c.members.len()) - c.members.len();
                    }
                }
            }
        }
        start = end;
    }
    (quotas, warnings)
}

/// Cells are processed in order with one generator, so a single cluster
/// holding every minority sample reproduces [`super::smote`] draw for draw.
pub fn ac_smote(train: &Dataset, stats: &ClassStats, opts: &AcSmoteOptions, k: usize, seed: u64) -> Result<Resampled> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let (cells, mut warnings) = ac_smote_cells(train, stats, &opts.dbscan, opts.pool)?;
    let (quotas, qw) = cell_quotas(&cells, stats, opts.policy, opts.include_noise);
    warnings.extend(qw);
    let mut rng = seed::rng(seed);
    let mut b = Builder::with_all(train);
    b.warnings = warnings;
    for (cell, &quota) in cells.iter().zip(&quotas) {
        if quota == 0 {
            continue;
        }
        let metric = auto_metric(train, &train.class_indices(cell.class));
        oversample(
            &mut b,
            cell.class,
            &cell.members,
            &cell.members,
            Quota::Draw(quota),
            k,
            &metric,
            Some(cell.group),
            &mut rng,
        )?;
    }
    Ok(b.finish(Method::AcSmote))
}
