//! DBSCAN over a point matrix.
//!
//! A point is core when its closed `eps`-ball (itself included) holds at
//! least `min_pts` points. Points are scanned in index order and each new
//! cluster is expanded breadth-first before the scan resumes, so cluster ids
//! follow the index of their lowest core point and a border point shared by
//! several clusters belongs to the one with the smallest id.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::neighbors::{Metric, Points};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DbscanParams {
    pub eps: f64,
    pub min_pts: usize,
}

impl DbscanParams {
    pub fn new(eps: f64, min_pts: usize) -> Result<Self> {
        let p = DbscanParams { eps, min_pts };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) || !self.eps.is_finite() {
            return Err(Error::InvalidParameter(format!("eps must be positive, got {}", self.eps)));
        }
        if self.min_pts == 0 {
            return Err(Error::InvalidParameter("min_pts must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClusterLabel {
    Noise,
    Cluster(usize),
}

impl ClusterLabel {
    /// Id used in reports: noise is 0, cluster `c` is `c + 1`.
    pub fn display_id(self) -> usize {
        match self {
            ClusterLabel::Noise => 0,
            ClusterLabel::Cluster(c) => c + 1,
        }
    }

    pub fn is_noise(self) -> bool {
        self == ClusterLabel::Noise
    }
}

impl fmt::Display for ClusterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_id())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterAssignment {
    pub labels: Vec<ClusterLabel>,
    pub core: Vec<bool>,
    pub n_clusters: usize,
}

impl ClusterAssignment {
    pub fn noise_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_noise()).count()
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_clusters];
        for l in &self.labels {
            if let ClusterLabel::Cluster(c) = l {
                sizes[*c] += 1;
            }
        }
        sizes
    }

    /// Members of each group, noise first, then clusters by id.
    pub fn groups(&self) -> Vec<(ClusterLabel, Vec<usize>)> {
        let mut out: Vec<(ClusterLabel, Vec<usize>)> = std::iter::once(ClusterLabel::Noise)
            .chain((0..self.n_clusters).map(ClusterLabel::Cluster))
            .map(|l| (l, Vec::new()))
            .collect();
        for (i, l) in self.labels.iter().enumerate() {
            out[l.display_id()].1.push(i);
        }
        out
    }
}

/// DBSCAN with Euclidean distance over every column of `points`.
pub fn dbscan(points: &Points, params: &DbscanParams) -> ClusterAssignment {
    dbscan_with_metric(points, params, &Metric::Euclidean).expect("euclidean dbscan on valid params")
}

pub fn dbscan_with_metric(points: &Points, params: &DbscanParams, metric: &Metric) -> Result<ClusterAssignment> {
    params.validate()?;
    metric.validate(points.kinds())?;
    let n = points.len();
    let kinds = points.kinds();
    let region = |p: usize| -> Vec<usize> {
        let row = points.row(p);
        (0..n)
            .filter(|&q| metric.distance(row, points.row(q), kinds) <= params.eps)
            .collect()
    };

    let mut labels: Vec<Option<ClusterLabel>> = vec![None; n];
    let mut core = vec![false; n];
    let mut n_clusters = 0;
    let mut queue = VecDeque::new();
    for p in 0..n {
        if labels[p].is_some() {
            continue;
        }
        let nbrs = region(p);
        if nbrs.len() < params.min_pts {
            labels[p] = Some(ClusterLabel::Noise);
            continue;
        }
        let id = ClusterLabel::Cluster(n_clusters);
        n_clusters += 1;
        labels[p] = Some(id);
        core[p] = true;
        queue.extend(nbrs);
        while let Some(q) = queue.pop_front() {
            match labels[q] {
                Some(ClusterLabel::Noise) => {
                    // already queried and found sparse: border point
                    labels[q] = Some(id);
                    continue;
                }
                Some(_) => continue,
                None => {}
            }
            labels[q] = Some(id);
            let nq = region(q);
            if nq.len() >= params.min_pts {
                core[q] = true;
                queue.extend(nq.into_iter().filter(|&r| !matches!(labels[r], Some(ClusterLabel::Cluster(_)))));
            }
        }
    }
    Ok(ClusterAssignment {
        labels: labels.into_iter().map(|l| l.expect("every point visited")).collect(),
        core,
        n_clusters,
    })
}
