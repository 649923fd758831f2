//! Cluster composition of the pooled minority samples, as AC-SMOTE sees
//! them.

use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;

use crate::clustering::{dbscan, ClusterLabel, DbscanParams};
use crate::dataset::{Dataset, FeatureKind};
use crate::error::{Error, Result};
use crate::neighbors::Points;
use crate::stats::ClassStats;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterGroup {
    pub label: ClusterLabel,
    pub size: usize,
    /// Per class, over all classes of the dataset.
    pub class_counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterReport {
    pub params: DbscanParams,
    pub class_names: Vec<String>,
    pub minority_classes: Vec<usize>,
    pub n_clusters: usize,
    pub total: usize,
    /// Noise group first, then clusters by id; empty noise group included.
    pub groups: Vec<ClusterGroup>,
    /// Dataset rows that were clustered, with their labels.
    pub rows: Vec<usize>,
    pub labels: Vec<ClusterLabel>,
}

pub fn cluster_report(data: &Dataset, stats: &ClassStats, params: &DbscanParams) -> Result<ClusterReport> {
    params.validate()?;
    let cols = data.continuous_columns();
    if cols.is_empty() {
        return Err(Error::InvalidParameter("clustering needs continuous features".into()));
    }
    let rows: Vec<usize> = (0..data.n_samples())
        .filter(|&i| stats.is_minority(data.labels()[i]))
        .collect();
    let kinds = vec![FeatureKind::Continuous; cols.len()];
    let matrix = data.continuous_matrix(&rows);
    let a = dbscan(&Points::new(&matrix, &kinds), params);
    let groups = a
        .groups()
        .into_iter()
        .map(|(label, members)| {
            let mut class_counts = vec![0; data.n_classes()];
            for &m in &members {
                class_counts[data.labels()[rows[m]]] += 1;
            }
            ClusterGroup {
                label,
                size: members.len(),
                class_counts,
            }
        })
        .collect();
    Ok(ClusterReport {
        params: *params,
        class_names: data.class_names().to_vec(),
        minority_classes: stats.minority_classes(),
        n_clusters: a.n_clusters,
        total: rows.len(),
        groups,
        rows,
        labels: a.labels,
    })
}

fn percent(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        100.0 * part as f64 / whole as f64
    }
}

impl ClusterReport {
    pub fn noise_count(&self) -> usize {
        self.groups.first().map_or(0, |g| g.size)
    }

    pub fn noise_share(&self) -> f64 {
        percent(self.noise_count(), self.total)
    }

    /// Share of each minority class inside `group`, in percent.
    pub fn composition(&self, group: usize) -> Vec<f64> {
        let g = &self.groups[group];
        self.minority_classes
            .iter()
            .map(|&c| percent(g.class_counts[c], g.size))
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let names: Vec<&str> = self.minority_classes.iter().map(|&c| self.class_names[c].as_str()).collect();
        let _ = writeln!(out, "DBSCAN eps={} min_pts={}", self.params.eps, self.params.min_pts);
        let _ = writeln!(out, "minority samples: {} ({})", self.total, names.join(", "));
        let _ = writeln!(
            out,
            "clusters: {}, noise: {} ({:.1}%)",
            self.n_clusters,
            self.noise_count(),
            self.noise_share()
        );
        let width = names.iter().map(|n| n.len()).max().unwrap_or(0).max(7) + 2;
        let _ = write!(out, "{:<9}{:>8}{:>9}", "cluster", "size", "share");
        for n in &names {
            let _ = write!(out, "{n:>width$}");
        }
        out.push('\n');
        for (i, g) in self.groups.iter().enumerate() {
            let _ = write!(out, "{:<9}{:>8}{:>8.1}%", g.label.display_id(), g.size, percent(g.size, self.total));
            for p in self.composition(i) {
                let cell = format!("{p:.1}%");
                let _ = write!(out, "{cell:>width$}");
            }
            out.push('\n');
        }
        out
    }

    /// `x,y,cluster,class` for every clustered row, reading the two columns
    /// from `data` (usually the unstandardized table).
    pub fn write_scatter<W: Write>(&self, data: &Dataset, x: usize, y: usize, writer: W) -> Result<()> {
        if x >= data.n_features() || y >= data.n_features() {
            return Err(Error::InvalidParameter("scatter column out of range".into()));
        }
        let mut w = csv::Writer::from_writer(writer);
        w.write_record([
            data.features()[x].name.as_str(),
            data.features()[y].name.as_str(),
            "cluster",
            "class",
        ])?;
        for (&row, label) in self.rows.iter().zip(&self.labels) {
            let r = data.row(row);
            w.write_record([
                r[x].to_string(),
                r[y].to_string(),
                label.display_id().to_string(),
                data.class_names()[data.labels()[row]].clone(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<scatter output>", e))?;
        Ok(())
    }
}
