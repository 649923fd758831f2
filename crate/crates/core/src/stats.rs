//! Class counts, majority/minority partition and inverse-frequency weights.

use serde::{Deserialize, Serialize};

/// How classes are assigned to the majority side.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MajorityRule {
    /// Majority iff the class proportion is at least `1 / n_classes`.
    #[default]
    Proportion,
    /// Exactly these class indices are majority.
    Classes(Vec<usize>),
    /// Majority iff the class has at least this many samples.
    MinCount(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassStats {
    pub counts: Vec<usize>,
    pub n_max: usize,
    pub majority: Vec<bool>,
    /// `n_max / count`; classes with no samples get weight 0.
    pub weights: Vec<f64>,
}

pub fn class_stats(labels: &[usize], n_classes: usize) -> ClassStats {
    class_stats_with(labels, n_classes, &MajorityRule::Proportion)
}

pub fn class_stats_with(labels: &[usize], n_classes: usize, rule: &MajorityRule) -> ClassStats {
    let n_classes = n_classes.max(labels.iter().map(|&l| l + 1).max().unwrap_or(0));
    let mut counts = vec![0usize; n_classes];
    for &l in labels {
        counts[l] += 1;
    }
    let n_max = counts.iter().copied().max().unwrap_or(0);
    let total = labels.len();
    let majority = (0..n_classes)
        .map(|c| match rule {
            MajorityRule::Proportion => counts[c] > 0 && counts[c] * n_classes >= total,
            MajorityRule::Classes(list) => list.contains(&c),
            MajorityRule::MinCount(t) => counts[c] >= *t,
        })
        .collect();
    let weights = counts
        .iter()
        .map(|&n| if n == 0 { 0.0 } else { n_max as f64 / n as f64 })
        .collect();
    ClassStats {
        counts,
        n_max,
        majority,
        weights,
    }
}

impl ClassStats {
    pub fn n_classes(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Non-empty minority classes, ascending.
    pub fn minority_classes(&self) -> Vec<usize> {
        (0..self.n_classes())
            .filter(|&c| !self.majority[c] && self.counts[c] > 0)
            .collect()
    }

    pub fn majority_classes(&self) -> Vec<usize> {
        (0..self.n_classes()).filter(|&c| self.majority[c]).collect()
    }

    pub fn is_minority(&self, class: usize) -> bool {
        !self.majority[class]
    }
}
