//! Classifiers: class-weighted CART trees, random forests and a linear SVM.

mod forest;
mod svm;
mod tree;

pub use forest::{train_forest, Forest, ForestConfig, FOREST_FORMAT_VERSION};
pub use svm::{feature_map, train_linear_svm, LinearSvm, LinearSvmModel, SvmParams};
pub use tree::{Node, SplitTest, Tree, TreeParams};

use serde::{Deserialize, Serialize};

/// Row-major n_rows × n_classes matrix of per-class scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreMatrix {
    n_classes: usize,
    values: Vec<f64>,
}

impl ScoreMatrix {
    pub fn new(n_classes: usize, values: Vec<f64>) -> Self {
        assert!(n_classes > 0 && values.len().is_multiple_of(n_classes), "ragged score matrix");
        ScoreMatrix { n_classes, values }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n_classes = rows.first().map_or(1, Vec::len);
        ScoreMatrix::new(n_classes, rows.concat())
    }

    pub fn n_rows(&self) -> usize {
        self.values.len() / self.n_classes
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_classes..(i + 1) * self.n_classes]
    }

    pub fn column(&self, class: usize) -> Vec<f64> {
        self.values.iter().skip(class).step_by(self.n_classes).copied().collect()
    }

    /// Highest-scoring class per row; ties go to the lowest class index.
    pub fn argmax(&self) -> Vec<usize> {
        (0..self.n_rows())
            .map(|i| {
                let r = self.row(i);
                let mut best = 0;
                for c in 1..r.len() {
                    if r[c] > r[best] {
                        best = c;
                    }
                }
                best
            })
            .collect()
    }
}
