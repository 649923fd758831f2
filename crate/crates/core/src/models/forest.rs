use std::path::Path;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{Tree, TreeParams};
use super::ScoreMatrix;
use crate::dataset::{Dataset, Feature};
use crate::error::{Error, Result};
use crate::seed;

pub const FOREST_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    /// Fraction of features examined per split; `None` means `√d / d`.
    pub max_features: Option<f64>,
    pub bootstrap: bool,
    /// Per-class weights, usually `ClassStats::weights`.
    pub class_weights: Option<Vec<f64>>,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            n_trees: 100,
            max_depth: None,
            min_samples_leaf: 1,
            max_features: None,
            bootstrap: true,
            class_weights: None,
            seed: 0,
        }
    }
}

impl ForestConfig {
    fn features_per_split(&self, d: usize) -> Result<usize> {
        let frac = self.max_features.unwrap_or_else(|| (d as f64).sqrt() / d as f64);
        if !(frac > 0.0 && frac <= 1.0) {
            return Err(Error::InvalidParameter(format!("max_features must lie in (0, 1], got {frac}")));
        }
        Ok(((frac * d as f64).round() as usize).clamp(1, d))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub format_version: u32,
    pub features: Vec<Feature>,
    pub class_names: Vec<String>,
    pub trees: Vec<Tree>,
}

/// Bagged class-weighted CART trees. Tree `t` draws from its own stream
/// seeded with `derive_seed(config.seed, [t])`, so results do not depend on
/// thread scheduling.
pub fn train_forest(train: &Dataset, config: &ForestConfig) -> Result<Forest> {
    if config.n_trees == 0 {
        return Err(Error::InvalidParameter("n_trees must be at least 1".into()));
    }
    if train.n_features() == 0 {
        return Err(Error::InvalidParameter("no features to split on".into()));
    }
    let k = train.n_classes();
    let present = (0..k).filter(|&c| train.labels().contains(&c)).count();
    if present < 2 {
        return Err(Error::Degenerate("random forest needs at least two classes".into()));
    }
    let weights = match &config.class_weights {
        Some(w) if w.len() != k => {
            return Err(Error::InvalidParameter(format!("{} class weights for {k} classes", w.len())))
        }
        Some(w) if w.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) => {
            return Err(Error::InvalidParameter("class weights must be finite and non-negative".into()))
        }
        Some(w) => w.clone(),
        None => vec![1.0; k],
    };
    let params = TreeParams {
        max_depth: config.max_depth,
        min_samples_leaf: config.min_samples_leaf.max(1),
        max_features: config.features_per_split(train.n_features())?,
    };
    let n = train.n_samples();
    let trees = (0..config.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = seed::rng(seed::derive_seed(config.seed, &[t as u64]));
            let entries: Vec<usize> = if config.bootstrap {
                (0..n).map(|_| rng.gen_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            Tree::fit(train, &entries, &weights, &params, &mut rng)
        })
        .collect();
    Ok(Forest {
        format_version: FOREST_FORMAT_VERSION,
        features: train.features().to_vec(),
        class_names: train.class_names().to_vec(),
        trees,
    })
}

impl Forest {
    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    /// Mean of the trees' leaf distributions, per row.
    pub fn predict_scores(&self, data: &Dataset) -> Result<ScoreMatrix> {
        if data.features() != self.features.as_slice() {
            return Err(Error::SchemaMismatch("features differ from the training schema".into()));
        }
        let k = self.n_classes();
        let inv = 1.0 / self.trees.len() as f64;
        let rows: Vec<Vec<f64>> = (0..data.n_samples())
            .into_par_iter()
            .map(|i| {
                let x = data.row(i);
                let mut acc = vec![0.0; k];
                for t in &self.trees {
                    for (a, p) in acc.iter_mut().zip(t.leaf(x)) {
                        *a += p;
                    }
                }
                acc.iter_mut().for_each(|a| *a *= inv);
                acc
            })
            .collect();
        Ok(ScoreMatrix::new(k, rows.concat()))
    }

    pub fn predict(&self, data: &Dataset) -> Result<Vec<usize>> {
        Ok(self.predict_scores(data)?.argmax())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| Error::Model(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: Forest = serde_json::from_str(text).map_err(|e| Error::Model(e.to_string()))?;
        if f.format_version != FOREST_FORMAT_VERSION {
            return Err(Error::Model(format!(
                "unsupported forest format version {} (expected {FOREST_FORMAT_VERSION})",
                f.format_version
            )));
        }
        Ok(f)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Forest::from_json(&text)
    }
}
