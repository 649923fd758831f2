//! DBSCAN parameter search for AC-SMOTE on a nested split of the training
//! data.

use rayon::prelude::*;
use serde::Serialize;

use super::config::{Learner, ModelConfig};
use crate::clustering::DbscanParams;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::metrics::{confusion, precision_recall_f1};
use crate::resample::{ac_smote, AcSmoteOptions};
use crate::seed::{derive_seed, tag};
use crate::split::{stratified_split, SplitSpec};
use crate::standardize::{standardize_apply, standardize_fit};
use crate::stats::{class_stats_with, MajorityRule};

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub eps: Vec<f64>,
    pub min_pts: Vec<usize>,
    /// Share of `train` fitted on in each inner round; the rest scores.
    pub inner_fraction: f64,
    pub inner_rounds: usize,
    pub model: ModelConfig,
    pub k: usize,
    /// Everything but the DBSCAN parameters.
    pub ac: AcSmoteOptions,
    pub majority: MajorityRule,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridCell {
    pub eps: f64,
    pub min_pts: usize,
    /// Mean minority-class F1 over the inner rounds.
    pub score: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridResult {
    pub best: DbscanParams,
    pub best_score: f64,
    /// Every cell, eps-major in ascending order.
    pub cells: Vec<GridCell>,
}

impl GridResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eps,min_pts,score,error\n");
        for c in &self.cells {
            let score = c.score.map(|s| s.to_string()).unwrap_or_default();
            let err = c.error.as_deref().unwrap_or("").replace([',', '\n'], " ");
            out.push_str(&format!("{},{},{score},{err}\n", c.eps, c.min_pts));
        }
        out
    }
}

/// Scores every (eps, min_pts) pair by the mean F1 of the minority classes
/// on inner held-out rows. All cells of one inner round share the split,
/// the resampling seed and the model seed. The best score wins; ties go to
/// the smaller eps, then the smaller min_pts.
pub fn grid_search_dbscan(train: &Dataset, spec: &GridSpec) -> Result<GridResult> {
    if spec.eps.is_empty() || spec.min_pts.is_empty() {
        return Err(Error::InvalidParameter("grid needs at least one eps and one min_pts value".into()));
    }
    if spec.inner_rounds == 0 {
        return Err(Error::InvalidParameter("inner_rounds must be at least 1".into()));
    }
    let mut eps = spec.eps.clone();
    eps.sort_by(f64::total_cmp);
    eps.dedup();
    let mut min_pts = spec.min_pts.clone();
    min_pts.sort_unstable();
    min_pts.dedup();
    let pairs: Vec<DbscanParams> = eps
        .iter()
        .flat_map(|&e| min_pts.iter().map(move |&m| DbscanParams { eps: e, min_pts: m }))
        .collect();
    for p in &pairs {
        p.validate()?;
    }

    let mut folds = Vec::with_capacity(spec.inner_rounds);
    for r in 0..spec.inner_rounds {
        let split = SplitSpec {
            train_fraction: spec.inner_fraction,
            seed: derive_seed(spec.seed, &[tag("grid-split"), r as u64]),
            stratified: true,
        };
        let (fit_raw, val_raw) = stratified_split(train, &split)?;
        let params = standardize_fit(&fit_raw);
        let fit = standardize_apply(&fit_raw, &params)?;
        let val = standardize_apply(&val_raw, &params)?;
        folds.push((fit, val, r as u64));
    }

    let score_pair = |p: &DbscanParams| -> Result<f64> {
        let mut total = 0.0;
        for (fit, val, r) in &folds {
            let stats = class_stats_with(fit.labels(), fit.n_classes(), &spec.majority);
            let minority = stats.minority_classes();
            if minority.is_empty() {
                return Err(Error::Degenerate("no minority class in the inner training split".into()));
            }
            let opts = AcSmoteOptions { dbscan: *p, ..spec.ac };
            let out = ac_smote(fit, &stats, &opts, spec.k, derive_seed(spec.seed, &[tag("grid-resample"), *r]))?;
            let scores = spec.model.fit_score(
                &out.data,
                val,
                &spec.majority,
                derive_seed(spec.seed, &[tag("grid-model"), *r]),
            )?;
            let cm = confusion(val.labels(), &scores.argmax(), val.n_classes())?;
            total += minority.iter().map(|&c| precision_recall_f1(&cm, c).f1).sum::<f64>() / minority.len() as f64;
        }
        Ok(total / folds.len() as f64)
    };

    let cells: Vec<GridCell> = pairs
        .par_iter()
        .map(|p| {
            let r = score_pair(p);
            GridCell {
                eps: p.eps,
                min_pts: p.min_pts,
                score: r.as_ref().ok().copied(),
                error: r.err().map(|e| e.to_string()),
            }
        })
        .collect();
    let mut best: Option<(DbscanParams, f64)> = None;
    for c in &cells {
        if let Some(s) = c.score {
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((DbscanParams { eps: c.eps, min_pts: c.min_pts }, s));
            }
        }
    }
    let (best, best_score) = best.ok_or_else(|| {
        let first = cells.iter().find_map(|c| c.error.clone()).unwrap_or_default();
        Error::Degenerate(format!("every grid cell failed; first error: {first}"))
    })?;
    Ok(GridResult { best, best_score, cells })
}
