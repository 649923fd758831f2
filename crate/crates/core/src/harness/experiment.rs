//! Repeated stratified-split evaluation over a resampler × model grid.
//!
//! Sub-seeds come from [`derive_seed`] over the master seed and name tags:
//! the split of round `r` uses `(tag("split"), r)`, the resampler uses
//! `(tag("resample"), r, tag(resampler))` and the model adds `tag(model)`.
//! Adding or removing a resampler or model therefore leaves every other
//! cell's randomness unchanged.

use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, Learner, Resampler};
use crate::dataset::Dataset;
use crate::error::Result;
use crate::metrics::ClassReport;
use crate::seed::{derive_seed, tag};
use crate::split::{stratified_split, SplitSpec};
use crate::standardize::{standardize_apply, standardize_fit};
use crate::stats::class_stats_with;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellOutcome {
    pub round: usize,
    pub resampler: Resampler,
    pub model: String,
    /// Rows the model was fitted on.
    pub train_rows: usize,
    pub synthetic_rows: usize,
    pub report: Option<ClassReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub seed: u64,
    pub rounds: usize,
    pub class_names: Vec<String>,
    pub resamplers: Vec<Resampler>,
    pub models: Vec<String>,
    /// Display names aligned with `models`.
    pub model_titles: Vec<String>,
    /// Ordered by round, then resampler, then model.
    pub cells: Vec<CellOutcome>,
}

impl ExperimentResult {
    pub fn cell(&self, round: usize, resampler: Resampler, model: &str) -> Option<&CellOutcome> {
        self.cells
            .iter()
            .find(|c| c.round == round && c.resampler == resampler && c.model == model)
    }

    pub fn failed(&self) -> impl Iterator<Item = &CellOutcome> {
        self.cells.iter().filter(|c| c.error.is_some())
    }
}

pub fn split_seed(master: u64, round: usize) -> u64 {
    derive_seed(master, &[tag("split"), round as u64])
}

pub fn resample_seed(master: u64, round: usize, resampler: Resampler) -> u64 {
    derive_seed(master, &[tag("resample"), round as u64, tag(resampler.name())])
}

pub fn model_seed(master: u64, round: usize, resampler: Resampler, model: &str) -> u64 {
    derive_seed(master, &[tag("model"), round as u64, tag(resampler.name()), tag(model)])
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let data = config.load_dataset()?;
    run_experiment_on(&data, config)
}

/// Runs the grid on an already loaded table; `config.dataset` is ignored.
pub fn run_experiment_on(data: &Dataset, config: &ExperimentConfig) -> Result<ExperimentResult> {
    let mut cells = Vec::new();
    for round in 0..config.split.rounds {
        let spec = SplitSpec {
            train_fraction: config.split.train_fraction,
            seed: split_seed(config.seed, round),
            stratified: config.split.stratified,
        };
        let (train_raw, test_raw) = stratified_split(data, &spec)?;
        let params = standardize_fit(&train_raw);
        let train = standardize_apply(&train_raw, &params)?;
        let test = standardize_apply(&test_raw, &params)?;
        let stats = class_stats_with(train.labels(), train.n_classes(), &config.majority);

        let per_resampler: Vec<Vec<CellOutcome>> = config
            .resample
            .methods
            .par_iter()
            .map(|&resampler| {
                let resampled = match resampler {
                    Resampler::None => Ok((train.clone(), 0)),
                    Resampler::Method(m) => config
                        .resample
                        .spec(m, resample_seed(config.seed, round, resampler))
                        .resample(&train, &stats)
                        .map(|r| {
                            let n = r.synthetic_count();
                            (r.data, n)
                        }),
                };
                config
                    .models
                    .iter()
                    .map(|model| {
                        let name = model.name().to_string();
                        let outcome = resampled.as_ref().map_err(|e| e.to_string()).and_then(|(fit_on, _)| {
                            model
                                .fit_score(fit_on, &test, &config.majority, model_seed(config.seed, round, resampler, &name))
                                .and_then(|scores| ClassReport::from_scores(test.labels(), &scores))
                                .map_err(|e| e.to_string())
                        });
                        if let Err(e) = &outcome {
                            log::warn!("round {round}, {resampler} + {name}: {e}");
                        }
                        let (train_rows, synthetic_rows) =
                            resampled.as_ref().map_or((0, 0), |(d, n)| (d.n_samples(), *n));
                        CellOutcome {
                            round,
                            resampler,
                            model: name,
                            train_rows,
                            synthetic_rows,
                            report: outcome.as_ref().ok().cloned(),
                            error: outcome.err(),
                        }
                    })
                    .collect()
            })
            .collect();
        cells.extend(per_resampler.into_iter().flatten());
    }
    Ok(ExperimentResult {
        seed: config.seed,
        rounds: config.split.rounds,
        class_names: data.class_names().to_vec(),
        resamplers: config.resample.methods.clone(),
        models: config.model_names(),
        model_titles: config.models.iter().map(|m| m.display_name()).collect(),
        cells,
    })
}
