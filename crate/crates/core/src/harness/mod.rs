//! Experiment orchestration: repeated stratified splits over a
//! resampler × model grid, DBSCAN parameter search, the synthetic data
//! generator and cluster reports.

mod cluster_report;
mod config;
mod experiment;
mod grid;
mod report;
mod synth;

pub use cluster_report::{cluster_report, ClusterGroup, ClusterReport};
pub use config::{
    AcSmoteConfig, DatasetConfig, ExperimentConfig, ForestModel, GridConfig, Learner, Metric, ModelConfig,
    ResampleConfig, Resampler, SplitConfig, SvmModel,
};
pub use experiment::{
    model_seed, resample_seed, run_experiment, run_experiment_on, split_seed, CellOutcome, ExperimentResult,
};
pub use grid::{grid_search_dbscan, GridCell, GridResult, GridSpec};
pub use report::{
    cells_jsonl, mean_std, render_text, rounds_csv, summarize, summary_csv, write_reports, SummaryRow, MACRO,
    REPORT_FILES,
};
pub use synth::{generate, make_synthetic_lpmc_like, SynthSpec, SyntheticData, LPMC_CLASSES, LPMC_PROPORTIONS};
