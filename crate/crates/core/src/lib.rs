//! Resampling toolkit for class-imbalanced tabular data.
//!
//! The crate bundles seven baseline resamplers (random over/under-sampling,
//! SMOTE, SMOTE-NC, Borderline-SMOTE, ADASYN, SVM-SMOTE) together with
//! AC-SMOTE, which clusters the pooled minority samples with DBSCAN and runs
//! SMOTE inside every (cluster, class) cell. Around the resamplers sit a
//! class-weighted random forest, a linear SVM, per-class metrics and an
//! experiment harness that repeats stratified splits and reports per-class
//! F1, ROC-AUC and average precision.

// `!(x > 0.0)` checks are written to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod clustering;
pub mod dataset;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod models;
pub mod neighbors;
pub mod resample;
pub mod seed;
pub mod split;
pub mod standardize;
pub mod stats;

pub use clustering::{dbscan, ClusterAssignment, ClusterLabel, DbscanParams};
pub use dataset::{load_csv, load_csv_with, write_csv, Dataset, Feature, FeatureKind, LoadOptions};
pub use error::{Error, ErrorKind, Result};
pub use metrics::{ClassReport, ConfusionMatrix};
pub use models::{Forest, ForestConfig, LinearSvmModel, ScoreMatrix, SvmParams};
pub use neighbors::{knn, knn_among, mixed_distance, Metric, NeighborList, Points};
pub use resample::{Method, ResampleSpec, Resampled, TargetPolicy};
pub use split::{stratified_split, SplitSpec};
pub use standardize::{standardize_apply, standardize_fit, StandardizationParams};
pub use stats::{class_stats, class_stats_with, ClassStats, MajorityRule};
