//! TOML experiment configuration.
//!
//! ```toml
//! seed = 7
//! output = "out"
//!
//! [dataset]
//! path = "trips.csv"
//! label = "mode"
//! features = [
//!     { name = "distance", kind = "continuous" },
//!     { name = "purpose", kind = "nominal" },
//! ]
//!
//! [split]
//! train_fraction = 0.6754
//! rounds = 5
//!
//! [resample]
//! methods = ["none", "smote_nc", "ac_smote"]
//! k = 5
//!
//! [resample.ac_smote]
//! eps = 0.8
//! min_pts = 5
//!
//! [[models]]
//! kind = "forest"
//! n_trees = 100
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::synth::SynthSpec;
use crate::clustering::DbscanParams;
use crate::dataset::{load_csv_with, Dataset, Feature, LoadOptions};
use crate::error::{Error, Result};
use crate::models::{train_forest, ForestConfig, LinearSvmModel, ScoreMatrix, SvmParams};
use crate::resample::{AcSmoteOptions, Method, PoolMode, ResampleSpec, TargetPolicy};
use crate::stats::{class_stats_with, MajorityRule};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    /// Directory for report files.
    #[serde(default)]
    pub output: Option<PathBuf>,
    pub dataset: DatasetConfig,
    #[serde(default)]
    pub split: SplitConfig,
    #[serde(default)]
    pub majority: MajorityRule,
    #[serde(default)]
    pub resample: ResampleConfig,
    #[serde(default = "default_models")]
    pub models: Vec<ModelConfig>,
    #[serde(default = "Metric::all")]
    pub metrics: Vec<Metric>,
    #[serde(default)]
    pub grid: Option<GridConfig>,
}

fn default_models() -> Vec<ModelConfig> {
    vec![ModelConfig::Forest(ForestModel::default())]
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let c: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut c = Self::from_toml(&text)?;
        // relative dataset and output paths are taken from the config's directory
        if let Some(dir) = path.parent() {
            if let Some(p) = &c.dataset.path {
                if p.is_relative() {
                    c.dataset.path = Some(dir.join(p));
                }
            }
            if let Some(o) = &c.output {
                if o.is_relative() {
                    c.output = Some(dir.join(o));
                }
            }
        }
        Ok(c)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.split.rounds == 0 {
            return Err(Error::Config("split.rounds must be at least 1".into()));
        }
        if !(self.split.train_fraction > 0.0 && self.split.train_fraction < 1.0) {
            return Err(Error::Config("split.train_fraction must lie in (0, 1)".into()));
        }
        if self.resample.methods.is_empty() {
            return Err(Error::Config("resample.methods is empty".into()));
        }
        if self.models.is_empty() {
            return Err(Error::Config("no models configured".into()));
        }
        if self.metrics.is_empty() {
            return Err(Error::Config("metrics is empty".into()));
        }
        let names = self.model_names();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Config(format!("model name `{n}` is used twice")));
            }
        }
        for (i, m) in self.resample.methods.iter().enumerate() {
            if self.resample.methods[..i].contains(m) {
                return Err(Error::Config(format!("resampler `{m}` is listed twice")));
            }
        }
        self.resample.ac_smote.dbscan().validate()?;
        match (&self.dataset.path, &self.dataset.synthetic) {
            (None, None) => return Err(Error::Config("dataset needs a path or a synthetic section".into())),
            (Some(_), Some(_)) => return Err(Error::Config("dataset has both a path and a synthetic section".into())),
            (Some(_), None) if self.dataset.features.is_empty() => {
                return Err(Error::Config("dataset.features is empty".into()))
            }
            _ => {}
        }
        if let Some(g) = &self.grid {
            if g.eps.is_empty() || g.min_pts.is_empty() {
                return Err(Error::Config("grid.eps and grid.min_pts must be nonempty".into()));
            }
        }
        Ok(())
    }

    pub fn model_names(&self) -> Vec<String> {
        self.models.iter().map(|m| m.name().to_string()).collect()
    }

    /// Reads the CSV, or generates the synthetic table.
    pub fn load_dataset(&self) -> Result<Dataset> {
        self.dataset.load()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default = "default_label")]
    pub label: String,
    #[serde(default)]
    pub features: Vec<Feature>,
    #[serde(default)]
    pub class_order: Option<Vec<String>>,
    #[serde(default)]
    pub skip_invalid_rows: bool,
    /// Generate the data instead of reading a file.
    #[serde(default)]
    pub synthetic: Option<SynthSpec>,
}

fn default_label() -> String {
    "mode".into()
}

impl DatasetConfig {
    pub fn load(&self) -> Result<Dataset> {
        if let Some(spec) = &self.synthetic {
            return Ok(super::synth::generate(spec)?.data);
        }
        let path = self.path.as_ref().ok_or_else(|| Error::Config("dataset.path is missing".into()))?;
        let opts = LoadOptions {
            class_order: self.class_order.clone(),
            skip_invalid_rows: self.skip_invalid_rows,
        };
        let (data, summary) = load_csv_with(path, &self.features, &self.label, &opts)?;
        if summary.rejected_rows > 0 {
            log::warn!("{}: skipped {} invalid row(s)", path.display(), summary.rejected_rows);
        }
        Ok(data)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitConfig {
    pub train_fraction: f64,
    pub rounds: usize,
    pub stratified: bool,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig {
            train_fraction: 0.6754,
            rounds: 5,
            stratified: true,
        }
    }
}

/// A resampling method, or no resampling at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Resampler {
    None,
    Method(Method),
}

impl Resampler {
    pub fn all() -> Vec<Resampler> {
        std::iter::once(Resampler::None)
            .chain(Method::ALL.into_iter().map(Resampler::Method))
            .collect()
    }

    pub fn name(self) -> &'static str {
        match self {
            Resampler::None => "none",
            Resampler::Method(m) => m.name(),
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Resampler::None => "None",
            Resampler::Method(m) => m.display_name(),
        }
    }
}

impl fmt::Display for Resampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Resampler {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" | "baseline" => Ok(Resampler::None),
            _ => s.parse().map(Resampler::Method),
        }
    }
}

impl TryFrom<String> for Resampler {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Resampler> for String {
    fn from(r: Resampler) -> String {
        r.name().to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResampleConfig {
    pub methods: Vec<Resampler>,
    pub k: usize,
    pub m: usize,
    pub ac_smote: AcSmoteConfig,
    pub svm: SvmParams,
}

impl Default for ResampleConfig {
    fn default() -> Self {
        ResampleConfig {
            methods: Resampler::all(),
            k: 5,
            m: 10,
            ac_smote: AcSmoteConfig::default(),
            svm: SvmParams::default(),
        }
    }
}

impl ResampleConfig {
    pub fn spec(&self, method: Method, seed: u64) -> ResampleSpec {
        ResampleSpec {
            method,
            k: self.k,
            m: self.m,
            seed,
            ac: self.ac_smote.options(),
            svm: self.svm.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AcSmoteConfig {
    pub eps: f64,
    pub min_pts: usize,
    pub policy: TargetPolicy,
    pub include_noise: bool,
    pub pool: PoolMode,
}

impl Default for AcSmoteConfig {
    fn default() -> Self {
        let d = AcSmoteOptions::default();
        AcSmoteConfig {
            eps: d.dbscan.eps,
            min_pts: d.dbscan.min_pts,
            policy: d.policy,
            include_noise: d.include_noise,
            pool: d.pool,
        }
    }
}

impl AcSmoteConfig {
    pub fn dbscan(&self) -> DbscanParams {
        DbscanParams {
            eps: self.eps,
            min_pts: self.min_pts,
        }
    }

    pub fn options(&self) -> AcSmoteOptions {
        AcSmoteOptions {
            dbscan: self.dbscan(),
            policy: self.policy,
            include_noise: self.include_noise,
            pool: self.pool,
        }
    }
}

/// Something that can be fitted on a training table and score another.
pub trait Learner: Send + Sync {
    fn name(&self) -> &str;
    fn fit_score(&self, train: &Dataset, test: &Dataset, majority: &MajorityRule, seed: u64) -> Result<ScoreMatrix>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelConfig {
    Forest(ForestModel),
    LinearSvm(SvmModel),
}

impl ModelConfig {
    pub fn name(&self) -> &str {
        match self {
            ModelConfig::Forest(f) => f.name.as_deref().unwrap_or("forest"),
            ModelConfig::LinearSvm(s) => s.name.as_deref().unwrap_or("linear_svm"),
        }
    }

    /// Column header in report tables.
    pub fn display_name(&self) -> String {
        match self {
            ModelConfig::Forest(ForestModel { name: None, .. }) => "Random Forest".into(),
            ModelConfig::LinearSvm(SvmModel { name: None, .. }) => "Linear SVM".into(),
            other => other.name().to_string(),
        }
    }
}

impl Learner for ModelConfig {
    fn name(&self) -> &str {
        ModelConfig::name(self)
    }

    fn fit_score(&self, train: &Dataset, test: &Dataset, majority: &MajorityRule, seed: u64) -> Result<ScoreMatrix> {
        match self {
            ModelConfig::Forest(f) => {
                let class_weights = if f.class_weighted {
                    Some(class_stats_with(train.labels(), train.n_classes(), majority).weights)
                } else {
                    None
                };
                let cfg = ForestConfig {
                    n_trees: f.n_trees,
                    max_depth: f.max_depth,
                    min_samples_leaf: f.min_samples_leaf,
                    max_features: f.max_features,
                    bootstrap: f.bootstrap,
                    class_weights,
                    seed,
                };
                train_forest(train, &cfg)?.predict_scores(test)
            }
            ModelConfig::LinearSvm(s) => {
                let params = SvmParams {
                    lambda: s.lambda,
                    epochs: s.epochs,
                    balanced: s.balanced,
                };
                LinearSvmModel::fit(train, &params, seed)?.predict_scores(test)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestModel {
    pub name: Option<String>,
    pub n_trees: usize,
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    pub max_features: Option<f64>,
    pub bootstrap: bool,
    /// Weight classes by `N_max / N_c` of the (resampled) training set.
    pub class_weighted: bool,
}

impl Default for ForestModel {
    fn default() -> Self {
        let d = ForestConfig::default();
        ForestModel {
            name: None,
            n_trees: d.n_trees,
            max_depth: d.max_depth,
            min_samples_leaf: d.min_samples_leaf,
            max_features: d.max_features,
            bootstrap: d.bootstrap,
            class_weighted: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SvmModel {
    pub name: Option<String>,
    pub lambda: f64,
    pub epochs: usize,
    pub balanced: bool,
}

impl Default for SvmModel {
    fn default() -> Self {
        let d = SvmParams::default();
        SvmModel {
            name: None,
            lambda: d.lambda,
            epochs: d.epochs,
            balanced: d.balanced,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    F1,
    Precision,
    Recall,
    Auc,
    AveragePrecision,
}

impl Metric {
    pub fn all() -> Vec<Metric> {
        vec![Metric::F1, Metric::Precision, Metric::Recall, Metric::Auc, Metric::AveragePrecision]
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::F1 => "f1",
            Metric::Precision => "precision",
            Metric::Recall => "recall",
            Metric::Auc => "auc",
            Metric::AveragePrecision => "average_precision",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Metric::F1 => "F1",
            Metric::Precision => "Precision",
            Metric::Recall => "Recall",
            Metric::Auc => "ROC-AUC",
            Metric::AveragePrecision => "Average precision",
        }
    }
}

/// DBSCAN grid searched by the `grid-search` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub eps: Vec<f64>,
    pub min_pts: Vec<usize>,
    /// Share of the training split used to fit inside the search.
    pub inner_fraction: f64,
    pub inner_rounds: usize,
    /// Model scoring each cell; the first configured model when absent.
    pub model: Option<ModelConfig>,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            eps: vec![0.25, 0.5, 1.0, 2.0],
            min_pts: vec![3, 5, 10],
            inner_fraction: 0.6754,
            inner_rounds: 1,
            model: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::FeatureKind;

    const SAMPLE: &str = r#"
seed = 3
[dataset]
path = "data.csv"
label = "mode"
features = [{ name = "a", kind = "continuous" }, { name = "b", kind = "nominal" }]

[split]
rounds = 2

[resample]
methods = ["none", "SMOTE-NC", "ac_smote"]

[resample.ac_smote]
eps = 33.0
min_pts = 99

[[models]]
kind = "forest"
n_trees = 10

[[models]]
kind = "linear_svm"
lambda = 0.01
"#;

    #[test]
    fn parses_sample() {
        let c = ExperimentConfig::from_toml(SAMPLE).unwrap();
        assert_eq!(c.seed, 3);
        assert_eq!(c.split.rounds, 2);
        assert_eq!(c.split.train_fraction, 0.6754);
        assert_eq!(
            c.resample.methods,
            vec![Resampler::None, Resampler::Method(Method::SmoteNc), Resampler::Method(Method::AcSmote)]
        );
        assert_eq!(c.resample.ac_smote.dbscan(), DbscanParams { eps: 33.0, min_pts: 99 });
        assert_eq!(c.dataset.features[1].kind, FeatureKind::Nominal);
        assert_eq!(c.model_names(), vec!["forest", "linear_svm"]);
        assert_eq!(c.metrics, Metric::all());
        let back = ExperimentConfig::from_toml(&c.to_toml().unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(matches!(ExperimentConfig::from_toml("seed = 1"), Err(Error::Config(_))));
        let zero_rounds = SAMPLE.replace("rounds = 2", "rounds = 0");
        assert!(ExperimentConfig::from_toml(&zero_rounds).is_err());
        let unknown = SAMPLE.replace("\"none\",", "\"kmeans\",");
        assert!(ExperimentConfig::from_toml(&unknown).is_err());
        let typo = SAMPLE.replace("rounds = 2", "rouns = 2");
        assert!(ExperimentConfig::from_toml(&typo).is_err());
        let dup = SAMPLE.replace("kind = \"linear_svm\"", "kind = \"forest\"");
        assert!(ExperimentConfig::from_toml(&dup).is_err());
    }
}
