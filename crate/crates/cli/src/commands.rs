use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use acsmote::harness::{
    cluster_report, generate, grid_search_dbscan, render_text, run_experiment_on, split_seed, summary_csv,
    write_reports, cells_jsonl, DatasetConfig, ExperimentConfig, GridSpec, ModelConfig, Resampler,
    SynthSpec,
};
use acsmote::dataset::write_csv_to;
use acsmote::models::{train_forest, ForestConfig, SvmParams};
use acsmote::resample::{PoolMode, TargetPolicy};
use acsmote::{
    class_stats_with, standardize_apply, standardize_fit, stratified_split, ClassReport, Dataset, DbscanParams,
    Error, Feature, FeatureKind, LinearSvmModel, Method, Result, SplitSpec,
};
use clap::Args;
use serde_json::{json, Value};

use crate::model_file::{Classifier, ModelFile, MODEL_FILE_VERSION};
use crate::{output, Cli, Command, Format};

#[derive(Debug, Args)]
pub struct ResampleArgs {
    /// Resampling method, e.g. `ac_smote`, `smote_nc`, `ros`.
    #[arg(long, default_value = "ac_smote")]
    pub method: String,
    #[command(flatten)]
    pub params: ResampleParams,
    /// Provenance CSV; defaults to `<output stem>.provenance.csv`.
    #[arg(long)]
    pub provenance: Option<PathBuf>,
}

/// Overrides of `[resample]` keys.
#[derive(Debug, Args, Default)]
pub struct ResampleParams {
    /// Interpolation neighbors (`resample.k`).
    #[arg(long)]
    pub k: Option<usize>,
    /// Borderline danger-test neighbors (`resample.m`).
    #[arg(long)]
    pub m: Option<usize>,
    /// DBSCAN radius (`resample.ac_smote.eps`).
    #[arg(long)]
    pub eps: Option<f64>,
    /// DBSCAN density threshold (`resample.ac_smote.min_pts`).
    #[arg(long)]
    pub min_pts: Option<usize>,
    /// `proportional` or `literal_max` (`resample.ac_smote.policy`).
    #[arg(long)]
    pub policy: Option<String>,
    /// `pooled` or `per_class` (`resample.ac_smote.pool`).
    #[arg(long)]
    pub pool: Option<String>,
    /// Leave the DBSCAN noise group out of oversampling.
    #[arg(long)]
    pub exclude_noise: bool,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// `forest` or `linear_svm`; defaults to the first configured model.
    #[arg(long)]
    pub model: Option<String>,
    /// Resample the training data first.
    #[arg(long)]
    pub method: Option<String>,
    #[command(flatten)]
    pub params: ResampleParams,
    /// Trees in the forest.
    #[arg(long)]
    pub n_trees: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Model file written by `train`.
    #[arg(long)]
    pub model: PathBuf,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Comma-separated eps values (`grid.eps`).
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
    /// Comma-separated min_pts values (`grid.min_pts`).
    #[arg(long, value_delimiter = ',')]
    pub min_pts: Option<Vec<usize>>,
    /// Inner evaluation rounds (`grid.inner_rounds`).
    #[arg(long)]
    pub inner_rounds: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub min_pts: Option<usize>,
    /// Write a two-column scatter CSV of the clustered rows here.
    #[arg(long)]
    pub scatter: Option<PathBuf>,
    /// Scatter x column; defaults to the first continuous feature.
    #[arg(long)]
    pub x: Option<String>,
    /// Scatter y column; defaults to the second continuous feature.
    #[arg(long)]
    pub y: Option<String>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Class proportions, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub proportions: Option<Vec<f64>>,
    /// 0 separates the classes, 1 stacks them.
    #[arg(long)]
    pub overlap: Option<f64>,
    /// Planted subgroups in the rarest class.
    #[arg(long)]
    pub subgroups: Option<usize>,
}

pub fn run(cli: &Cli) -> Result<()> {
    let ctx = Context::new(cli)?;
    match &cli.command {
        Command::Resample(a) => resample(&ctx, a),
        Command::Train(a) => train(&ctx, a),
        Command::Evaluate(a) => evaluate(&ctx, a),
        Command::Experiment => experiment(&ctx),
        Command::GridSearch(a) => grid_search(&ctx, a),
        Command::ClusterReport(a) => cluster(&ctx, a),
        Command::Synth(a) => synth(&ctx, a),
    }
}

/// The configuration with global flags applied.
struct Context {
    config: ExperimentConfig,
    /// The `--output` flag. Only `experiment` falls back to the config's
    /// report directory.
    output: Option<PathBuf>,
    format: Format,
}

fn parse_features(spec: &str) -> Result<Vec<Feature>> {
    spec.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (name, kind) = item
                .rsplit_once(':')
                .ok_or_else(|| Error::InvalidParameter(format!("feature `{item}` is not `name:kind`")))?;
            let kind = match kind.trim().to_ascii_lowercase().as_str() {
                "continuous" | "c" => FeatureKind::Continuous,
                "nominal" | "n" => FeatureKind::Nominal,
                other => return Err(Error::InvalidParameter(format!("unknown feature kind `{other}`"))),
            };
            Ok(Feature {
                name: name.trim().to_string(),
                kind,
            })
        })
        .collect()
}

impl Context {
    fn new(cli: &Cli) -> Result<Self> {
        let g = &cli.global;
        let mut config = match &g.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig {
                seed: 0,
                output: None,
                dataset: DatasetConfig {
                    path: None,
                    label: "mode".into(),
                    features: Vec::new(),
                    class_order: None,
                    skip_invalid_rows: false,
                    synthetic: None,
                },
                split: Default::default(),
                majority: Default::default(),
                resample: Default::default(),
                models: vec![ModelConfig::Forest(Default::default())],
                metrics: acsmote::harness::Metric::all(),
                grid: None,
            },
        };
        if let Some(s) = g.seed {
            config.seed = s;
        }
        if let Some(p) = &g.input {
            config.dataset.path = Some(p.clone());
            config.dataset.synthetic = None;
        }
        if let Some(l) = &g.label {
            config.dataset.label = l.clone();
        }
        if let Some(f) = &g.features {
            config.dataset.features = parse_features(f)?;
        }
        Ok(Context {
            config,
            output: g.output.clone(),
            format: g.format,
        })
    }

    fn dataset(&self) -> Result<Dataset> {
        let d = &self.config.dataset;
        if d.synthetic.is_none() {
            if d.path.is_none() {
                return Err(Error::InvalidParameter("no input: pass --input or a config with [dataset]".into()));
            }
            if d.features.is_empty() {
                return Err(Error::InvalidParameter(
                    "no feature schema: pass --features or set dataset.features".into(),
                ));
            }
        }
        d.load()
    }

    fn print(&self, text: &str) -> Result<()> {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())
            .and_then(|_| out.flush())
            .map_err(|e| Error::io("<stdout>", e))
    }
}

fn apply_params(config: &mut ExperimentConfig, p: &ResampleParams) -> Result<()> {
    let r = &mut config.resample;
    if let Some(k) = p.k {
        r.k = k;
    }
    if let Some(m) = p.m {
        r.m = m;
    }
    if let Some(e) = p.eps {
        r.ac_smote.eps = e;
    }
    if let Some(m) = p.min_pts {
        r.ac_smote.min_pts = m;
    }
    if let Some(s) = &p.policy {
        r.ac_smote.policy = match s.as_str() {
            "proportional" => TargetPolicy::Proportional,
            "literal_max" | "literal-max" => TargetPolicy::LiteralMax,
            other => return Err(Error::InvalidParameter(format!("unknown policy `{other}`"))),
        };
    }
    if let Some(s) = &p.pool {
        r.ac_smote.pool = match s.as_str() {
            "pooled" => PoolMode::Pooled,
            "per_class" | "per-class" => PoolMode::PerClass,
            other => return Err(Error::InvalidParameter(format!("unknown pool mode `{other}`"))),
        };
    }
    if p.exclude_noise {
        r.ac_smote.include_noise = false;
    }
    r.ac_smote.dbscan().validate()
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn counts_value(data: &Dataset) -> Value {
    let stats = class_stats_with(data.labels(), data.n_classes(), &Default::default());
    let mut m = serde_json::Map::new();
    for (name, c) in data.class_names().iter().zip(&stats.counts) {
        m.insert(name.clone(), json!(c));
    }
    Value::Object(m)
}

fn counts_text(data: &Dataset) -> String {
    let stats = class_stats_with(data.labels(), data.n_classes(), &Default::default());
    data.class_names()
        .iter()
        .zip(&stats.counts)
        .map(|(n, c)| format!("{n}={c}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn counts(data: &Dataset, format: Format) -> Value {
    match format {
        Format::Json => counts_value(data),
        _ => Value::String(counts_text(data)),
    }
}

fn resample(ctx: &Context, a: &ResampleArgs) -> Result<()> {
    let mut config = ctx.config.clone();
    apply_params(&mut config, &a.params)?;
    let method: Method = a.method.parse()?;
    let raw = ctx.dataset()?;
    let params = standardize_fit(&raw);
    let train = standardize_apply(&raw, &params)?;
    let stats = class_stats_with(train.labels(), train.n_classes(), &config.majority);
    let out = config.resample.spec(method, config.seed).resample(&train, &stats)?;
    let balanced = out.project_onto(&raw)?;

    match &ctx.output {
        None => {
            write_csv_to(&balanced, std::io::stdout().lock())?;
            if let Some(p) = &a.provenance {
                out.write_provenance(create(p)?)?;
            }
        }
        Some(path) => {
            write_csv_to(&balanced, create(path)?)?;
            let prov = a.provenance.clone().unwrap_or_else(|| {
                let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                path.with_file_name(format!("{stem}.provenance.csv"))
            });
            out.write_provenance(create(&prov)?)?;
            let warnings: Vec<String> = out.warnings.iter().map(|w| w.to_string()).collect();
            ctx.print(&output::pairs(
                &[
                    ("method", json!(method.name())),
                    ("input_rows", json!(raw.n_samples())),
                    ("output_rows", json!(balanced.n_samples())),
                    ("synthetic_rows", json!(out.synthetic_count())),
                    ("counts_before", counts(&raw, ctx.format)),
                    ("counts_after", counts(&balanced, ctx.format)),
                    ("warnings", json!(if ctx.format == Format::Json { json!(warnings) } else { json!(warnings.join("; ")) })),
                    ("output", json!(path.display().to_string())),
                    ("provenance", json!(prov.display().to_string())),
                ],
                ctx.format,
            ))?;
        }
    }
    Ok(())
}

fn pick_model(config: &ExperimentConfig, name: Option<&str>) -> Result<ModelConfig> {
    match name {
        None => Ok(config.models[0].clone()),
        Some(n) => {
            if let Some(m) = config.models.iter().find(|m| m.name() == n) {
                return Ok(m.clone());
            }
            match n {
                "forest" => Ok(ModelConfig::Forest(Default::default())),
                "linear_svm" | "svm" => Ok(ModelConfig::LinearSvm(Default::default())),
                other => Err(Error::InvalidParameter(format!("unknown model `{other}`"))),
            }
        }
    }
}

fn train(ctx: &Context, a: &TrainArgs) -> Result<()> {
    let path = ctx
        .output
        .clone()
        .ok_or_else(|| Error::InvalidParameter("train needs --output for the model file".into()))?;
    let mut config = ctx.config.clone();
    apply_params(&mut config, &a.params)?;
    let mut model = pick_model(&config, a.model.as_deref())?;
    if let (ModelConfig::Forest(f), Some(n)) = (&mut model, a.n_trees) {
        f.n_trees = n;
    }
    let raw = ctx.dataset()?;
    let params = standardize_fit(&raw);
    let mut data = standardize_apply(&raw, &params)?;
    let mut synthetic = 0;
    if let Some(m) = &a.method {
        if let Resampler::Method(method) = m.parse::<Resampler>()? {
            let stats = class_stats_with(data.labels(), data.n_classes(), &config.majority);
            let out = config.resample.spec(method, config.seed).resample(&data, &stats)?;
            synthetic = out.synthetic_count();
            data = out.data;
        }
    }
    let classifier = match &model {
        ModelConfig::Forest(f) => {
            let class_weights = f
                .class_weighted
                .then(|| class_stats_with(data.labels(), data.n_classes(), &config.majority).weights);
            Classifier::Forest(train_forest(
                &data,
                &ForestConfig {
                    n_trees: f.n_trees,
                    max_depth: f.max_depth,
                    min_samples_leaf: f.min_samples_leaf,
                    max_features: f.max_features,
                    bootstrap: f.bootstrap,
                    class_weights,
                    seed: config.seed,
                },
            )?)
        }
        ModelConfig::LinearSvm(s) => Classifier::LinearSvm(LinearSvmModel::fit(
            &data,
            &SvmParams {
                lambda: s.lambda,
                epochs: s.epochs,
                balanced: s.balanced,
            },
            config.seed,
        )?),
    };
    let file = ModelFile {
        format_version: MODEL_FILE_VERSION,
        features: raw.features().to_vec(),
        label: raw.label_name().to_string(),
        class_names: raw.class_names().to_vec(),
        standardization: params.to_text(),
        model: classifier,
    };
    file.save(&path)?;
    ctx.print(&output::pairs(
        &[
            ("model", json!(model.name())),
            ("training_rows", json!(data.n_samples())),
            ("synthetic_rows", json!(synthetic)),
            ("output", json!(path.display().to_string())),
        ],
        ctx.format,
    ))
}

fn evaluate(ctx: &Context, a: &EvaluateArgs) -> Result<()> {
    let model = ModelFile::load(&a.model)?;
    let mut dataset = ctx.config.dataset.clone();
    if dataset.features.is_empty() {
        dataset.features = model.features.clone();
    }
    if ctx.config.dataset.label == "mode" && model.label != "mode" {
        dataset.label = model.label.clone();
    }
    dataset.class_order = Some(model.class_names.clone());
    if dataset.path.is_none() && dataset.synthetic.is_none() {
        return Err(Error::InvalidParameter("evaluate needs --input".into()));
    }
    let raw = dataset.load()?;
    let scores = model.score(&raw)?;
    let report = ClassReport::from_scores(raw.labels(), &scores)?;
    let text = output::class_report(&report, raw.class_names(), ctx.format);
    if let Some(p) = &ctx.output {
        std::fs::write(p, &text).map_err(|e| Error::io(p, e))?;
    }
    ctx.print(&text)
}

fn experiment(ctx: &Context) -> Result<()> {
    ctx.config.validate()?;
    let data = ctx.dataset()?;
    let result = run_experiment_on(&data, &ctx.config)?;
    if let Some(dir) = ctx.output.as_ref().or(ctx.config.output.as_ref()) {
        write_reports(&result, &ctx.config.metrics, dir)?;
    }
    let text = match ctx.format {
        Format::Table => render_text(&result, &ctx.config.metrics),
        Format::Csv => summary_csv(&result, &ctx.config.metrics)?,
        Format::Json => cells_jsonl(&result)?,
    };
    ctx.print(&text)?;
    if result.failed().count() == result.cells.len() {
        return Err(Error::Degenerate("every experiment cell failed".into()));
    }
    Ok(())
}

fn grid_search(ctx: &Context, a: &GridArgs) -> Result<()> {
    let config = &ctx.config;
    let g = config.grid.clone().unwrap_or_default();
    let spec = GridSpec {
        eps: a.eps.clone().unwrap_or(g.eps),
        min_pts: a.min_pts.clone().unwrap_or(g.min_pts),
        inner_fraction: g.inner_fraction,
        inner_rounds: a.inner_rounds.unwrap_or(g.inner_rounds),
        model: g.model.unwrap_or_else(|| config.models[0].clone()),
        k: config.resample.k,
        ac: config.resample.ac_smote.options(),
        majority: config.majority.clone(),
        seed: config.seed,
    };
    let data = ctx.dataset()?;
    // search on the training part of the first experiment round only
    let (train, _) = stratified_split(
        &data,
        &SplitSpec {
            train_fraction: config.split.train_fraction,
            seed: split_seed(config.seed, 0),
            stratified: config.split.stratified,
        },
    )?;
    let result = grid_search_dbscan(&train, &spec)?;
    if let Some(p) = &ctx.output {
        std::fs::write(p, result.to_csv()).map_err(|e| Error::io(p, e))?;
    }
    let text = match ctx.format {
        Format::Csv => result.to_csv(),
        Format::Json => serde_json::to_string(&result).map_err(|e| Error::Internal(e.to_string()))? + "\n",
        Format::Table => {
            let mut s = format!("{:>10}{:>9}{:>10}\n", "eps", "min_pts", "score");
            for c in &result.cells {
                let score = c.score.map_or_else(|| "failed".to_string(), |v| format!("{v:.4}"));
                s.push_str(&format!("{:>10}{:>9}{:>10}\n", c.eps, c.min_pts, score));
            }
            s.push_str(&format!(
                "best: eps={} min_pts={} score={:.4}\n",
                result.best.eps, result.best.min_pts, result.best_score
            ));
            s
        }
    };
    ctx.print(&text)
}

fn column(data: &Dataset, name: Option<&str>, fallback: usize) -> Result<usize> {
    match name {
        Some(n) => data
            .features()
            .iter()
            .position(|f| f.name == n)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown column `{n}`"))),
        None => {
            let cols = data.continuous_columns();
            cols.get(fallback)
                .or_else(|| cols.first())
                .copied()
                .ok_or_else(|| Error::InvalidParameter("no continuous column to plot".into()))
        }
    }
}

fn cluster(ctx: &Context, a: &ClusterArgs) -> Result<()> {
    let base = ctx.config.resample.ac_smote.dbscan();
    let params = DbscanParams::new(a.eps.unwrap_or(base.eps), a.min_pts.unwrap_or(base.min_pts))?;
    let raw = ctx.dataset()?;
    let data = standardize_apply(&raw, &standardize_fit(&raw))?;
    let stats = class_stats_with(data.labels(), data.n_classes(), &ctx.config.majority);
    let report = cluster_report(&data, &stats, &params)?;
    if let Some(p) = &a.scatter {
        let x = column(&raw, a.x.as_deref(), 0)?;
        let y = column(&raw, a.y.as_deref(), 1)?;
        report.write_scatter(&raw, x, y, create(p)?)?;
    }
    let text = match ctx.format {
        Format::Table => report.to_text(),
        Format::Json => {
            let v = json!({
                "params": report.params,
                "n_clusters": report.n_clusters,
                "total": report.total,
                "noise_share": report.noise_share(),
                "groups": report.groups,
                "class_names": report.class_names,
            });
            v.to_string() + "\n"
        }
        Format::Csv => {
            let mut s = String::from("cluster,size");
            for &c in &report.minority_classes {
                s.push(',');
                s.push_str(&output::csv_field(&report.class_names[c]));
            }
            s.push('\n');
            for g in &report.groups {
                s.push_str(&format!("{},{}", g.label.display_id(), g.size));
                for &c in &report.minority_classes {
                    s.push_str(&format!(",{}", g.class_counts[c]));
                }
                s.push('\n');
            }
            s
        }
    };
    if let Some(p) = &ctx.output {
        std::fs::write(p, &text).map_err(|e| Error::io(p, e))?;
    }
    ctx.print(&text)
}

fn synth(ctx: &Context, a: &SynthArgs) -> Result<()> {
    let mut spec = ctx.config.dataset.synthetic.clone().unwrap_or_default();
    spec.seed = ctx.config.seed;
    if let Some(n) = a.n {
        spec.n = n;
    }
    if let Some(p) = &a.proportions {
        spec.proportions = p.clone();
    }
    if let Some(o) = a.overlap {
        spec.overlap = o;
    }
    if let Some(s) = a.subgroups {
        spec.subgroups = s;
    }
    let s = generate(&SynthSpec { ..spec })?;
    match &ctx.output {
        None => write_csv_to(&s.data, std::io::stdout().lock()),
        Some(path) => {
            write_csv_to(&s.data, create(path)?)?;
            let schema: Vec<String> = s
                .data
                .features()
                .iter()
                .map(|f| {
                    let kind = match f.kind {
                        FeatureKind::Continuous => "continuous",
                        FeatureKind::Nominal => "nominal",
                    };
                    format!("{}:{kind}", f.name)
                })
                .collect();
            ctx.print(&output::pairs(
                &[
                    ("rows", json!(s.data.n_samples())),
                    ("counts", counts(&s.data, ctx.format)),
                    ("label", json!(s.data.label_name())),
                    ("features", json!(schema.join(","))),
                    ("planted_eps", json!(s.planted.eps)),
                    ("planted_min_pts", json!(s.planted.min_pts)),
                    ("output", json!(path.display().to_string())),
                ],
                ctx.format,
            ))
        }
    }
}
