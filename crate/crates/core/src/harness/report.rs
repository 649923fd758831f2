//! Aggregation and report files.
//!
//! `report.txt` holds one table per class and metric (methods as rows,
//! models as columns, mean ± standard deviation to two decimals).
//! `rounds.csv`, `summary.csv` and `cells.jsonl` carry full precision.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::{Metric, Resampler};
use super::experiment::ExperimentResult;
use crate::error::{Error, Result};
use crate::metrics::{ClassMetrics, ClassReport};

pub const MACRO: &str = "macro";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub resampler: Resampler,
    pub model: String,
    /// Class name, or [`MACRO`].
    pub class: String,
    pub metric: Metric,
    pub mean: Option<f64>,
    /// Sample standard deviation; 0 for a single value.
    pub std: Option<f64>,
    /// Rounds contributing a value.
    pub n: usize,
}

fn class_value(m: &ClassMetrics, metric: Metric) -> Option<f64> {
    match metric {
        Metric::F1 => Some(m.f1),
        Metric::Precision => Some(m.precision),
        Metric::Recall => Some(m.recall),
        Metric::Auc => m.auc,
        Metric::AveragePrecision => m.average_precision,
    }
}

fn macro_value(r: &ClassReport, metric: Metric) -> Option<f64> {
    match metric {
        Metric::F1 => Some(r.macro_f1),
        Metric::Precision => Some(r.macro_precision),
        Metric::Recall => Some(r.macro_recall),
        Metric::Auc => r.macro_auc,
        Metric::AveragePrecision => r.macro_average_precision,
    }
}

pub fn mean_std(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() < 2 {
        0.0
    } else {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    Some((mean, std))
}

/// Rows ordered by resampler, model, class (macro last), metric.
pub fn summarize(result: &ExperimentResult, metrics: &[Metric]) -> Vec<SummaryRow> {
    let mut rows = Vec::new();
    let n_classes = result.class_names.len();
    for &resampler in &result.resamplers {
        for model in &result.models {
            let reports: Vec<&ClassReport> = result
                .cells
                .iter()
                .filter(|c| c.resampler == resampler && &c.model == model)
                .filter_map(|c| c.report.as_ref())
                .collect();
            for class in 0..=n_classes {
                for &metric in metrics {
                    let values: Vec<f64> = reports
                        .iter()
                        .filter_map(|r| {
                            if class < n_classes {
                                class_value(&r.classes[class], metric)
                            } else {
                                macro_value(r, metric)
                            }
                        })
                        .collect();
                    let ms = mean_std(&values);
                    rows.push(SummaryRow {
                        resampler,
                        model: model.clone(),
                        class: result.class_names.get(class).cloned().unwrap_or_else(|| MACRO.into()),
                        metric,
                        mean: ms.map(|m| m.0),
                        std: ms.map(|m| m.1),
                        n: values.len(),
                    });
                }
            }
        }
    }
    rows
}

fn pad(out: &mut String, text: &str, width: usize) {
    out.push_str(text);
    for _ in text.chars().count()..width {
        out.push(' ');
    }
}

pub fn render_text(result: &ExperimentResult, metrics: &[Metric]) -> String {
    let summary = summarize(result, metrics);
    let lookup = |r: Resampler, model: &str, class: &str, metric: Metric| {
        summary
            .iter()
            .find(|s| s.resampler == r && s.model == model && s.class == class && s.metric == metric)
            .and_then(|s| s.mean.zip(s.std))
            .map_or_else(|| "n/a".to_string(), |(m, s)| format!("{m:.2} ± {s:.2}"))
    };
    let mut out = String::new();
    let _ = writeln!(out, "seed {}, {} round(s)", result.seed, result.rounds);
    let _ = writeln!(out, "classes: {}", result.class_names.join(", "));
    let first_col = result
        .resamplers
        .iter()
        .map(|r| r.display_name().len())
        .max()
        .unwrap_or(0)
        .max("Method".len())
        + 2;
    let col = result.model_titles.iter().map(|t| t.chars().count()).max().unwrap_or(0).max(13) + 2;
    let mut classes: Vec<String> = result.class_names.clone();
    classes.push(MACRO.into());
    for &metric in metrics {
        for class in &classes {
            let title = if class == MACRO { "Macro average".to_string() } else { class.clone() };
            let _ = writeln!(out, "\n{} / {title}", metric.title());
            pad(&mut out, "Method", first_col);
            for t in &result.model_titles {
                pad(&mut out, t, col);
            }
            let trimmed = out.trim_end().len();
            out.truncate(trimmed);
            out.push('\n');
            for &r in &result.resamplers {
                pad(&mut out, r.display_name(), first_col);
                for m in &result.models {
                    pad(&mut out, &lookup(r, m, class, metric), col);
                }
                let trimmed = out.trim_end().len();
                out.truncate(trimmed);
                out.push('\n');
            }
        }
    }
    let failed: Vec<_> = result.failed().collect();
    if !failed.is_empty() {
        let _ = writeln!(out, "\nfailed cells");
        for c in failed {
            let _ = writeln!(
                out,
                "round {}, {} + {}: {}",
                c.round,
                c.resampler,
                c.model,
                c.error.as_deref().unwrap_or("")
            );
        }
    }
    out
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_string(rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

/// One row per (round, resampler, model, class) plus a macro row per cell;
/// failed cells get a single row with the error.
pub fn rounds_csv(result: &ExperimentResult) -> Result<String> {
    let mut rows = vec![[
        "round",
        "resampler",
        "model",
        "class",
        "precision",
        "recall",
        "f1",
        "support",
        "auc",
        "average_precision",
        "precision_undefined",
        "recall_undefined",
        "train_rows",
        "synthetic_rows",
        "error",
    ]
    .map(String::from)
    .to_vec()];
    for c in &result.cells {
        let head = vec![c.round.to_string(), c.resampler.to_string(), c.model.clone()];
        let tail = |err: &str| vec![c.train_rows.to_string(), c.synthetic_rows.to_string(), err.to_string()];
        match &c.report {
            None => {
                let mut r = head.clone();
                r.extend(std::iter::repeat_n(String::new(), 9));
                r.extend(tail(c.error.as_deref().unwrap_or("")));
                rows.push(r);
            }
            Some(rep) => {
                for (class, m) in rep.classes.iter().enumerate() {
                    let mut r = head.clone();
                    r.extend([
                        result.class_names[class].clone(),
                        m.precision.to_string(),
                        m.recall.to_string(),
                        m.f1.to_string(),
                        m.support.to_string(),
                        opt(m.auc),
                        opt(m.average_precision),
                        m.precision_undefined.to_string(),
                        m.recall_undefined.to_string(),
                    ]);
                    r.extend(tail(""));
                    rows.push(r);
                }
                let mut r = head.clone();
                r.extend([
                    MACRO.to_string(),
                    rep.macro_precision.to_string(),
                    rep.macro_recall.to_string(),
                    rep.macro_f1.to_string(),
                    rep.confusion.total().to_string(),
                    opt(rep.macro_auc),
                    opt(rep.macro_average_precision),
                    String::new(),
                    String::new(),
                ]);
                r.extend(tail(""));
                rows.push(r);
            }
        }
    }
    csv_string(rows)
}

pub fn summary_csv(result: &ExperimentResult, metrics: &[Metric]) -> Result<String> {
    let mut rows = vec![["resampler", "model", "class", "metric", "mean", "std", "n"]
        .map(String::from)
        .to_vec()];
    for s in summarize(result, metrics) {
        rows.push(vec![
            s.resampler.to_string(),
            s.model,
            s.class,
            s.metric.name().to_string(),
            opt(s.mean),
            opt(s.std),
            s.n.to_string(),
        ]);
    }
    csv_string(rows)
}

pub fn cells_jsonl(result: &ExperimentResult) -> Result<String> {
    let mut out = String::new();
    for c in &result.cells {
        out.push_str(&serde_json::to_string(c).map_err(|e| Error::Internal(e.to_string()))?);
        out.push('\n');
    }
    Ok(out)
}

pub const REPORT_FILES: [&str; 4] = ["report.txt", "rounds.csv", "summary.csv", "cells.jsonl"];

/// Writes the four report files into `dir`, creating it if needed.
pub fn write_reports(result: &ExperimentResult, metrics: &[Metric], dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let contents = [
        render_text(result, metrics),
        rounds_csv(result)?,
        summary_csv(result, metrics)?,
        cells_jsonl(result)?,
    ];
    let mut paths = Vec::new();
    for (name, text) in REPORT_FILES.iter().zip(contents) {
        let p = dir.join(name);
        std::fs::write(&p, text).map_err(|e| Error::io(&p, e))?;
        paths.push(p);
    }
    Ok(paths)
}
