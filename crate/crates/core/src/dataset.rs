//! Column-typed tabular data and CSV ingestion.
//!
//! Every cell is stored as an `f64`. Nominal cells hold the category code
//! (`0..cardinality`) assigned in first-appearance order while reading; the
//! dictionaries are kept on the dataset so that written files decode back to
//! the original strings.

use std::collections::HashMap;
use std::fs::File;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::neighbors::Points;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    Continuous,
    Nominal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feature {
    pub name: String,
    pub kind: FeatureKind,
}

impl Feature {
    pub fn continuous(name: impl Into<String>) -> Self {
        Feature {
            name: name.into(),
            kind: FeatureKind::Continuous,
        }
    }

    pub fn nominal(name: impl Into<String>) -> Self {
        Feature {
            name: name.into(),
            kind: FeatureKind::Nominal,
        }
    }
}

/// Immutable n_samples × n_features table with integer class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<Feature>,
    kinds: Vec<FeatureKind>,
    /// Per column category names; empty for continuous columns.
    categories: Vec<Vec<String>>,
    values: Vec<f64>,
    labels: Vec<usize>,
    label_name: String,
    class_names: Vec<String>,
}

impl Dataset {
    /// Builds a dataset from row vectors. Nominal dictionaries are named after
    /// their codes (`"0"`, `"1"`, ...) and sized by the largest code present.
    pub fn from_rows(
        features: Vec<Feature>,
        rows: &[Vec<f64>],
        labels: Vec<usize>,
        class_names: Vec<String>,
    ) -> Result<Self> {
        let dim = features.len();
        let mut values = Vec::with_capacity(rows.len() * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::SchemaMismatch(format!(
                    "row {i} has {} values, schema has {dim} features",
                    row.len()
                )));
            }
            values.extend_from_slice(row);
        }
        let categories = features
            .iter()
            .enumerate()
            .map(|(j, f)| match f.kind {
                FeatureKind::Continuous => Vec::new(),
                FeatureKind::Nominal => {
                    let max = rows.iter().map(|r| r[j]).fold(-1.0f64, f64::max);
                    let card = if max >= 0.0 { max as usize + 1 } else { 0 };
                    (0..card).map(|c| c.to_string()).collect()
                }
            })
            .collect();
        Dataset::from_parts(features, categories, values, labels, "label".into(), class_names)
    }

    /// Validating constructor over row-major storage.
    pub fn from_parts(
        features: Vec<Feature>,
        categories: Vec<Vec<String>>,
        values: Vec<f64>,
        labels: Vec<usize>,
        label_name: String,
        class_names: Vec<String>,
    ) -> Result<Self> {
        let dim = features.len();
        if labels.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if values.len() != labels.len() * dim {
            return Err(Error::SchemaMismatch(format!(
                "{} values cannot form {} rows of {dim} features",
                values.len(),
                labels.len()
            )));
        }
        if categories.len() != dim {
            return Err(Error::SchemaMismatch(
                "one category dictionary per feature is required".into(),
            ));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= class_names.len()) {
            return Err(Error::SchemaMismatch(format!(
                "label {bad} out of range for {} classes",
                class_names.len()
            )));
        }
        for (j, f) in features.iter().enumerate() {
            match f.kind {
                FeatureKind::Continuous => {
                    if let Some(v) = values.iter().skip(j).step_by(dim).find(|v| !v.is_finite()) {
                        return Err(Error::SchemaMismatch(format!(
                            "column `{}` contains non-finite value {v}",
                            f.name
                        )));
                    }
                }
                FeatureKind::Nominal => {
                    let card = categories[j].len() as f64;
                    if let Some(v) = values
                        .iter()
                        .skip(j)
                        .step_by(dim)
                        .find(|&&v| v < 0.0 || v >= card || v.fract() != 0.0)
                    {
                        return Err(Error::SchemaMismatch(format!(
                            "column `{}` holds {v}, not a category code below {card}",
                            f.name
                        )));
                    }
                }
            }
        }
        let kinds = features.iter().map(|f| f.kind).collect();
        Ok(Dataset {
            features,
            kinds,
            categories,
            values,
            labels,
            label_name,
            class_names,
        })
    }

    pub fn n_samples(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.len()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn features(&self) -> &[Feature] {
        &self.features
    }

    pub fn kinds(&self) -> &[FeatureKind] {
        &self.kinds
    }

    pub fn categories(&self, column: usize) -> &[String] {
        &self.categories[column]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let d = self.n_features();
        &self.values[i * d..(i + 1) * d]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label_name(&self) -> &str {
        &self.label_name
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn has_nominal(&self) -> bool {
        self.kinds.contains(&FeatureKind::Nominal)
    }

    pub fn continuous_columns(&self) -> Vec<usize> {
        (0..self.n_features())
            .filter(|&j| self.kinds[j] == FeatureKind::Continuous)
            .collect()
    }

    pub fn points(&self) -> Points<'_> {
        Points::new(&self.values, &self.kinds)
    }

    /// Indices of the rows labelled `class`, ascending.
    pub fn class_indices(&self, class: usize) -> Vec<usize> {
        (0..self.n_samples())
            .filter(|&i| self.labels[i] == class)
            .collect()
    }

    /// Rows at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let d = self.n_features();
        let mut values = Vec::with_capacity(indices.len() * d);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            values.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        self.with_values(values, labels)
    }

    /// Same schema and dictionaries, new cells. Use for derived tables whose
    /// cells are known to respect the schema.
    pub(crate) fn with_values(&self, values: Vec<f64>, labels: Vec<usize>) -> Dataset {
        debug_assert_eq!(values.len(), labels.len() * self.n_features());
        Dataset {
            features: self.features.clone(),
            kinds: self.kinds.clone(),
            categories: self.categories.clone(),
            values,
            labels,
            label_name: self.label_name.clone(),
            class_names: self.class_names.clone(),
        }
    }

    /// Row-major matrix of the continuous columns only.
    pub fn continuous_matrix(&self, rows: &[usize]) -> Vec<f64> {
        let cols = self.continuous_columns();
        let mut out = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            let r = self.row(i);
            out.extend(cols.iter().map(|&j| r[j]));
        }
        out
    }

    /// Checks that `other` carries the same features and classes.
    pub fn ensure_compatible(&self, other: &Dataset) -> Result<()> {
        if self.features != other.features {
            return Err(Error::SchemaMismatch("feature lists differ".into()));
        }
        if self.class_names != other.class_names {
            return Err(Error::SchemaMismatch("class lists differ".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Fixed class order; labels outside it are rejected. Default is
    /// first-appearance order.
    pub class_order: Option<Vec<String>>,
    /// Drop rows holding missing or unparseable cells instead of failing.
    pub skip_invalid_rows: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadSummary {
    pub accepted_rows: usize,
    pub rejected_rows: usize,
    /// Up to ten reasons, for reporting.
    pub rejections: Vec<String>,
}

/// Reads a CSV with a header row. Columns not named in `schema` are ignored.
pub fn load_csv(path: impl AsRef<Path>, schema: &[Feature], label_column: &str) -> Result<Dataset> {
    load_csv_with(path, schema, label_column, &LoadOptions::default()).map(|(d, _)| d)
}

pub fn load_csv_with(
    path: impl AsRef<Path>,
    schema: &[Feature],
    label_column: &str,
    options: &LoadOptions,
) -> Result<(Dataset, LoadSummary)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, schema, label_column, options)
}

pub fn read_csv<R: std::io::Read>(
    reader: R,
    schema: &[Feature],
    label_column: &str,
    options: &LoadOptions,
) -> Result<(Dataset, LoadSummary)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    let position = |name: &str| header.iter().position(|h| h == name);

    let mut missing: Vec<&str> = schema
        .iter()
        .map(|f| f.name.as_str())
        .filter(|n| position(n).is_none())
        .collect();
    if position(label_column).is_none() {
        missing.push(label_column);
    }
    if !missing.is_empty() {
        return Err(Error::HeaderMismatch(format!(
            "missing column(s) {}",
            missing.join(", ")
        )));
    }
    if schema.iter().any(|f| f.name == label_column) {
        return Err(Error::HeaderMismatch(format!(
            "label column `{label_column}` is also listed as a feature"
        )));
    }
    let col_idx: Vec<usize> = schema.iter().map(|f| position(&f.name).unwrap()).collect();
    let label_idx = position(label_column).unwrap();

    let mut dicts: Vec<HashMap<String, usize>> = vec![HashMap::new(); schema.len()];
    let mut categories: Vec<Vec<String>> = vec![Vec::new(); schema.len()];
    let mut class_index: HashMap<String, usize> = HashMap::new();
    let mut class_names: Vec<String> = Vec::new();
    if let Some(order) = &options.class_order {
        for name in order {
            class_index.insert(name.clone(), class_names.len());
            class_names.push(name.clone());
        }
    }

    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut summary = LoadSummary::default();
    let mut row_buf = Vec::with_capacity(schema.len());

    for record in rdr.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        row_buf.clear();
        let parsed = (|| -> Result<usize> {
            // Continuous cells are checked before any dictionary is touched so that
            // rejected rows leave no trace in the encodings.
            for (j, f) in schema.iter().enumerate() {
                let cell = record.get(col_idx[j]).unwrap_or("");
                if f.kind == FeatureKind::Continuous {
                    match cell.parse::<f64>() {
                        Ok(v) if v.is_finite() => {}
                        _ => {
                            return Err(Error::Parse {
                                line,
                                column: f.name.clone(),
                                value: cell.into(),
                                expected: "finite number",
                            })
                        }
                    }
                } else if cell.is_empty() {
                    return Err(Error::Parse {
                        line,
                        column: f.name.clone(),
                        value: cell.into(),
                        expected: "category",
                    });
                }
            }
            let label = record.get(label_idx).unwrap_or("");
            if label.is_empty() {
                return Err(Error::Parse {
                    line,
                    column: label_column.into(),
                    value: label.into(),
                    expected: "class label",
                });
            }
            if options.class_order.is_some() && !class_index.contains_key(label) {
                return Err(Error::Parse {
                    line,
                    column: label_column.into(),
                    value: label.into(),
                    expected: "known class label",
                });
            }
            for (j, f) in schema.iter().enumerate() {
                let cell = record.get(col_idx[j]).unwrap_or("");
                let v = match f.kind {
                    FeatureKind::Continuous => cell.parse::<f64>().unwrap(),
                    FeatureKind::Nominal => {
                        let next = categories[j].len();
                        let code = *dicts[j].entry(cell.to_string()).or_insert(next);
                        if code == next {
                            categories[j].push(cell.to_string());
                        }
                        code as f64
                    }
                };
                row_buf.push(v);
            }
            let next = class_names.len();
            let class = *class_index.entry(label.to_string()).or_insert(next);
            if class == next {
                class_names.push(label.to_string());
            }
            Ok(class)
        })();
        match parsed {
            Ok(class) => {
                values.extend_from_slice(&row_buf);
                labels.push(class);
                summary.accepted_rows += 1;
            }
            Err(e) if options.skip_invalid_rows => {
                summary.rejected_rows += 1;
                if summary.rejections.len() < 10 {
                    summary.rejections.push(e.to_string());
                }
            }
            Err(e) => return Err(e),
        }
    }
    if summary.rejected_rows > 0 {
        log::warn!("rejected {} row(s) with invalid cells", summary.rejected_rows);
    }
    if labels.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let ds = Dataset::from_parts(
        schema.to_vec(),
        categories,
        values,
        labels,
        label_column.to_string(),
        class_names,
    )?;
    Ok((ds, summary))
}

/// Writes features (decoded nominals) followed by the label column.
pub fn write_csv(data: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv_to(data, file)
}

pub fn write_csv_to<W: std::io::Write>(data: &Dataset, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = data.features.iter().map(|f| f.name.as_str()).collect();
    header.push(&data.label_name);
    w.write_record(&header)?;
    let mut record: Vec<String> = Vec::with_capacity(header.len());
    for i in 0..data.n_samples() {
        record.clear();
        for (j, &v) in data.row(i).iter().enumerate() {
            record.push(match data.kinds[j] {
                FeatureKind::Continuous => v.to_string(),
                FeatureKind::Nominal => data.categories[j][v as usize].clone(),
            });
        }
        record.push(data.class_names[data.labels[i]].clone());
        w.write_record(&record)?;
    }
    w.flush().map_err(|e| Error::io("<csv output>", e))?;
    Ok(())
}
