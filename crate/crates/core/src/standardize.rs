//! z-score standardization of continuous columns.

use std::fmt::Write as _;
use std::path::Path;

use crate::dataset::{Dataset, FeatureKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnParams {
    pub column: usize,
    pub name: String,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    /// Zero variance on the fitting data; such columns standardize to 0.
    pub constant: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StandardizationParams {
    pub columns: Vec<ColumnParams>,
}

/// Mean and population standard deviation of each continuous column.
pub fn standardize_fit(train: &Dataset) -> StandardizationParams {
    let n = train.n_samples() as f64;
    let columns = train
        .continuous_columns()
        .into_iter()
        .map(|j| {
            let mean = (0..train.n_samples()).map(|i| train.row(i)[j]).sum::<f64>() / n;
            let var = (0..train.n_samples())
                .map(|i| (train.row(i)[j] - mean).powi(2))
                .sum::<f64>()
                / n;
            let std = var.sqrt();
            let constant = std <= f64::EPSILON * mean.abs().max(1.0);
            let name = train.features()[j].name.clone();
            if constant {
                log::warn!("column `{name}` is constant on the fitting data; it will standardize to 0");
            }
            ColumnParams {
                column: j,
                name,
                mean,
                std,
                constant,
            }
        })
        .collect();
    StandardizationParams { columns }
}

pub fn standardize_apply(data: &Dataset, params: &StandardizationParams) -> Result<Dataset> {
    params.check(data)?;
    let d = data.n_features();
    let mut values = data.values().to_vec();
    for p in &params.columns {
        for i in 0..data.n_samples() {
            let cell = &mut values[i * d + p.column];
            *cell = if p.constant { 0.0 } else { (*cell - p.mean) / p.std };
        }
    }
    Ok(data.with_values(values, data.labels().to_vec()))
}

impl StandardizationParams {
    fn check(&self, data: &Dataset) -> Result<()> {
        let expected = data.continuous_columns();
        let got: Vec<usize> = self.columns.iter().map(|c| c.column).collect();
        if expected != got {
            return Err(Error::SchemaMismatch(
                "standardization parameters do not cover the dataset's continuous columns".into(),
            ));
        }
        for c in &self.columns {
            let f = &data.features()[c.column];
            if f.name != c.name || f.kind != FeatureKind::Continuous {
                return Err(Error::SchemaMismatch(format!(
                    "parameter for `{}` does not match column `{}`",
                    c.name, f.name
                )));
            }
        }
        Ok(())
    }

    /// Inverse map for a single continuous cell.
    pub fn restore(&self, column: usize, z: f64) -> f64 {
        match self.columns.iter().find(|c| c.column == column) {
            Some(c) if c.constant => c.mean,
            Some(c) => z * c.std + c.mean,
            None => z,
        }
    }

    /// One `column=mean,std,flag` line per continuous column.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.columns {
            let _ = writeln!(out, "{}={},{},{}", c.name, c.mean, c.std, u8::from(c.constant));
        }
        out
    }

    /// Parses [`to_text`](Self::to_text) output against the dataset schema.
    pub fn from_text(text: &str, data: &Dataset) -> Result<Self> {
        let mut columns = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || Error::Config(format!("standardization line {}: `{line}`", n + 1));
            let (name, rest) = line.rsplit_once('=').ok_or_else(bad)?;
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            let mean: f64 = parts[0].trim().parse().map_err(|_| bad())?;
            let std: f64 = parts[1].trim().parse().map_err(|_| bad())?;
            let constant = match parts[2].trim() {
                "0" => false,
                "1" => true,
                _ => return Err(bad()),
            };
            let column = data
                .features()
                .iter()
                .position(|f| f.name == name.trim())
                .ok_or_else(|| Error::SchemaMismatch(format!("unknown column `{name}`")))?;
            columns.push(ColumnParams {
                column,
                name: name.trim().to_string(),
                mean,
                std,
                constant,
            });
        }
        columns.sort_by_key(|c| c.column);
        let params = StandardizationParams { columns };
        params.check(data)?;
        Ok(params)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}
