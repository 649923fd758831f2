//! Resampling algorithms.
//!
//! Every method returns a [`Resampled`]: the new training table, where each
//! output row came from, one provenance record per generated row, and any
//! warnings raised on fallback paths. Original rows keep their input order
//! and are followed by the generated rows. A single seeded generator drives
//! each call; draws are consumed class by class (ascending class index),
//! then by cluster group (noise first), then sample by sample.

mod ac_smote;
mod adasyn;
mod borderline;
mod kernel;
mod quota;
mod random;
mod smote;
mod svm_smote;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use ac_smote::{ac_smote, ac_smote_cells, cell_quotas, AcSmoteOptions, Cell, PoolMode, TargetPolicy};
pub use adasyn::{adasyn, adasyn_difficulty};
pub use borderline::{borderline_smote, borderline_states, BorderlineState};
pub use quota::largest_remainder;
pub use random::{ros, rus};
pub use smote::{smote, smote_nc};
pub use svm_smote::{margin_seeds, svm_smote};

use crate::clustering::{ClusterLabel, DbscanParams};
use crate::dataset::{Dataset, FeatureKind};
use crate::error::{Error, Result};
use crate::models::SvmParams;
use crate::stats::ClassStats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Ros,
    Rus,
    Smote,
    SmoteNc,
    BorderlineSmote,
    Adasyn,
    SvmSmote,
    AcSmote,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Ros,
        Method::Rus,
        Method::Smote,
        Method::SmoteNc,
        Method::BorderlineSmote,
        Method::Adasyn,
        Method::SvmSmote,
        Method::AcSmote,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Ros => "ros",
            Method::Rus => "rus",
            Method::Smote => "smote",
            Method::SmoteNc => "smote_nc",
            Method::BorderlineSmote => "borderline_smote",
            Method::Adasyn => "adasyn",
            Method::SvmSmote => "svm_smote",
            Method::AcSmote => "ac_smote",
        }
    }

    /// Label used in report tables.
    pub fn display_name(self) -> &'static str {
        match self {
            Method::Ros => "ROS",
            Method::Rus => "RUS",
            Method::Smote => "SMOTE",
            Method::SmoteNc => "SMOTE-NC",
            Method::BorderlineSmote => "Borderline-SMOTE",
            Method::Adasyn => "ADASYN",
            Method::SvmSmote => "SVM-SMOTE",
            Method::AcSmote => "AC-SMOTE",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Method::ALL
            .into_iter()
            .find(|m| m.name() == key || m.name().replace('_', "") == key)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown resampling method `{s}`")))
    }
}

/// Method selector plus every parameter a method may need.
#[derive(Debug, Clone, PartialEq)]
pub struct ResampleSpec {
    pub method: Method,
    /// Same-class neighbors used for interpolation.
    pub k: usize,
    /// Whole-set neighbors used by Borderline-SMOTE's danger test.
    pub m: usize,
    pub seed: u64,
    pub ac: AcSmoteOptions,
    pub svm: SvmParams,
}

impl ResampleSpec {
    pub fn new(method: Method) -> Self {
        ResampleSpec {
            method,
            k: 5,
            m: 10,
            seed: 0,
            ac: AcSmoteOptions::default(),
            svm: SvmParams::default(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_dbscan(mut self, params: DbscanParams) -> Self {
        self.ac.dbscan = params;
        self
    }

    pub fn resample(&self, train: &Dataset, stats: &ClassStats) -> Result<Resampled> {
        if stats.n_classes() != train.n_classes() || stats.total() != train.n_samples() {
            return Err(Error::InvalidParameter(
                "class statistics do not describe this training set".into(),
            ));
        }
        match self.method {
            Method::Ros => ros(train, stats, self.seed),
            Method::Rus => rus(train, stats, self.seed),
            Method::Smote => smote(train, stats, self.k, self.seed),
            Method::SmoteNc => smote_nc(train, stats, self.k, self.seed),
            Method::BorderlineSmote => borderline_smote(train, stats, self.k, self.m, self.seed),
            Method::Adasyn => adasyn(train, stats, self.k, self.seed),
            Method::SvmSmote => svm_smote(train, stats, self.k, &self.svm, self.seed),
            Method::AcSmote => ac_smote(train, stats, &self.ac, self.k, self.seed),
        }
    }
}

/// One generated row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticRecord {
    /// Row position in the resampled table.
    pub row: usize,
    /// Training-set index of the sample the row was grown from.
    pub seed: usize,
    /// Interpolation partner; `None` for plain duplicates.
    pub neighbor: Option<usize>,
    /// Interpolation gap λ in `[0, 1]`; 0 for duplicates.
    pub gap: f64,
    /// AC-SMOTE group the pair was drawn from.
    pub cluster: Option<ClusterLabel>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowSource {
    /// Copy of this training-set row.
    Original(usize),
    /// Index into [`Resampled::provenance`].
    Synthetic(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// A group with a single sample was grown by duplication.
    Duplicated {
        class: usize,
        cluster: Option<ClusterLabel>,
        count: usize,
    },
    NoDangerSamples { class: usize },
    UniformQuotas { class: usize },
    NoMarginSeeds { class: usize },
    /// DBSCAN labelled every pooled minority sample as noise.
    AllNoise,
    /// Noise is excluded but the class has no clustered samples.
    NoiseOnlyClass { class: usize },
    NoMinorityClasses,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::Duplicated { class, cluster, count } => {
                write!(f, "class {class}")?;
                if let Some(c) = cluster {
                    write!(f, " cluster {c}")?;
                }
                write!(f, ": single sample, {count} duplicate(s) instead of interpolation")
            }
            Warning::NoDangerSamples { class } => {
                write!(f, "class {class}: no borderline samples, falling back to SMOTE")
            }
            Warning::UniformQuotas { class } => {
                write!(f, "class {class}: no sample has other-class neighbors, using uniform quotas")
            }
            Warning::NoMarginSeeds { class } => {
                write!(f, "class {class}: no sample inside the SVM margin, falling back to SMOTE")
            }
            Warning::AllNoise => f.write_str("DBSCAN found no clusters; every cell is the noise group"),
            Warning::NoiseOnlyClass { class } => {
                write!(f, "class {class}: only noise samples, oversampling the noise group anyway")
            }
            Warning::NoMinorityClasses => f.write_str("no minority class; data returned unchanged"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Resampled {
    pub method: Method,
    pub data: Dataset,
    pub sources: Vec<RowSource>,
    pub provenance: Vec<SyntheticRecord>,
    pub warnings: Vec<Warning>,
}

impl Resampled {
    pub fn synthetic_count(&self) -> usize {
        self.provenance.len()
    }

    /// Rebuilds the table on `raw`, the same training rows in other units
    /// (typically before standardization). Originals are copied bit for bit
    /// and generated rows are replayed from their provenance.
    pub fn project_onto(&self, raw: &Dataset) -> Result<Dataset> {
        self.data.ensure_compatible(raw)?;
        let d = raw.n_features();
        let mut values = Vec::with_capacity(self.sources.len() * d);
        for (out_row, src) in self.sources.iter().enumerate() {
            match *src {
                RowSource::Original(i) => {
                    if i >= raw.n_samples() {
                        return Err(Error::SchemaMismatch("raw table has fewer rows than the training set".into()));
                    }
                    values.extend_from_slice(raw.row(i));
                }
                RowSource::Synthetic(p) => {
                    let rec = &self.provenance[p];
                    let s = raw.row(rec.seed);
                    let nb = rec.neighbor.map(|n| raw.row(n));
                    let generated = self.data.row(out_row);
                    for j in 0..d {
                        values.push(match raw.kinds()[j] {
                            FeatureKind::Nominal => generated[j],
                            FeatureKind::Continuous => match nb {
                                Some(nb) => s[j] + rec.gap * (nb[j] - s[j]),
                                None => s[j],
                            },
                        });
                    }
                }
            }
        }
        Ok(raw.with_values(values, self.data.labels().to_vec()))
    }

    /// `row,seed,neighbor,gap,cluster,method`; empty cells for absent values.
    pub fn write_provenance<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["row", "seed", "neighbor", "gap", "cluster", "method"])?;
        for r in &self.provenance {
            w.write_record([
                r.row.to_string(),
                r.seed.to_string(),
                r.neighbor.map(|n| n.to_string()).unwrap_or_default(),
                r.gap.to_string(),
                r.cluster.map(|c| c.display_id().to_string()).unwrap_or_default(),
                self.method.name().to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<provenance output>", e))?;
        Ok(())
    }
}
