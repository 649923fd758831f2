//! SVM-SMOTE: seeds are minority samples inside the margin band of a
//! linear class-vs-rest SVM.

use rand::Rng as _;

use super::kernel::{deficits, oversample, Builder, Quota};
use super::smote::auto_metric;
use super::{Method, Resampled, Warning};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::models::{feature_map, train_linear_svm, LinearSvm, SvmParams};
use crate::seed;
use crate::stats::ClassStats;

/// Trains `class`-vs-rest and returns the class members with
/// `|w·x + b| <= 1`.
pub fn margin_seeds(train: &Dataset, class: usize, params: &SvmParams, seed: u64) -> Result<(LinearSvm, Vec<usize>)> {
    let (x, dim) = feature_map(train);
    let y: Vec<bool> = train.labels().iter().map(|&l| l == class).collect();
    let model = train_linear_svm(&x, dim, &y, params, seed)?;
    let seeds = (0..train.n_samples())
        .filter(|&i| y[i] && model.decision(&x[i * dim..(i + 1) * dim]).abs() <= 1.0)
        .collect();
    Ok((model, seeds))
}

/// The SVM seed for each class is the next `u64` from the call's generator,
/// drawn before that class's interpolation draws.
pub fn svm_smote(train: &Dataset, stats: &ClassStats, k: usize, params: &SvmParams, seed: u64) -> Result<Resampled> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let mut rng = seed::rng(seed);
    let mut b = Builder::with_all(train);
    if stats.minority_classes().is_empty() {
        b.warnings.push(Warning::NoMinorityClasses);
    }
    for (class, deficit) in deficits(stats) {
        let members = train.class_indices(class);
        let svm_seed: u64 = rng.gen();
        let band = match margin_seeds(train, class, params, svm_seed) {
            Ok((_, s)) => s,
            Err(Error::Degenerate(_)) => Vec::new(),
            Err(e) => return Err(e),
        };
        let seeds = if band.is_empty() {
            b.warnings.push(Warning::NoMarginSeeds { class });
            &members
        } else {
            &band
        };
        let metric = auto_metric(train, &members);
        oversample(&mut b, class, seeds, &members, Quota::Draw(deficit), k, &metric, None, &mut rng)?;
    }
    Ok(b.finish(Method::SvmSmote))
}
