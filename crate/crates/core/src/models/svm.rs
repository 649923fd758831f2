//! Linear soft-margin SVM trained with Pegasos-style stochastic subgradient
//! descent on `λ/2·|w|² + mean hinge loss`.
//!
//! The bias is learned as the weight of a constant feature, so it is
//! regularized along with `w`.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, FeatureKind};
use crate::error::{Error, Result};
use crate::models::ScoreMatrix;
use crate::seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SvmParams {
    pub lambda: f64,
    pub epochs: usize,
    /// Weight the hinge loss by inverse class frequency.
    pub balanced: bool,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            lambda: 1e-3,
            epochs: 20,
            balanced: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSvm {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub lambda: f64,
}

impl LinearSvm {
    pub fn decision(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias
    }
}

/// Trains on row-major `x` (`dim` columns) against boolean labels.
pub fn train_linear_svm(x: &[f64], dim: usize, y: &[bool], params: &SvmParams, seed: u64) -> Result<LinearSvm> {
    if dim == 0 || x.len() != y.len() * dim {
        return Err(Error::InvalidParameter("feature matrix does not match label count".into()));
    }
    if !(params.lambda > 0.0) || params.epochs == 0 {
        return Err(Error::InvalidParameter("svm needs lambda > 0 and at least one epoch".into()));
    }
    let n = y.len();
    let pos = y.iter().filter(|&&v| v).count();
    if pos == 0 || pos == n {
        return Err(Error::Degenerate("linear svm needs both classes present".into()));
    }
    let (wp, wn) = if params.balanced {
        (n as f64 / (2.0 * pos as f64), n as f64 / (2.0 * (n - pos) as f64))
    } else {
        (1.0, 1.0)
    };
    let mut rng = seed::rng(seed);
    let mut w = vec![0.0; dim + 1];
    let mut order: Vec<usize> = (0..n).collect();
    let mut t = 0u64;
    for _ in 0..params.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = 1.0 / (params.lambda * t as f64);
            let xi = &x[i * dim..(i + 1) * dim];
            let yi = if y[i] { 1.0 } else { -1.0 };
            let margin = yi * (xi.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() + w[dim]);
            let shrink = 1.0 - eta * params.lambda;
            for v in w.iter_mut() {
                *v *= shrink;
            }
            if margin < 1.0 {
                let step = eta * yi * if y[i] { wp } else { wn };
                for (v, a) in w.iter_mut().zip(xi) {
                    *v += step * a;
                }
                w[dim] += step;
            }
        }
    }
    let bias = w.pop().unwrap_or(0.0);
    Ok(LinearSvm {
        weights: w,
        bias,
        lambda: params.lambda,
    })
}

/// Continuous cells as-is, nominal cells one-hot over their dictionary.
pub fn feature_map(data: &Dataset) -> (Vec<f64>, usize) {
    let widths: Vec<usize> = (0..data.n_features())
        .map(|j| match data.kinds()[j] {
            FeatureKind::Continuous => 1,
            FeatureKind::Nominal => data.categories(j).len(),
        })
        .collect();
    let dim: usize = widths.iter().sum();
    let mut out = Vec::with_capacity(dim * data.n_samples());
    for i in 0..data.n_samples() {
        for (j, &v) in data.row(i).iter().enumerate() {
            match data.kinds()[j] {
                FeatureKind::Continuous => out.push(v),
                FeatureKind::Nominal => {
                    for c in 0..widths[j] {
                        out.push(if c == v as usize { 1.0 } else { 0.0 });
                    }
                }
            }
        }
    }
    (out, dim)
}

/// One-vs-rest linear SVMs over [`feature_map`] features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSvmModel {
    pub classes: Vec<Option<LinearSvm>>,
    pub dim: usize,
}

impl LinearSvmModel {
    /// Classes absent from `train` get no machine and score zero.
    pub fn fit(train: &Dataset, params: &SvmParams, seed: u64) -> Result<Self> {
        let (x, dim) = feature_map(train);
        let present = (0..train.n_classes())
            .filter(|&c| train.labels().contains(&c))
            .count();
        if present < 2 {
            return Err(Error::Degenerate("linear svm needs at least two classes".into()));
        }
        let classes = (0..train.n_classes())
            .map(|c| {
                let y: Vec<bool> = train.labels().iter().map(|&l| l == c).collect();
                if y.contains(&true) {
                    train_linear_svm(&x, dim, &y, params, seed::derive_seed(seed, &[c as u64])).map(Some)
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LinearSvmModel { classes, dim })
    }

    /// Softmax over the one-vs-rest decision values.
    pub fn predict_scores(&self, data: &Dataset) -> Result<ScoreMatrix> {
        let (x, dim) = feature_map(data);
        if dim != self.dim {
            return Err(Error::SchemaMismatch(format!("expected {} svm features, got {dim}", self.dim)));
        }
        let k = self.classes.len();
        let mut values = Vec::with_capacity(data.n_samples() * k);
        for i in 0..data.n_samples() {
            let xi = &x[i * dim..(i + 1) * dim];
            let raw: Vec<Option<f64>> = self.classes.iter().map(|m| m.as_ref().map(|m| m.decision(xi))).collect();
            let top = raw.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
            let exp: Vec<f64> = raw.iter().map(|r| r.map_or(0.0, |v| (v - top).exp())).collect();
            let z: f64 = exp.iter().sum();
            values.extend(exp.iter().map(|e| e / z));
        }
        Ok(ScoreMatrix::new(k, values))
    }
}
