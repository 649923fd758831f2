//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use acsmote::{Dataset, Feature};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut c = x;
    while parent[c] != r {
        let next = parent[c];
        parent[c] = r;
        c = next;
    }
    r
}

/// DBSCAN from definitions: core points by full distance matrix, clusters as
/// connected components of the core graph numbered by their lowest core
/// index, border points joined to the lowest-numbered adjacent cluster.
/// `None` is noise.
pub fn dbscan_oracle(values: &[f64], dim: usize, eps: f64, min_pts: usize) -> Vec<Option<usize>> {
    let n = values.len() / dim;
    let row = |i: usize| &values[i * dim..(i + 1) * dim];
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| dist(row(i), row(j)) <= eps).collect())
        .collect();
    let core: Vec<bool> = adj.iter().map(|r| r.iter().filter(|&&b| b).count() >= min_pts).collect();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..n {
            if core[i] && core[j] && adj[i][j] {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut root_id: Vec<Option<usize>> = vec![None; n];
    let mut next = 0;
    let mut label = vec![None; n];
    for i in 0..n {
        if core[i] {
            let r = find(&mut parent, i);
            if root_id[r].is_none() {
                root_id[r] = Some(next);
                next += 1;
            }
            label[i] = root_id[r];
        }
    }
    for i in 0..n {
        if !core[i] {
            label[i] = (0..n).filter(|&j| core[j] && adj[i][j]).filter_map(|j| label[j]).min();
        }
    }
    label
}

/// Indices of the `k` nearest rows to `query` (query excluded), ordered by
/// distance then index, found by sorting every distance.
pub fn knn_oracle(values: &[f64], dim: usize, query: usize, k: usize) -> Vec<usize> {
    let n = values.len() / dim;
    let q = &values[query * dim..(query + 1) * dim];
    let mut all: Vec<(f64, usize)> = (0..n)
        .filter(|&i| i != query)
        .map(|i| (dist(q, &values[i * dim..(i + 1) * dim]), i))
        .collect();
    all.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    all.into_iter().take(k).map(|p| p.1).collect()
}

/// Distinct score thresholds, highest first.
fn thresholds(scores: &[f64]) -> Vec<f64> {
    let mut t = scores.to_vec();
    t.sort_by(|a, b| b.partial_cmp(a).unwrap());
    t.dedup();
    t
}

fn counts_at(scores: &[f64], positive: &[bool], t: f64) -> (f64, f64) {
    let mut tp = 0.0;
    let mut fp = 0.0;
    for (s, &p) in scores.iter().zip(positive) {
        if *s >= t {
            if p {
                tp += 1.0
            } else {
                fp += 1.0
            }
        }
    }
    (tp, fp)
}

/// Area under the ROC polyline through every threshold, by trapezoids.
pub fn auc_oracle(scores: &[f64], positive: &[bool]) -> f64 {
    let p = positive.iter().filter(|&&b| b).count() as f64;
    let n = positive.len() as f64 - p;
    let (mut x0, mut y0, mut area) = (0.0, 0.0, 0.0);
    for t in thresholds(scores) {
        let (tp, fp) = counts_at(scores, positive, t);
        let (x1, y1) = (fp / n, tp / p);
        area += (x1 - x0) * (y0 + y1) / 2.0;
        x0 = x1;
        y0 = y1;
    }
    area
}

/// `Σ (R_t − R_prev) · P_t` over every distinct threshold.
pub fn ap_oracle(scores: &[f64], positive: &[bool]) -> f64 {
    let p = positive.iter().filter(|&&b| b).count() as f64;
    let mut prev_recall = 0.0;
    let mut ap = 0.0;
    for t in thresholds(scores) {
        let (tp, fp) = counts_at(scores, positive, t);
        let recall = tp / p;
        ap += (recall - prev_recall) * tp / (tp + fp);
        prev_recall = recall;
    }
    ap
}

/// Random scores on a coarse grid (so ties occur) with both labels present.
pub fn random_scores(r: &mut ChaCha8Rng) -> (Vec<f64>, Vec<bool>) {
    let n = r.gen_range(2..200);
    let levels = r.gen_range(2..30);
    loop {
        let scores: Vec<f64> = (0..n).map(|_| r.gen_range(0..levels) as f64 / levels as f64).collect();
        let positive: Vec<bool> = (0..n).map(|_| r.gen_bool(0.3)).collect();
        if positive.iter().any(|&b| b) && positive.iter().any(|&b| !b) {
            return (scores, positive);
        }
    }
}

/// Gaussian blobs labelled round-robin by blob, with `nominal` extra
/// categorical columns of cardinality 3.
pub fn random_table(r: &mut ChaCha8Rng, counts: &[usize], dim: usize, nominal: usize) -> Dataset {
    let mut features: Vec<Feature> = (0..dim).map(|j| Feature::continuous(format!("c{j}"))).collect();
    features.extend((0..nominal).map(|j| Feature::nominal(format!("n{j}"))));
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (class, &n) in counts.iter().enumerate() {
        let blobs = r.gen_range(1..4);
        let centers: Vec<Vec<f64>> = (0..blobs)
            .map(|_| (0..dim).map(|_| r.gen_range(-5.0..5.0)).collect())
            .collect();
        for i in 0..n {
            let c = &centers[i % blobs];
            let mut row: Vec<f64> = c.iter().map(|m| m + r.gen_range(-1.0..1.0)).collect();
            row.extend((0..nominal).map(|_| r.gen_range(0..3) as f64));
            rows.push(row);
            labels.push(class);
        }
    }
    let names = (0..counts.len()).map(|c| format!("k{c}")).collect();

    Dataset::from_rows(features, &rows, labels, names).expect("valid table")
}
