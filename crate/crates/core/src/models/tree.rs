//! Class-weighted CART classification tree.
//!
//! Splits minimize the weighted Gini impurity `Σ_side W_side·(1 − Σ_c p_c²)`,
//! i.e. they maximize `Σ_side Σ_c w_c² / W_side`, where each training entry
//! contributes its class weight. Continuous columns split on `x ≤ t` with
//! `t` the midpoint between consecutive distinct values; nominal columns on
//! `x == category`. Leaves store the weighted class distribution.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, FeatureKind};
use crate::seed::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SplitTest {
    /// Left branch when `x <= threshold`.
    LessEq(f64),
    /// Left branch when `x == code`.
    Equals(f64),
}

impl SplitTest {
    pub fn goes_left(&self, x: f64) -> bool {
        match *self {
            SplitTest::LessEq(t) => x <= t,
            SplitTest::Equals(c) => x == c,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Node {
    Leaf {
        distribution: Vec<f64>,
    },
    Split {
        feature: usize,
        test: SplitTest,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    /// Features examined per split; more are drawn while none of them splits.
    pub max_features: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

#[derive(Clone, Copy)]
struct Candidate {
    feature: usize,
    test: SplitTest,
    score: f64,
}

struct Grower<'a> {
    data: &'a Dataset,
    class_weight: &'a [f64],
    params: &'a TreeParams,
    n_classes: usize,
    nodes: Vec<Node>,
    features: Vec<usize>,
    sort_buf: Vec<(f64, usize)>,
}

impl Tree {
    /// Grows a tree over `entries` (row indices; repeats act as bootstrap
    /// multiplicity). `class_weight[c]` weights every entry of class `c`.
    pub fn fit(data: &Dataset, entries: &[usize], class_weight: &[f64], params: &TreeParams, rng: &mut Rng) -> Tree {
        let mut g = Grower {
            data,
            class_weight,
            params,
            n_classes: data.n_classes(),
            nodes: Vec::new(),
            features: (0..data.n_features()).collect(),
            sort_buf: Vec::new(),
        };
        let mut entries = entries.to_vec();
        let len = entries.len();
        g.nodes.push(Node::Leaf { distribution: Vec::new() });
        // (node id, start, end, depth)
        let mut work = vec![(0usize, 0usize, len, 0usize)];
        while let Some((id, start, end, depth)) = work.pop() {
            let slice = &mut entries[start..end];
            let totals = g.class_totals(slice);
            let stop = params.max_depth.is_some_and(|d| depth >= d)
                || slice.len() < 2 * params.min_samples_leaf.max(1)
                || totals.iter().filter(|&&w| w > 0.0).count() <= 1;
            let best = if stop { None } else { g.best_split(slice, &totals, rng) };
            match best {
                None => g.nodes[id] = Node::Leaf { distribution: normalize(&totals) },
                Some(c) => {
                    let mid = partition(slice, |i| c.test.goes_left(data.row(i)[c.feature]));
                    let left = g.nodes.len();
                    g.nodes.push(Node::Leaf { distribution: Vec::new() });
                    let right = g.nodes.len();
                    g.nodes.push(Node::Leaf { distribution: Vec::new() });
                    g.nodes[id] = Node::Split {
                        feature: c.feature,
                        test: c.test,
                        left,
                        right,
                    };
                    // right pushed first so the left subtree is grown first
                    work.push((right, start + mid, end, depth + 1));
                    work.push((left, start, start + mid, depth + 1));
                }
            }
        }
        Tree { nodes: g.nodes }
    }

    pub fn leaf(&self, x: &[f64]) -> &[f64] {
        let mut id = 0;
        loop {
            match &self.nodes[id] {
                Node::Leaf { distribution } => return distribution,
                Node::Split {
                    feature,
                    test,
                    left,
                    right,
                } => id = if test.goes_left(x[*feature]) { *left } else { *right },
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn go(t: &Tree, id: usize) -> usize {
            match &t.nodes[id] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(t, *left).max(go(t, *right)),
            }
        }
        go(self, 0)
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf { .. })).count()
    }
}

fn normalize(totals: &[f64]) -> Vec<f64> {
    let sum: f64 = totals.iter().sum();
    if sum > 0.0 {
        totals.iter().map(|w| w / sum).collect()
    } else {
        vec![1.0 / totals.len() as f64; totals.len()]
    }
}

/// Stable-order-agnostic in-place partition; returns the left count.
fn partition(slice: &mut [usize], left: impl Fn(usize) -> bool) -> usize {
    let mut mid = 0;
    for i in 0..slice.len() {
        if left(slice[i]) {
            slice.swap(i, mid);
            mid += 1;
        }
    }
    mid
}

fn side_score(w: &[f64], total: f64) -> f64 {
    w.iter().map(|x| x * x).sum::<f64>() / total
}

impl Grower<'_> {
    fn class_totals(&self, slice: &[usize]) -> Vec<f64> {
        let mut t = vec![0.0; self.n_classes];
        let labels = self.data.labels();
        for &i in slice {
            t[labels[i]] += self.class_weight[labels[i]];
        }
        t
    }

    fn best_split(&mut self, slice: &[usize], totals: &[f64], rng: &mut Rng) -> Option<Candidate> {
        let mut features = std::mem::take(&mut self.features);
        features.shuffle(rng);
        let mut best: Option<Candidate> = None;
        let mut informative = 0;
        for &f in &features {
            let found = match self.data.kinds()[f] {
                FeatureKind::Continuous => self.best_threshold(slice, totals, f),
                FeatureKind::Nominal => self.best_category(slice, totals, f),
            };
            if let Some(c) = found {
                informative += 1;
                if best.is_none_or(|b| c.score > b.score) {
                    best = Some(c);
                }
                if informative >= self.params.max_features {
                    break;
                }
            }
        }
        self.features = features;
        best
    }

    fn best_threshold(&mut self, slice: &[usize], totals: &[f64], f: usize) -> Option<Candidate> {
        let msl = self.params.min_samples_leaf.max(1);
        let labels = self.data.labels();
        self.sort_buf.clear();
        self.sort_buf
            .extend(slice.iter().map(|&i| (self.data.row(i)[f], i)));
        self.sort_buf.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        let buf = &self.sort_buf;
        let n = buf.len();
        if buf[0].0 == buf[n - 1].0 {
            return None;
        }
        let total_w: f64 = totals.iter().sum();
        let mut left = vec![0.0; self.n_classes];
        let mut right = totals.to_vec();
        let mut left_w = 0.0;
        let mut best: Option<(f64, usize)> = None;
        for pos in 0..n - 1 {
            let (_, i) = buf[pos];
            let c = labels[i];
            let w = self.class_weight[c];
            left[c] += w;
            right[c] -= w;
            left_w += w;
            if pos + 1 < msl || n - pos - 1 < msl || buf[pos].0 == buf[pos + 1].0 {
                continue;
            }
            let right_w = total_w - left_w;
            if left_w <= 0.0 || right_w <= 0.0 {
                continue;
            }
            let score = side_score(&left, left_w) + side_score(&right, right_w);
            if best.is_none_or(|(s, _)| score > s) {
                best = Some((score, pos));
            }
        }
        best.map(|(score, pos)| {
            let (a, b) = (buf[pos].0, buf[pos + 1].0);
            let mut t = a + (b - a) / 2.0;
            if t >= b {
                t = a;
            }
            Candidate {
                feature: f,
                test: SplitTest::LessEq(t),
                score,
            }
        })
    }

    fn best_category(&self, slice: &[usize], totals: &[f64], f: usize) -> Option<Candidate> {
        let msl = self.params.min_samples_leaf.max(1);
        let card = self.data.categories(f).len();
        let labels = self.data.labels();
        let mut per_cat = vec![0.0; card * self.n_classes];
        let mut counts = vec![0usize; card];
        for &i in slice {
            let code = self.data.row(i)[f] as usize;
            counts[code] += 1;
            per_cat[code * self.n_classes + labels[i]] += self.class_weight[labels[i]];
        }
        if counts.iter().filter(|&&n| n > 0).count() < 2 {
            return None;
        }
        let total_w: f64 = totals.iter().sum();
        let n = slice.len();
        let mut best: Option<Candidate> = None;
        for code in 0..card {
            if counts[code] < msl || n - counts[code] < msl {
                continue;
            }
            let left = &per_cat[code * self.n_classes..(code + 1) * self.n_classes];
            let left_w: f64 = left.iter().sum();
            let right: Vec<f64> = totals.iter().zip(left).map(|(t, l)| t - l).collect();
            let right_w = total_w - left_w;
            if left_w <= 0.0 || right_w <= 0.0 {
                continue;
            }
            let score = side_score(left, left_w) + side_score(&right, right_w);
            if best.is_none_or(|b| score > b.score) {
                best = Some(Candidate {
                    feature: f,
                    test: SplitTest::Equals(code as f64),
                    score,
                });
            }
        }
        best
    }
}
