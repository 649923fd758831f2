//! Confusion matrix, precision/recall/F1, one-vs-rest ROC-AUC and average
//! precision.
//!
//! Zero denominators yield 0 together with an `undefined` flag so that
//! averages over rounds stay total.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::ScoreMatrix;

/// Rows are the true class, columns the predicted class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    n_classes: usize,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn new(y_true: &[usize], y_pred: &[usize], n_classes: usize) -> Result<Self> {
        if y_true.len() != y_pred.len() {
            return Err(Error::InvalidParameter(format!(
                "{} true labels but {} predictions",
                y_true.len(),
                y_pred.len()
            )));
        }
        let mut counts = vec![0u64; n_classes * n_classes];
        for (&t, &p) in y_true.iter().zip(y_pred) {
            if t >= n_classes || p >= n_classes {
                return Err(Error::InvalidParameter(format!(
                    "label {} out of range for {n_classes} classes",
                    t.max(p)
                )));
            }
            counts[t * n_classes + p] += 1;
        }
        Ok(ConfusionMatrix { n_classes, counts })
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn get(&self, truth: usize, predicted: usize) -> u64 {
        self.counts[truth * self.n_classes + predicted]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn true_positives(&self, class: usize) -> u64 {
        self.get(class, class)
    }

    pub fn false_positives(&self, class: usize) -> u64 {
        (0..self.n_classes).filter(|&t| t != class).map(|t| self.get(t, class)).sum()
    }

    pub fn false_negatives(&self, class: usize) -> u64 {
        (0..self.n_classes).filter(|&p| p != class).map(|p| self.get(class, p)).sum()
    }

    /// Number of samples whose true class is `class`.
    pub fn support(&self, class: usize) -> u64 {
        (0..self.n_classes).map(|p| self.get(class, p)).sum()
    }

    pub fn accuracy(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            return 0.0;
        }
        (0..self.n_classes).map(|c| self.get(c, c)).sum::<u64>() as f64 / total as f64
    }
}

pub fn confusion(y_true: &[usize], y_pred: &[usize], n_classes: usize) -> Result<ConfusionMatrix> {
    ConfusionMatrix::new(y_true, y_pred, n_classes)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// TP + FP = 0.
    pub precision_undefined: bool,
    /// TP + FN = 0.
    pub recall_undefined: bool,
    /// p + r = 0, i.e. TP = 0.
    pub f1_undefined: bool,
}

pub fn precision_recall_f1(cm: &ConfusionMatrix, class: usize) -> Prf {
    let tp = cm.true_positives(class) as f64;
    let fp = cm.false_positives(class) as f64;
    let fn_ = cm.false_negatives(class) as f64;
    let ratio = |num: f64, den: f64| if den > 0.0 { (num / den, false) } else { (0.0, true) };
    let (precision, precision_undefined) = ratio(tp, tp + fp);
    let (recall, recall_undefined) = ratio(tp, tp + fn_);
    // 2pr/(p+r) as one division of exact counts, so it is correctly rounded
    let (f1, f1_undefined) = if tp > 0.0 {
        (2.0 * tp / (2.0 * tp + fp + fn_), false)
    } else {
        (0.0, true)
    };
    Prf {
        precision,
        recall,
        f1,
        precision_undefined,
        recall_undefined,
        f1_undefined,
    }
}

fn positives(y_true: &[usize], class: usize) -> Vec<bool> {
    y_true.iter().map(|&y| y == class).collect()
}

fn check_binary(scores: &[f64], positive: &[bool]) -> Result<(usize, usize)> {
    if scores.len() != positive.len() {
        return Err(Error::InvalidParameter(format!(
            "{} scores but {} labels",
            scores.len(),
            positive.len()
        )));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::InvalidParameter("scores contain NaN".into()));
    }
    let p = positive.iter().filter(|&&b| b).count();
    let n = positive.len() - p;
    if p == 0 || n == 0 {
        return Err(Error::Degenerate("ranking metrics need at least one positive and one negative".into()));
    }
    Ok((p, n))
}

/// Mann–Whitney AUC with midranks for tied scores.
pub fn roc_auc(scores: &[f64], positive: &[bool]) -> Result<f64> {
    let (p, n) = check_binary(scores, positive)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // ranks i+1 ..= j+1 share their mean
        let midrank = (i + j + 2) as f64 / 2.0;
        let pos_in_tie = order[i..=j].iter().filter(|&&o| positive[o]).count();
        rank_sum += midrank * pos_in_tie as f64;
        i = j + 1;
    }
    let u = rank_sum - (p * (p + 1)) as f64 / 2.0;
    Ok(u / (p as f64 * n as f64))
}

/// Step-wise average precision over descending thresholds; tied scores
/// enter together.
pub fn average_precision_binary(scores: &[f64], positive: &[bool]) -> Result<f64> {
    let (p, _) = check_binary(scores, positive)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let (mut tp, mut seen) = (0usize, 0usize);
    let mut prev_recall = 0.0;
    let mut ap = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        tp += order[i..=j].iter().filter(|&&o| positive[o]).count();
        seen += j - i + 1;
        let recall = tp as f64 / p as f64;
        ap += (recall - prev_recall) * (tp as f64 / seen as f64);
        prev_recall = recall;
        i = j + 1;
    }
    Ok(ap)
}

/// One-vs-rest AUC of `class` using its score column.
pub fn roc_auc_ovr(scores: &ScoreMatrix, y_true: &[usize], class: usize) -> Result<f64> {
    check_class(scores, class)?;
    roc_auc(&scores.column(class), &positives(y_true, class))
}

pub fn average_precision(scores: &ScoreMatrix, y_true: &[usize], class: usize) -> Result<f64> {
    check_class(scores, class)?;
    average_precision_binary(&scores.column(class), &positives(y_true, class))
}

fn check_class(scores: &ScoreMatrix, class: usize) -> Result<()> {
    if class >= scores.n_classes() {
        return Err(Error::InvalidParameter(format!(
            "class {class} out of range for {} score columns",
            scores.n_classes()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
    /// `None` when the class is absent from the evaluated rows or no scores
    /// were supplied.
    pub auc: Option<f64>,
    pub average_precision: Option<f64>,
    pub precision_undefined: bool,
    pub recall_undefined: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub classes: Vec<ClassMetrics>,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    /// Mean over the classes with a defined AUC.
    pub macro_auc: Option<f64>,
    pub macro_average_precision: Option<f64>,
    pub accuracy: f64,
    pub confusion: ConfusionMatrix,
}

impl ClassReport {
    /// Predictions are the argmax of `scores`.
    pub fn from_scores(y_true: &[usize], scores: &ScoreMatrix) -> Result<Self> {
        Self::new(y_true, &scores.argmax(), Some(scores), scores.n_classes())
    }

    pub fn new(y_true: &[usize], y_pred: &[usize], scores: Option<&ScoreMatrix>, n_classes: usize) -> Result<Self> {
        let cm = confusion(y_true, y_pred, n_classes)?;
        if let Some(s) = scores {
            if s.n_rows() != y_true.len() || s.n_classes() != n_classes {
                return Err(Error::InvalidParameter("score matrix shape does not match the labels".into()));
            }
        }
        let ranking = |f: fn(&ScoreMatrix, &[usize], usize) -> Result<f64>, c: usize| -> Result<Option<f64>> {
            match scores {
                None => Ok(None),
                Some(s) => match f(s, y_true, c) {
                    Ok(v) => Ok(Some(v)),
                    Err(Error::Degenerate(_)) => Ok(None),
                    Err(e) => Err(e),
                },
            }
        };
        let mut classes = Vec::with_capacity(n_classes);
        for c in 0..n_classes {
            let prf = precision_recall_f1(&cm, c);
            classes.push(ClassMetrics {
                precision: prf.precision,
                recall: prf.recall,
                f1: prf.f1,
                support: cm.support(c),
                auc: ranking(roc_auc_ovr, c)?,
                average_precision: ranking(average_precision, c)?,
                precision_undefined: prf.precision_undefined,
                recall_undefined: prf.recall_undefined,
            });
        }
        let mean = |xs: Vec<f64>| if xs.is_empty() { 0.0 } else { xs.iter().sum::<f64>() / xs.len() as f64 };
        let mean_opt = |xs: Vec<f64>| if xs.is_empty() { None } else { Some(mean(xs)) };
        Ok(ClassReport {
            macro_precision: mean(classes.iter().map(|m| m.precision).collect()),
            macro_recall: mean(classes.iter().map(|m| m.recall).collect()),
            macro_f1: mean(classes.iter().map(|m| m.f1).collect()),
            macro_auc: mean_opt(classes.iter().filter_map(|m| m.auc).collect()),
            macro_average_precision: mean_opt(classes.iter().filter_map(|m| m.average_precision).collect()),
            accuracy: cm.accuracy(),
            confusion: cm,
            classes,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm_from(tp: u64, fp: u64, fn_: u64, tn: u64) -> ConfusionMatrix {
        let mut t = Vec::new();
        let mut p = Vec::new();
        for (n, truth, pred) in [(tp, 0, 0), (fp, 1, 0), (fn_, 0, 1), (tn, 1, 1)] {
            for _ in 0..n {
                t.push(truth);
                p.push(pred);
            }
        }
        confusion(&t, &p, 2).unwrap()
    }

    #[test]
    fn confusion_layout() {
        let cm = confusion(&[0, 1, 2], &[0, 1, 2], 3).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(cm.get(a, b), u64::from(a == b));
            }
        }
        let cm = confusion(&[0, 1], &[1, 0], 2).unwrap();
        assert_eq!((cm.get(0, 1), cm.get(1, 0), cm.get(0, 0)), (1, 1, 0));
        assert!(confusion(&[0], &[0, 1], 2).is_err());
        assert!(confusion(&[3], &[0], 2).is_err());
    }

    #[test]
    fn prf_basic_and_conventions() {
        let m = precision_recall_f1(&cm_from(1, 1, 1, 5), 0);
        assert_eq!((m.precision, m.recall, m.f1), (0.5, 0.5, 0.5));
        let m = precision_recall_f1(&cm_from(0, 0, 3, 2), 0);
        assert_eq!((m.precision, m.recall, m.f1), (0.0, 0.0, 0.0));
        assert!(m.precision_undefined && !m.recall_undefined && m.f1_undefined);
        let m = precision_recall_f1(&cm_from(2, 6, 6, 0), 0);
        assert_eq!(m.precision, m.recall);
        assert_eq!(m.f1, m.precision);
    }

    #[test]
    fn auc_edges() {
        let pos = [true, true, false, false];
        assert_eq!(roc_auc(&[0.9, 0.8, 0.2, 0.1], &pos).unwrap(), 1.0);
        assert_eq!(roc_auc(&[0.1, 0.2, 0.8, 0.9], &pos).unwrap(), 0.0);
        assert_eq!(roc_auc(&[0.5; 4], &pos).unwrap(), 0.5);
        assert!(matches!(roc_auc(&[0.1, 0.2], &[true, true]), Err(Error::Degenerate(_))));
    }

    #[test]
    fn ap_edges() {
        assert_eq!(average_precision_binary(&[0.9, 0.1, 0.2], &[true, false, false]).unwrap(), 1.0);
        let ap = average_precision_binary(&[0.3; 5], &[true, false, false, true, false]).unwrap();
        assert!((ap - 0.4).abs() < 1e-15);
        // one positive ranked last of four: recall jumps at precision 1/4
        let ap = average_precision_binary(&[0.1, 0.9, 0.8, 0.7], &[true, false, false, false]).unwrap();
        assert!((ap - 0.25).abs() < 1e-15);
    }

    #[test]
    fn report_macro_and_absent_class() {
        let s = ScoreMatrix::from_rows(&[vec![0.9, 0.1, 0.0], vec![0.2, 0.8, 0.0], vec![0.6, 0.4, 0.0]]);
        let r = ClassReport::from_scores(&[0, 1, 1], &s).unwrap();
        assert_eq!(r.classes[2].support, 0);
        assert_eq!(r.classes[2].auc, None);
        assert_eq!(r.classes[0].auc, Some(1.0));
        assert_eq!(r.classes.iter().map(|c| c.support).sum::<u64>(), 3);
        assert!((r.accuracy - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.macro_auc, Some(1.0));
    }
}
