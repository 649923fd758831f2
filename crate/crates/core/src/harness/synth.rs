//! Desk-scale stand-in for a four-mode travel survey: Gaussian-mixture
//! classes over 14 continuous and 2 nominal features, with the rarest class
//! made of many tight subgroups scattered across its region.

use rand::seq::SliceRandom;
use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::clustering::DbscanParams;
use crate::dataset::{Dataset, Feature};
use crate::error::{Error, Result};
use crate::resample::largest_remainder;
use crate::seed::{self, Rng};

/// Class shares of walking, cycling, public transport and driving trips.
pub const LPMC_PROPORTIONS: [f64; 4] = [0.1780, 0.0327, 0.3610, 0.4283];
pub const LPMC_CLASSES: [&str; 4] = ["Walking", "Cycling", "Public Transport", "Driving"];

const N_CONTINUOUS: usize = 14;
const NOMINAL_CARDINALITY: [usize; 2] = [5, 4];
/// Per-axis spread of class centers at zero overlap, in units of the
/// within-component standard deviation. Centers shrink with `(1 − overlap)²`.
const CENTER_SCALE: f64 = 2.5;
const COMPONENTS_PER_CLASS: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthSpec {
    pub n: usize,
    pub proportions: Vec<f64>,
    /// 0 gives well separated classes, 1 places every class center at the
    /// origin.
    pub overlap: f64,
    /// Tight subgroups forming the rarest class.
    pub subgroups: usize,
    /// Per-axis standard deviation inside a subgroup.
    pub subgroup_spread: f64,
    /// Share of the rarest class drawn from its broad component instead.
    pub scatter: f64,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            n: 10_000,
            proportions: LPMC_PROPORTIONS.to_vec(),
            overlap: 0.5,
            subgroups: 100,
            subgroup_spread: 0.1,
            scatter: 0.1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticData {
    pub data: Dataset,
    pub rarest_class: usize,
    /// Subgroup of every row of the rarest class; `None` for scattered rows
    /// and other classes.
    pub subgroup: Vec<Option<usize>>,
    /// DBSCAN parameters that isolate the planted subgroups on the
    /// standardized continuous columns.
    pub planted: DbscanParams,
}

/// Generator with default structure at the given size, shares and overlap.
pub fn make_synthetic_lpmc_like(n: usize, proportions: &[f64], overlap: f64, seed: u64) -> Result<SyntheticData> {
    generate(&SynthSpec {
        n,
        proportions: proportions.to_vec(),
        overlap,
        seed,
        ..SynthSpec::default()
    })
}

fn gaussian(rng: &mut Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.sample(StandardNormal)).collect()
}

/// Category drawn with weight `1 − overlap` on `preferred`, rest uniform.
fn category(rng: &mut Rng, preferred: usize, card: usize, overlap: f64) -> f64 {
    if rng.gen::<f64>() < 1.0 - overlap {
        preferred as f64
    } else {
        rng.gen_range(0..card) as f64
    }
}

pub fn generate(spec: &SynthSpec) -> Result<SyntheticData> {
    let k = spec.proportions.len();
    if k < 2 {
        return Err(Error::InvalidParameter("at least two class proportions are required".into()));
    }
    if spec.proportions.iter().any(|p| !(*p > 0.0) || !p.is_finite()) {
        return Err(Error::InvalidParameter("class proportions must be positive".into()));
    }
    let sum: f64 = spec.proportions.iter().sum();
    if (sum - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidParameter(format!("class proportions sum to {sum}, not 1")));
    }
    if spec.n < 100 {
        return Err(Error::InvalidParameter(format!("n must be at least 100, got {}", spec.n)));
    }
    if !(0.0..=1.0).contains(&spec.overlap) {
        return Err(Error::InvalidParameter(format!("overlap must lie in [0, 1], got {}", spec.overlap)));
    }
    if spec.subgroups == 0 || !(spec.subgroup_spread > 0.0) || !(0.0..1.0).contains(&spec.scatter) {
        return Err(Error::InvalidParameter("invalid subgroup structure".into()));
    }

    let counts = largest_remainder(&spec.proportions, spec.n);
    let rarest = (0..k).min_by_key(|&c| (counts[c], c)).expect("k >= 2");
    let mut rng = seed::rng(spec.seed);
    let sep = (1.0 - spec.overlap).powi(2) * CENTER_SCALE;

    // class structure
    let mut centers: Vec<Vec<Vec<f64>>> = Vec::with_capacity(k);
    let mut preferred: Vec<[usize; 2]> = Vec::with_capacity(k);
    for c in 0..k {
        let n_comp = if c == rarest { 1 } else { COMPONENTS_PER_CLASS };
        centers.push(
            (0..n_comp)
                .map(|_| gaussian(&mut rng, N_CONTINUOUS).into_iter().map(|z| sep * z).collect())
                .collect(),
        );
        preferred.push([c % NOMINAL_CARDINALITY[0], c % NOMINAL_CARDINALITY[1]]);
    }
    let sub_centers: Vec<Vec<f64>> = (0..spec.subgroups)
        .map(|_| {
            gaussian(&mut rng, N_CONTINUOUS)
                .iter()
                .zip(&centers[rarest][0])
                .map(|(z, m)| m + z)
                .collect()
        })
        .collect();
    let sub_preferred: Vec<[usize; 2]> = (0..spec.subgroups)
        .map(|_| [rng.gen_range(0..NOMINAL_CARDINALITY[0]), rng.gen_range(0..NOMINAL_CARDINALITY[1])])
        .collect();

    // rows
    let n_scatter = (spec.scatter * counts[rarest] as f64).round() as usize;
    let group_sizes = largest_remainder(&vec![1.0; spec.subgroups], counts[rarest] - n_scatter);
    let mut rows: Vec<(Vec<f64>, usize, Option<usize>)> = Vec::with_capacity(spec.n);
    for c in 0..k {
        if c == rarest {
            for (g, &size) in group_sizes.iter().enumerate() {
                for _ in 0..size {
                    let mut x: Vec<f64> = gaussian(&mut rng, N_CONTINUOUS)
                        .iter()
                        .zip(&sub_centers[g])
                        .map(|(z, m)| m + spec.subgroup_spread * z)
                        .collect();
                    for (j, &card) in NOMINAL_CARDINALITY.iter().enumerate() {
                        x.push(category(&mut rng, sub_preferred[g][j], card, spec.overlap));
                    }
                    rows.push((x, c, Some(g)));
                }
            }
            for _ in 0..n_scatter {
                let mut x: Vec<f64> = gaussian(&mut rng, N_CONTINUOUS)
                    .iter()
                    .zip(&centers[c][0])
                    .map(|(z, m)| m + z)
                    .collect();
                for (j, &card) in NOMINAL_CARDINALITY.iter().enumerate() {
                    x.push(category(&mut rng, preferred[c][j], card, spec.overlap));
                }
                rows.push((x, c, None));
            }
        } else {
            for _ in 0..counts[c] {
                let comp = rng.gen_range(0..centers[c].len());
                let mut x: Vec<f64> = gaussian(&mut rng, N_CONTINUOUS)
                    .iter()
                    .zip(&centers[c][comp])
                    .map(|(z, m)| m + z)
                    .collect();
                for (j, &card) in NOMINAL_CARDINALITY.iter().enumerate() {
                    x.push(category(&mut rng, preferred[c][j], card, spec.overlap));
                }
                rows.push((x, c, None));
            }
        }
    }
    rows.shuffle(&mut rng);

    let mut features: Vec<Feature> = (1..=N_CONTINUOUS).map(|j| Feature::continuous(format!("x{j:02}"))).collect();
    features.push(Feature::nominal("n1"));
    features.push(Feature::nominal("n2"));
    let class_names: Vec<String> = if k == LPMC_CLASSES.len() {
        LPMC_CLASSES.iter().map(|s| s.to_string()).collect()
    } else {
        (0..k).map(|c| format!("class{c}")).collect()
    };
    let mut categories = vec![Vec::new(); N_CONTINUOUS];
    for (j, &card) in NOMINAL_CARDINALITY.iter().enumerate() {
        let letter = (b'a' + j as u8) as char;
        categories.push((0..card).map(|i| format!("{letter}{i}")).collect());
    }
    let values: Vec<f64> = rows.iter().flat_map(|r| r.0.iter().copied()).collect();
    let labels: Vec<usize> = rows.iter().map(|r| r.1).collect();
    let subgroup: Vec<Option<usize>> = rows.iter().map(|r| r.2).collect();
    let data = Dataset::from_parts(features, categories, values, labels, "mode".into(), class_names)?;

    // Inside a subgroup two rows lie about spread·√(2d) apart before scaling;
    // subgroups sit about √(2d) apart. Twice that pair distance, divided by
    // the mean column standard deviation, keeps subgroups whole and apart.
    let cols = data.continuous_columns();
    let mean_std = cols
        .iter()
        .map(|&j| {
            let v: Vec<f64> = (0..data.n_samples()).map(|i| data.row(i)[j]).collect();
            let mu = v.iter().sum::<f64>() / v.len() as f64;
            (v.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / v.len() as f64).sqrt()
        })
        .sum::<f64>()
        / cols.len() as f64;
    let eps = 2.0 * spec.subgroup_spread * (2.0 * N_CONTINUOUS as f64).sqrt() / mean_std;
    Ok(SyntheticData {
        data,
        rarest_class: rarest,
        subgroup,
        planted: DbscanParams { eps, min_pts: 2 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::class_stats;

    #[test]
    fn survey_share_counts() {
        let s = make_synthetic_lpmc_like(10_000, &LPMC_PROPORTIONS, 0.5, 1).unwrap();
        let st = class_stats(s.data.labels(), 4);
        assert_eq!(st.counts, vec![1780, 327, 3610, 4283]);
        assert_eq!(s.rarest_class, 1);
        assert_eq!(s.data.n_features(), 16);
        assert_eq!(s.data.class_names()[1], "Cycling");
    }

    #[test]
    fn deterministic() {
        let a = make_synthetic_lpmc_like(500, &LPMC_PROPORTIONS, 0.3, 9).unwrap();
        let b = make_synthetic_lpmc_like(500, &LPMC_PROPORTIONS, 0.3, 9).unwrap();
        assert_eq!(a, b);
        let c = make_synthetic_lpmc_like(500, &LPMC_PROPORTIONS, 0.3, 10).unwrap();
        assert_ne!(a.data, c.data);
    }

    #[test]
    fn invalid_inputs() {
        assert!(make_synthetic_lpmc_like(50, &LPMC_PROPORTIONS, 0.5, 0).is_err());
        assert!(make_synthetic_lpmc_like(1000, &[0.5, 0.6], 0.5, 0).is_err());
        assert!(make_synthetic_lpmc_like(1000, &[1.0], 0.5, 0).is_err());
        assert!(make_synthetic_lpmc_like(1000, &[0.5, 0.5], 1.5, 0).is_err());
        assert!(make_synthetic_lpmc_like(1000, &[0.0, 1.0], 0.5, 0).is_err());
    }
}
