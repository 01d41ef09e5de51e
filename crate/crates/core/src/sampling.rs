//! Seeded stratified splitting and subsampling over binary-labelled items.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SamplingError {
    #[error("split ratios must be non-negative and sum to 1, got {0:?}")]
    BadRatios(SplitRatios),
    #[error("dataset has a single class ({positives} positive, {negatives} negative)")]
    SingleClass { positives: usize, negatives: usize },
    #[error("fewer negatives ({negatives}) than positives ({positives})")]
    TooFewNegatives { positives: usize, negatives: usize },
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitRatios {
    pub train: f64,
    pub val: f64,
    pub test: f64,
}

impl Default for SplitRatios {
    fn default() -> Self {
        SplitRatios {
            train: 0.8,
            val: 0.1,
            test: 0.1,
        }
    }
}

impl SplitRatios {
    pub fn validate(self) -> Result<Self, SamplingError> {
        let parts = [self.train, self.val, self.test];
        if parts.iter().any(|&r| !(0.0..=1.0).contains(&r)) || (parts.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(SamplingError::BadRatios(self));
        }
        Ok(self)
    }
}

/// Item positions of each split, ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

/// Each class is shuffled with the seed (negatives first, then positives)
/// and allocated `round(n·train)`, `round(n·val)`, and the remainder.
pub fn stratified_indices(
    labels: &[bool],
    ratios: SplitRatios,
    seed: u64,
) -> Result<SplitIndices, SamplingError> {
    let ratios = ratios.validate()?;
    let positives: Vec<usize> = (0..labels.len()).filter(|&i| labels[i]).collect();
    let negatives: Vec<usize> = (0..labels.len()).filter(|&i| !labels[i]).collect();
    if positives.is_empty() || negatives.is_empty() {
        return Err(SamplingError::SingleClass {
            positives: positives.len(),
            negatives: negatives.len(),
        });
    }
    let mut rng = rng(seed);
    let mut out = SplitIndices::default();
    for mut class in [negatives, positives] {
        class.shuffle(&mut rng);
        let n = class.len();
        let n_train = ((n as f64 * ratios.train).round() as usize).min(n);
        let n_val = ((n as f64 * ratios.val).round() as usize).min(n - n_train);
        out.train.extend_from_slice(&class[..n_train]);
        out.val.extend_from_slice(&class[n_train..n_train + n_val]);
        out.test.extend_from_slice(&class[n_train + n_val..]);
    }
    out.train.sort_unstable();
    out.val.sort_unstable();
    out.test.sort_unstable();
    Ok(out)
}

/// Keeps every positive and a uniform sample (without replacement) of as
/// many negatives; returned positions are ascending.
pub fn negative_sample_indices(labels: &[bool], seed: u64) -> Result<Vec<usize>, SamplingError> {
    let positives: Vec<usize> = (0..labels.len()).filter(|&i| labels[i]).collect();
    let negatives: Vec<usize> = (0..labels.len()).filter(|&i| !labels[i]).collect();
    if negatives.len() < positives.len() {
        return Err(SamplingError::TooFewNegatives {
            positives: positives.len(),
            negatives: negatives.len(),
        });
    }
    let mut rng = rng(seed);
    let picked = rand::seq::index::sample(&mut rng, negatives.len(), positives.len());
    let mut keep: Vec<usize> = positives;
    keep.extend(picked.into_iter().map(|i| negatives[i]));
    keep.sort_unstable();
    Ok(keep)
}
