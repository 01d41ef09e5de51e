//! Class-weighted logistic regression over hashed sparse features.
//!
//! Training is per-example AdaGrad in a seeded epoch order. After every epoch
//! the caller's validation metric is evaluated and the best-scoring weights
//! are kept; training stops once the metric has not improved for `patience`
//! epochs.

use rand::seq::SliceRandom;

use crate::sampling;
use crate::text::SparseVector;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl LinearModel {
    pub fn zeros(dimension: usize) -> Self {
        LinearModel {
            weights: vec![0.0; dimension],
            bias: 0.0,
        }
    }

    pub fn dimension(&self) -> usize {
        self.weights.len()
    }

    pub fn margin(&self, x: &SparseVector) -> f64 {
        x.dot(&self.weights) + self.bias
    }

    pub fn probability(&self, x: &SparseVector) -> f64 {
        sigmoid(self.margin(x))
    }
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub max_epochs: usize,
    pub patience: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.5,
            max_epochs: 30,
            patience: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainLog {
    pub epochs_run: usize,
    pub best_epoch: usize,
    pub best_metric: f64,
}

/// Trains on `(features, is_positive)` pairs. Returns `None` when the
/// training data holds a single class.
pub fn train_logistic<F>(
    data: &[(SparseVector, bool)],
    dimension: usize,
    config: TrainConfig,
    seed: u64,
    mut validate: F,
) -> Option<(LinearModel, TrainLog)>
where
    F: FnMut(&LinearModel) -> f64,
{
    let n = data.len();
    let n_pos = data.iter().filter(|(_, y)| *y).count();
    let n_neg = n - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return None;
    }
    let w_pos = n as f64 / (2.0 * n_pos as f64);
    let w_neg = n as f64 / (2.0 * n_neg as f64);

    let mut model = LinearModel::zeros(dimension);
    let mut grad_sq = vec![0.0f64; dimension];
    let mut bias_sq = 0.0f64;
    const EPS: f64 = 1e-8;

    let mut best = model.clone();
    let mut best_metric = f64::NEG_INFINITY;
    let mut best_epoch = 0;
    let mut stale = 0;
    let mut epochs_run = 0;
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = sampling::rng(seed);

    for epoch in 1..=config.max_epochs {
        epochs_run = epoch;
        order.shuffle(&mut rng);
        for &i in &order {
            let (x, y) = &data[i];
            let p = model.probability(x);
            let target = if *y { 1.0 } else { 0.0 };
            let g = (p - target) * if *y { w_pos } else { w_neg };
            if g == 0.0 {
                continue;
            }
            for (j, xj) in x.iter() {
                let gj = g * xj;
                grad_sq[j] += gj * gj;
                model.weights[j] -= config.learning_rate * gj / (grad_sq[j].sqrt() + EPS);
            }
            bias_sq += g * g;
            model.bias -= config.learning_rate * g / (bias_sq.sqrt() + EPS);
        }
        let metric = validate(&model);
        if metric > best_metric {
            best_metric = metric;
            best = model.clone();
            best_epoch = epoch;
            stale = 0;
        } else {
            stale += 1;
            if stale >= config.patience {
                break;
            }
        }
    }
    Some((
        best,
        TrainLog {
            epochs_run,
            best_epoch,
            best_metric,
        },
    ))
}
