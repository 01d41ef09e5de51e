use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::auc::roc_auc;
use super::features::{featurize_institution, DEFAULT_DIMENSION};
use super::{ClassifyError, Label};
use crate::linear::{train_logistic, LinearModel, TrainConfig};
use crate::sampling::{stratified_indices, SplitRatios};
use crate::text::SparseVector;

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMetrics {
    pub train_size: usize,
    pub val_size: usize,
    pub test_size: usize,
    pub val_auc: Option<f64>,
    pub test_auc: Option<f64>,
    pub epochs_run: usize,
    pub best_epoch: usize,
}

/// Industry-vs-academia scorer over hashed institution-name features.
/// Industry is the positive class.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeModel {
    pub seed: u64,
    pub linear: LinearModel,
    pub training_metrics: TrainingMetrics,
}

#[derive(Serialize, Deserialize)]
struct TypeModelFile {
    format_version: u32,
    dimension: usize,
    seed: u64,
    bias: f64,
    /// Nonzero weights as `[index, weight]`, ascending by index.
    weights: Vec<(usize, f64)>,
    training_metrics: TrainingMetrics,
}

#[derive(Debug, Clone, Copy)]
pub struct TypeModelOptions {
    pub dimension: usize,
    pub ratios: SplitRatios,
    pub train: TrainConfig,
}

impl Default for TypeModelOptions {
    fn default() -> Self {
        TypeModelOptions {
            dimension: DEFAULT_DIMENSION,
            ratios: SplitRatios::default(),
            train: TrainConfig::default(),
        }
    }
}

fn auc_of(model: &LinearModel, data: &[(SparseVector, bool)]) -> Option<f64> {
    let scores: Vec<f64> = data.iter().map(|(x, _)| model.margin(x)).collect();
    let labels: Vec<bool> = data.iter().map(|(_, y)| *y).collect();
    roc_auc(&scores, &labels)
}

/// Splits 80/10/10 (stratified, seeded), trains with early stopping on
/// validation AUC and reports held-out test AUC.
pub fn train_type_model(
    pairs: &[(String, Label)],
    seed: u64,
    options: TypeModelOptions,
) -> Result<TypeModel, ClassifyError> {
    let labels: Vec<bool> = pairs.iter().map(|(_, l)| *l == Label::Industry).collect();
    let split = stratified_indices(&labels, options.ratios, seed)?;
    let features: Vec<SparseVector> = pairs
        .par_iter()
        .map(|(s, _)| featurize_institution(s, options.dimension))
        .collect();
    let take = |idx: &[usize]| -> Vec<(SparseVector, bool)> {
        idx.iter().map(|&i| (features[i].clone(), labels[i])).collect()
    };
    let (train, val, test) = (take(&split.train), take(&split.val), take(&split.test));

    let (linear, log) = train_logistic(&train, options.dimension, options.train, seed, |m| {
        auc_of(m, &val).unwrap_or(0.0)
    })
    .ok_or(ClassifyError::SingleClass)?;

    let training_metrics = TrainingMetrics {
        train_size: train.len(),
        val_size: val.len(),
        test_size: test.len(),
        val_auc: auc_of(&linear, &val),
        test_auc: auc_of(&linear, &test),
        epochs_run: log.epochs_run,
        best_epoch: log.best_epoch,
    };
    Ok(TypeModel {
        seed,
        linear,
        training_metrics,
    })
}

impl TypeModel {
    pub fn dimension(&self) -> usize {
        self.linear.dimension()
    }

    pub fn score(&self, cleaned: &str) -> f64 {
        self.linear
            .probability(&featurize_institution(cleaned, self.dimension()))
    }

    pub fn to_json(&self) -> String {
        let file = TypeModelFile {
            format_version: MODEL_FORMAT_VERSION,
            dimension: self.dimension(),
            seed: self.seed,
            bias: self.linear.bias,
            weights: self
                .linear
                .weights
                .iter()
                .enumerate()
                .filter(|(_, w)| **w != 0.0)
                .map(|(i, w)| (i, *w))
                .collect(),
            training_metrics: self.training_metrics.clone(),
        };
        serde_json::to_string(&file).expect("model serializes")
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, ClassifyError> {
        let file: TypeModelFile =
            serde_json::from_slice(bytes).map_err(|e| ClassifyError::Model(e.to_string()))?;
        if file.format_version != MODEL_FORMAT_VERSION {
            return Err(ClassifyError::Model(format!(
                "unsupported model format version {}",
                file.format_version
            )));
        }
        if file.dimension < 2 {
            return Err(ClassifyError::Model("dimension must be at least 2".into()));
        }
        let mut linear = LinearModel::zeros(file.dimension);
        linear.bias = file.bias;
        for (i, w) in file.weights {
            *linear
                .weights
                .get_mut(i)
                .ok_or_else(|| ClassifyError::Model(format!("weight index {i} out of range")))? = w;
        }
        Ok(TypeModel {
            seed: file.seed,
            linear,
            training_metrics: file.training_metrics,
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), ClassifyError> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, ClassifyError> {
        Self::from_json(&std::fs::read(path)?)
    }
}

/// Score ≥ 0.5 is industry.
pub fn model_classify(cleaned: &str, model: &TypeModel) -> (Label, f64) {
    let score = model.score(cleaned);
    let label = if score >= 0.5 {
        Label::Industry
    } else {
        Label::Academia
    };
    (label, score)
}
