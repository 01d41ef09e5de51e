use rand::Rng;
use rayon::prelude::*;

use super::metrics::macro_metrics;
use super::{ContentError, ContentLabel, LabeledAbstract};
use crate::linear::{train_logistic, LinearModel, TrainConfig};
use crate::sampling;
use crate::text::{hash_feature, tokens, SparseVector};

pub const CONTENT_DIMENSION: usize = 1 << 18;

/// Anything that assigns a label to each abstract. Baselines and trained
/// models share this interface so experiments can swap them freely.
pub trait AbstractClassifier {
    fn predict(&self, items: &[LabeledAbstract]) -> Vec<ContentLabel>;
}

/// Always predicts the non-collaborative (majority) class.
pub struct MajorityBaseline;

impl AbstractClassifier for MajorityBaseline {
    fn predict(&self, items: &[LabeledAbstract]) -> Vec<ContentLabel> {
        vec![ContentLabel::NonCollaborative; items.len()]
    }
}

/// Uniform coin flip per item, seeded.
pub struct RandomBaseline {
    pub seed: u64,
}

impl AbstractClassifier for RandomBaseline {
    fn predict(&self, items: &[LabeledAbstract]) -> Vec<ContentLabel> {
        let mut rng = sampling::rng(self.seed);
        items
            .iter()
            .map(|_| {
                if rng.gen_bool(0.5) {
                    ContentLabel::Collaborative
                } else {
                    ContentLabel::NonCollaborative
                }
            })
            .collect()
    }
}

/// Hashed unigram and bigram counts, L2-normalized.
pub fn featurize_abstract(text: &str, dimension: usize) -> SparseVector {
    let toks = tokens(text);
    let mut pairs: Vec<(usize, f64)> = toks
        .iter()
        .map(|t| (hash_feature(b'u', t, dimension), 1.0))
        .collect();
    for w in toks.windows(2) {
        pairs.push((hash_feature(b'b', &format!("{} {}", w[0], w[1]), dimension), 1.0));
    }
    SparseVector::from_pairs(pairs).l2_normalized()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContentModel {
    pub linear: LinearModel,
    pub seed: u64,
    pub best_val_macro_f1: f64,
    pub epochs_run: usize,
}

impl ContentModel {
    /// Probability of the collaborative class.
    pub fn score(&self, text: &str) -> f64 {
        self.linear
            .probability(&featurize_abstract(text, self.linear.dimension()))
    }
}

fn to_label(p: f64) -> ContentLabel {
    if p >= 0.5 {
        ContentLabel::Collaborative
    } else {
        ContentLabel::NonCollaborative
    }
}

impl AbstractClassifier for ContentModel {
    fn predict(&self, items: &[LabeledAbstract]) -> Vec<ContentLabel> {
        items.par_iter().map(|a| to_label(self.score(&a.abstract_text))).collect()
    }
}

fn featurize_all(items: &[LabeledAbstract], dimension: usize) -> Vec<(SparseVector, bool)> {
    items
        .par_iter()
        .map(|a| {
            (
                featurize_abstract(&a.abstract_text, dimension),
                a.label == ContentLabel::Collaborative,
            )
        })
        .collect()
}

/// Class-weighted logistic regression with early stopping on validation
/// macro-F1.
pub fn train_content_classifier(
    train: &[LabeledAbstract],
    val: &[LabeledAbstract],
    seed: u64,
    dimension: usize,
    config: TrainConfig,
) -> Result<ContentModel, ContentError> {
    let train_x = featurize_all(train, dimension);
    let val_x = featurize_all(val, dimension);
    let val_gold: Vec<ContentLabel> = val.iter().map(|a| a.label).collect();
    let (linear, log) = train_logistic(&train_x, dimension, config, seed, |m| {
        let pred: Vec<ContentLabel> = val_x.iter().map(|(x, _)| to_label(m.probability(x))).collect();
        macro_metrics(&val_gold, &pred, false).macro_f1
    })
    .ok_or(ContentError::SingleClass)?;
    Ok(ContentModel {
        linear,
        seed,
        best_val_macro_f1: log.best_metric,
        epochs_run: log.epochs_run,
    })
}
