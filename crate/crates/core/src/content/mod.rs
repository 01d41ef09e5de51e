//! Predicting collaboration from abstract text alone.
//!
//! Collaborative papers are the positive class and academia-only papers the
//! negative class; industry-only and unknown papers take no part.

mod classifier;
mod metrics;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use classifier::{
    featurize_abstract, train_content_classifier, AbstractClassifier, ContentModel, MajorityBaseline,
    RandomBaseline, CONTENT_DIMENSION,
};
pub use metrics::{average_reports, macro_metrics, ClassMetrics, MetricsReport};

use crate::analytics::{Bucket, PaperClassification};
use crate::corpus::PaperRecord;
use crate::linear::TrainConfig;
use crate::sampling::{self, SamplingError, SplitRatios};

/// Smallest class size a split will accept.
pub const MIN_CLASS_SIZE: usize = 10;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ContentError {
    #[error("training data holds a single class")]
    SingleClass,
    #[error("dataset too small: {positives} collaborative and {negatives} non-collaborative abstracts, need at least {MIN_CLASS_SIZE} of each")]
    TooSmall { positives: usize, negatives: usize },
    #[error(transparent)]
    Sampling(#[from] SamplingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContentLabel {
    Collaborative,
    NonCollaborative,
}

impl ContentLabel {
    pub const ALL: [ContentLabel; 2] = [ContentLabel::Collaborative, ContentLabel::NonCollaborative];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledAbstract {
    pub paper_id: String,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
    pub label: ContentLabel,
}

/// What went into the dataset and what was left out.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub collaborative: usize,
    pub non_collaborative: usize,
    pub empty_abstract: usize,
    pub excluded_industry_only: usize,
    pub excluded_unknown: usize,
    pub missing_record: usize,
}

/// Pairs each eligible paper's abstract with its label, in classification
/// order. Papers with an empty abstract are dropped and counted.
pub fn build_content_dataset(
    classifications: &[PaperClassification],
    records: &[PaperRecord],
) -> (Vec<LabeledAbstract>, DatasetSummary) {
    let by_id: HashMap<&str, &PaperRecord> = records.iter().map(|r| (r.paper_id.as_str(), r)).collect();
    let mut summary = DatasetSummary::default();
    let mut out = Vec::new();
    for c in classifications {
        let label = match c.bucket {
            Bucket::Collaborative => ContentLabel::Collaborative,
            Bucket::AcademiaOnly => ContentLabel::NonCollaborative,
            Bucket::IndustryOnly => {
                summary.excluded_industry_only += 1;
                continue;
            }
            Bucket::Unknown => {
                summary.excluded_unknown += 1;
                continue;
            }
        };
        let Some(record) = by_id.get(c.paper_id.as_str()) else {
            summary.missing_record += 1;
            continue;
        };
        let text = record.abstract_text.trim();
        if text.is_empty() {
            summary.empty_abstract += 1;
            continue;
        }
        match label {
            ContentLabel::Collaborative => summary.collaborative += 1,
            ContentLabel::NonCollaborative => summary.non_collaborative += 1,
        }
        out.push(LabeledAbstract {
            paper_id: c.paper_id.clone(),
            abstract_text: text.to_string(),
            label,
        });
    }
    if out.is_empty() {
        log::warn!("content dataset is empty");
    }
    (out, summary)
}

fn is_positive(items: &[LabeledAbstract]) -> Vec<bool> {
    items.iter().map(|a| a.label == ContentLabel::Collaborative).collect()
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ContentSplit {
    pub train: Vec<LabeledAbstract>,
    pub val: Vec<LabeledAbstract>,
    pub test: Vec<LabeledAbstract>,
}

/// Seeded stratified split. Each class needs at least [`MIN_CLASS_SIZE`] items.
pub fn stratified_split(
    dataset: &[LabeledAbstract],
    ratios: SplitRatios,
    seed: u64,
) -> Result<ContentSplit, ContentError> {
    let labels = is_positive(dataset);
    let positives = labels.iter().filter(|&&p| p).count();
    let negatives = labels.len() - positives;
    if positives < MIN_CLASS_SIZE || negatives < MIN_CLASS_SIZE {
        return Err(ContentError::TooSmall { positives, negatives });
    }
    let idx = sampling::stratified_indices(&labels, ratios, seed)?;
    let pick = |is: &[usize]| is.iter().map(|&i| dataset[i].clone()).collect();
    Ok(ContentSplit {
        train: pick(&idx.train),
        val: pick(&idx.val),
        test: pick(&idx.test),
    })
}

/// All collaborative items plus an equal-sized seeded sample of the rest.
pub fn negative_sample(dataset: &[LabeledAbstract], seed: u64) -> Result<Vec<LabeledAbstract>, ContentError> {
    let keep = sampling::negative_sample_indices(&is_positive(dataset), seed)?;
    Ok(keep.into_iter().map(|i| dataset[i].clone()).collect())
}

pub fn evaluate(classifier: &dyn AbstractClassifier, test: &[LabeledAbstract], with_accuracy: bool) -> MetricsReport {
    let gold: Vec<ContentLabel> = test.iter().map(|a| a.label).collect();
    macro_metrics(&gold, &classifier.predict(test), with_accuracy)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContentConfig {
    pub seed: u64,
    pub ratios: SplitRatios,
    pub dimension: usize,
    /// The random baseline is averaged over this many seeds.
    pub random_trials: usize,
}

impl Default for ContentConfig {
    fn default() -> Self {
        ContentConfig {
            seed: 42,
            ratios: SplitRatios::default(),
            dimension: CONTENT_DIMENSION,
            random_trials: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Random,
    Majority,
    Model,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub negative_sampling: bool,
    pub method: Method,
    pub train_size: usize,
    pub val_size: usize,
    pub test_size: usize,
    pub metrics: MetricsReport,
}

fn row(negative_sampling: bool, method: Method, split: &ContentSplit, metrics: MetricsReport) -> ExperimentRow {
    ExperimentRow {
        negative_sampling,
        method,
        train_size: split.train.len(),
        val_size: split.val.len(),
        test_size: split.test.len(),
        metrics,
    }
}

/// The four comparison rows: random baseline and model on a balanced
/// (negative-sampled) dataset, then majority baseline and model on the
/// full, imbalanced dataset. Accuracy is only reported for the balanced rows.
pub fn run_experiments(dataset: &[LabeledAbstract], config: &ContentConfig) -> Result<Vec<ExperimentRow>, ContentError> {
    let train_cfg = TrainConfig::default();
    let mut rows = Vec::with_capacity(4);

    let balanced = negative_sample(dataset, config.seed)?;
    let split = stratified_split(&balanced, config.ratios, config.seed)?;
    let trials: Vec<MetricsReport> = (0..config.random_trials.max(1) as u64)
        .map(|t| evaluate(&RandomBaseline { seed: config.seed.wrapping_add(t) }, &split.test, true))
        .collect();
    rows.push(row(true, Method::Random, &split, average_reports(&trials).expect("at least one trial")));
    let model = train_content_classifier(&split.train, &split.val, config.seed, config.dimension, train_cfg)?;
    rows.push(row(true, Method::Model, &split, evaluate(&model, &split.test, true)));

    let split = stratified_split(dataset, config.ratios, config.seed)?;
    rows.push(row(false, Method::Majority, &split, evaluate(&MajorityBaseline, &split.test, false)));
    let model = train_content_classifier(&split.train, &split.val, config.seed, config.dimension, train_cfg)?;
    rows.push(row(false, Method::Model, &split, evaluate(&model, &split.test, false)));
    Ok(rows)
}
