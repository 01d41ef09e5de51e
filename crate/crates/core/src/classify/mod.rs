//! Academia/industry labelling of institutions.
//!
//! Linked institutions take their label from the registry type. Unlinked
//! ones are put to three independent voters (keyword rules, web domains and
//! a trained name model); a unanimous vote labels the institution, anything
//! else goes to manual review.

mod auc;
mod domain;
mod features;
mod model;
mod review;
mod rules;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use auc::roc_auc;
pub use domain::{domain_classify, CachedResolver, FixtureResolver, ResolverError, WebResolver};
pub use features::{feature_counts, featurize_institution, trigrams, DEFAULT_DIMENSION};
pub use model::{
    model_classify, train_type_model, TrainingMetrics, TypeModel, TypeModelOptions,
    MODEL_FORMAT_VERSION,
};
pub use review::{
    export_review_queue, import_review_labels, read_labels_csv, read_review_queue, write_labels_csv, LABELS_HEADER,
    REVIEW_HEADER,
};
pub use rules::{classify_by_registry_type, keyword_classify, LabeledList, ACADEMIC_KEYWORDS};

use crate::link::{LinkResult, Registry};
use crate::sampling::SamplingError;

#[derive(Debug, thiserror::Error)]
pub enum ClassifyError {
    #[error("row {row}: unknown label {value:?}")]
    BadLabel { row: usize, value: String },
    #[error("unresolved review rows: {0:?}")]
    Unresolved(Vec<usize>),
    #[error("training data holds a single class")]
    SingleClass,
    #[error("{0}")]
    Split(#[from] SamplingError),
    #[error("{0} unlinked institutions need a type model; run train-type-model first")]
    ModelRequired(usize),
    #[error("linked id {0} is not in the registry")]
    UnknownRegistryId(String),
    #[error("model file: {0}")]
    Model(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<csv::Error> for ClassifyError {
    fn from(e: csv::Error) -> Self {
        ClassifyError::Csv(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Academia,
    Industry,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Academia => "academia",
            Label::Industry => "industry",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "academia" => Ok(Label::Academia),
            "industry" => Ok(Label::Industry),
            _ => Err(format!("unknown label {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Vote {
    Academia,
    Industry,
    Abstain,
}

impl Vote {
    pub fn as_str(self) -> &'static str {
        match self {
            Vote::Academia => "academia",
            Vote::Industry => "industry",
            Vote::Abstain => "abstain",
        }
    }

    pub fn label(self) -> Option<Label> {
        match self {
            Vote::Academia => Some(Label::Academia),
            Vote::Industry => Some(Label::Industry),
            Vote::Abstain => None,
        }
    }
}

impl From<Label> for Vote {
    fn from(l: Label) -> Self {
        match l {
            Label::Academia => Vote::Academia,
            Label::Industry => Vote::Industry,
        }
    }
}

impl FromStr for Vote {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().eq_ignore_ascii_case("abstain") {
            Ok(Vote::Abstain)
        } else {
            s.parse::<Label>().map(Vote::from)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Votes {
    pub keyword: Vote,
    pub domain: Vote,
    pub model: Vote,
}

impl Votes {
    /// The common label when all three voters agree and none abstained.
    pub fn unanimous(&self) -> Option<Label> {
        let l = self.keyword.label()?;
        (self.domain == self.keyword && self.model == self.keyword).then_some(l)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    RegistryType,
    EnsembleUnanimous,
    Manual,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::RegistryType => "registry_type",
            Provenance::EnsembleUnanimous => "ensemble_unanimous",
            Provenance::Manual => "manual",
        }
    }
}

impl FromStr for Provenance {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "registry_type" => Ok(Provenance::RegistryType),
            "ensemble_unanimous" => Ok(Provenance::EnsembleUnanimous),
            "manual" => Ok(Provenance::Manual),
            _ => Err(format!("unknown provenance {s:?}")),
        }
    }
}

/// `name` is the registry's primary name for linked institutions and the key
/// itself otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstitutionLabel {
    pub institution_key: String,
    pub name: String,
    pub label: Label,
    pub provenance: Provenance,
    pub votes: Option<Votes>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReviewItem {
    pub institution_key: String,
    pub votes: Votes,
    pub resolved_label: Option<Label>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EnsembleOutcome {
    Labeled(InstitutionLabel),
    Review(ReviewItem),
}

/// Unanimous votes label the institution; any split or abstention is queued.
pub fn combine_votes(key: &str, votes: Votes) -> EnsembleOutcome {
    match votes.unanimous() {
        Some(label) => EnsembleOutcome::Labeled(InstitutionLabel {
            institution_key: key.to_string(),
            name: key.to_string(),
            label,
            provenance: Provenance::EnsembleUnanimous,
            votes: Some(votes),
        }),
        None => EnsembleOutcome::Review(ReviewItem {
            institution_key: key.to_string(),
            votes,
            resolved_label: None,
        }),
    }
}

pub fn ensemble_classify(
    cleaned: &str,
    list: &LabeledList,
    resolver: &dyn WebResolver,
    model: &TypeModel,
) -> EnsembleOutcome {
    let votes = Votes {
        keyword: keyword_classify(cleaned, list).into(),
        domain: domain_classify(cleaned, resolver),
        model: model_classify(cleaned, model).0.into(),
    };
    combine_votes(cleaned, votes)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClassificationOutcome {
    /// Sorted by institution key.
    pub labels: Vec<InstitutionLabel>,
    /// Sorted by institution key.
    pub review: Vec<ReviewItem>,
}

/// Runs the flowchart over every distinct institution key in `links`.
pub fn classify_institutions(
    links: &[LinkResult],
    registry: &Registry,
    list: &LabeledList,
    resolver: &dyn WebResolver,
    model: Option<&TypeModel>,
) -> Result<ClassificationOutcome, ClassifyError> {
    let mut linked: BTreeMap<String, InstitutionLabel> = BTreeMap::new();
    let mut unlinked: BTreeMap<String, ()> = BTreeMap::new();
    for link in links {
        if let Some(id) = link.linked_id() {
            if linked.contains_key(id) {
                continue;
            }
            let rec = registry
                .get(id)
                .ok_or_else(|| ClassifyError::UnknownRegistryId(id.to_string()))?;
            linked.insert(
                id.to_string(),
                InstitutionLabel {
                    institution_key: id.to_string(),
                    name: rec.primary_name.clone(),
                    label: classify_by_registry_type(rec.inst_type),
                    provenance: Provenance::RegistryType,
                    votes: None,
                },
            );
        } else if let Some(key) = link.institution_key() {
            unlinked.insert(key, ());
        }
    }
    unlinked.retain(|k, _| !linked.contains_key(k));

    let outcomes: Vec<EnsembleOutcome> = if unlinked.is_empty() {
        Vec::new()
    } else {
        let model = model.ok_or(ClassifyError::ModelRequired(unlinked.len()))?;
        let keys: Vec<&String> = unlinked.keys().collect();
        keys.par_iter()
            .map(|k| ensemble_classify(k, list, resolver, model))
            .collect()
    };

    let mut out = ClassificationOutcome {
        labels: linked.into_values().collect(),
        review: Vec::new(),
    };
    for o in outcomes {
        match o {
            EnsembleOutcome::Labeled(l) => out.labels.push(l),
            EnsembleOutcome::Review(r) => out.review.push(r),
        }
    }
    out.labels
        .sort_by(|a, b| a.institution_key.cmp(&b.institution_key));
    Ok(out)
}
