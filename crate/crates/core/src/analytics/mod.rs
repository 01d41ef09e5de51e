//! Paper-level collaboration labels and the statistics built on them.

mod network;
mod stats;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

pub use network::{build_collab_network, export_graph, filter_edges, CoauthorEdge, GraphFormat};
pub use stats::{
    rankings_by_year, top_institutions, yearly_stats, BucketProportions, FirstAuthorProportions,
    FirstAuthorRow, RankEntry, VenueYearRow, YearlyStats,
};

use crate::classify::{InstitutionLabel, Label};
use crate::corpus::PaperRecord;
use crate::link::{clean_affiliation, unlinked_key, LinkResult};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum AnalyticsError {
    #[error("classification for {0} has no matching record")]
    MissingRecord(String),
    #[error("unknown graph format {0:?} (expected graphml, dot or json)")]
    UnknownFormat(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bucket {
    AcademiaOnly,
    IndustryOnly,
    Collaborative,
    Unknown,
}

impl Bucket {
    pub fn from_counts(academic: usize, industry: usize) -> Bucket {
        match (academic > 0, industry > 0) {
            (true, true) => Bucket::Collaborative,
            (true, false) => Bucket::AcademiaOnly,
            (false, true) => Bucket::IndustryOnly,
            (false, false) => Bucket::Unknown,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FirstAuthorType {
    Academia,
    Industry,
    Dual,
    Unknown,
}

/// Where each raw affiliation string points and how each institution is labelled.
#[derive(Debug, Clone, Default)]
pub struct InstitutionIndex {
    key_by_raw: HashMap<String, Option<String>>,
    labels: HashMap<String, Label>,
    names: HashMap<String, String>,
}

impl InstitutionIndex {
    pub fn new(links: &[LinkResult], labels: &[InstitutionLabel]) -> Self {
        InstitutionIndex {
            key_by_raw: links
                .iter()
                .map(|l| (l.input_raw.clone(), l.institution_key()))
                .collect(),
            labels: labels
                .iter()
                .map(|l| (l.institution_key.clone(), l.label))
                .collect(),
            names: labels
                .iter()
                .map(|l| (l.institution_key.clone(), l.name.clone()))
                .collect(),
        }
    }

    /// Institution key of a raw string; strings never linked fall back to
    /// their cleaned form.
    pub fn key_for(&self, raw: &str) -> Option<String> {
        match self.key_by_raw.get(raw) {
            Some(k) => k.clone(),
            None => unlinked_key(raw, &clean_affiliation(raw)),
        }
    }

    pub fn label(&self, key: &str) -> Option<Label> {
        self.labels.get(key).copied()
    }

    /// Display name, defaulting to the key.
    pub fn name<'a>(&'a self, key: &'a str) -> &'a str {
        self.names.get(key).map(String::as_str).unwrap_or(key)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperClassification {
    pub paper_id: String,
    pub year: i32,
    pub academic_count: usize,
    pub industry_count: usize,
    pub bucket: Bucket,
    pub first_author_type: FirstAuthorType,
    /// Distinct academic institution keys, sorted.
    pub academic_keys: Vec<String>,
    /// Distinct industry institution keys, sorted.
    pub industry_keys: Vec<String>,
    /// Keys with no label; excluded from the counts.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unlabeled_keys: Vec<String>,
}

impl PaperClassification {
    /// Every labelled institution on the paper, sorted.
    pub fn institutions(&self) -> Vec<&str> {
        let mut all: Vec<&str> = self
            .academic_keys
            .iter()
            .chain(&self.industry_keys)
            .map(String::as_str)
            .collect();
        all.sort_unstable();
        all.dedup();
        all
    }
}

pub fn label_paper(record: &PaperRecord, index: &InstitutionIndex) -> PaperClassification {
    let mut academic = BTreeSet::new();
    let mut industry = BTreeSet::new();
    let mut unlabeled = BTreeSet::new();
    for raw in record.affiliations() {
        let Some(key) = index.key_for(raw) else { continue };
        match index.label(&key) {
            Some(Label::Academia) => academic.insert(key),
            Some(Label::Industry) => industry.insert(key),
            None => unlabeled.insert(key),
        };
    }

    let first_author_type = match record.authors.first() {
        None => FirstAuthorType::Unknown,
        Some(first) => {
            let labels: BTreeSet<Label> = first
                .affiliations
                .iter()
                .filter_map(|raw| index.key_for(raw))
                .filter_map(|k| index.label(&k))
                .collect();
            match (labels.contains(&Label::Academia), labels.contains(&Label::Industry)) {
                (true, true) => FirstAuthorType::Dual,
                (true, false) => FirstAuthorType::Academia,
                (false, true) => FirstAuthorType::Industry,
                (false, false) => FirstAuthorType::Unknown,
            }
        }
    };

    PaperClassification {
        paper_id: record.paper_id.clone(),
        year: record.year,
        academic_count: academic.len(),
        industry_count: industry.len(),
        bucket: Bucket::from_counts(academic.len(), industry.len()),
        first_author_type,
        academic_keys: academic.into_iter().collect(),
        industry_keys: industry.into_iter().collect(),
        unlabeled_keys: unlabeled.into_iter().collect(),
    }
}
